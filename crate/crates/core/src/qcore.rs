//! Dense complex linear algebra for small qubit registers.
//!
//! Qubit ordering is big-endian throughout: in a register of `n` qubits,
//! qubit 0 is the leftmost ket symbol and owns the most significant bit of
//! the basis index. Registers are capped at [`MAX_QUBITS`].

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// A complex probability amplitude.
pub type ComplexAmp = Complex64;

pub const MAX_QUBITS: usize = 4;

/// Tolerance for construction invariants (normalization, hermiticity, unitarity).
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Tolerance for orthonormality of user-supplied columns.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn qubits_for_dim(dim: usize) -> Option<usize> {
    if dim >= 2 && dim.is_power_of_two() {
        let n = dim.trailing_zeros() as usize;
        (n <= MAX_QUBITS).then_some(n)
    } else {
        None
    }
}

fn all_finite(v: &[Complex64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Kronecker product of two amplitude vectors, first factor most significant.
pub(crate) fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Validated index bookkeeping for a partial trace over an `n`-qubit register.
struct Reduction {
    n: usize,
    keep: Vec<usize>,
    traced: Vec<usize>,
}

impl Reduction {
    fn new(n: usize, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidIndexSet("keep list is empty"));
        }
        if keep.len() >= n {
            return Err(Error::InvalidIndexSet("keep list must be a strict subset"));
        }
        let mut seen = [false; MAX_QUBITS];
        for &q in keep {
            if q >= n {
                return Err(Error::InvalidIndexSet("qubit index out of range"));
            }
            if seen[q] {
                return Err(Error::InvalidIndexSet("duplicate qubit index"));
            }
            seen[q] = true;
        }
        let traced = (0..n).filter(|q| !seen[*q]).collect();
        Ok(Self {
            n,
            keep: keep.to_vec(),
            traced,
        })
    }

    fn kept_dim(&self) -> usize {
        1 << self.keep.len()
    }

    fn traced_dim(&self) -> usize {
        1 << self.traced.len()
    }

    /// Full register index from a kept-subsystem index and a traced-subsystem index.
    fn compose(&self, kept: usize, traced: usize) -> usize {
        let mut full = 0;
        let m = self.keep.len();
        for (j, &q) in self.keep.iter().enumerate() {
            let bit = (kept >> (m - 1 - j)) & 1;
            full |= bit << (self.n - 1 - q);
        }
        let t = self.traced.len();
        for (j, &q) in self.traced.iter().enumerate() {
            let bit = (traced >> (t - 1 - j)) & 1;
            full |= bit << (self.n - 1 - q);
        }
        full
    }
}

/// Reduced matrix `Tr_traced |v⟩⟨v|` of an arbitrary (possibly unnormalized) vector.
pub(crate) fn reduce_vector(amps: &[Complex64], keep: &[usize]) -> Result<Vec<Complex64>> {
    let n = qubits_for_dim(amps.len()).ok_or(Error::Dimension("vector length"))?;
    let red = Reduction::new(n, keep)?;
    let k = red.kept_dim();
    let mut out = vec![ZERO; k * k];
    for r in 0..k {
        for c in r..k {
            let mut acc = ZERO;
            for t in 0..red.traced_dim() {
                acc += amps[red.compose(r, t)] * amps[red.compose(c, t)].conj();
            }
            out[r * k + c] = acc;
            out[c * k + r] = acc.conj();
        }
    }
    Ok(out)
}

/// Normalized pure state of 1 to 4 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wraps amplitudes that are already normalized to within [`CONSTRUCTION_TOL`].
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_dim(amps.len()).ok_or(Error::Dimension("amplitude count"))?;
        if !all_finite(&amps) {
            return Err(Error::NonFinite("amplitudes"));
        }
        let norm = norm_sqr(&amps);
        if (norm - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Normalizes `amps` before wrapping them.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        if !all_finite(&amps) {
            return Err(Error::NonFinite("amplitudes"));
        }
        let norm = norm_sqr(&amps);
        if norm <= 0.0 {
            return Err(Error::NotNormalized(norm));
        }
        let scale = 1.0 / norm.sqrt();
        amps.iter_mut().for_each(|z| *z *= scale);
        Self::new(amps)
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index⟩` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Dimension("qubit count"));
        }
        let dim = 1 << n_qubits;
        if index >= dim {
            return Err(Error::Dimension("basis index"));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension("inner product of unequal registers"));
        }
        Ok(inner(&self.amps, &other.amps))
    }

    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        tensor(self, other)
    }

    /// Applies a unitary acting on the listed qubits (in the given order);
    /// the remaining qubits are untouched.
    pub fn apply_on(&self, u: &UnitaryMatrix, targets: &[usize]) -> Result<PureState> {
        if u.dim() != 1 << targets.len() {
            return Err(Error::Dimension(
                "operator size does not match target count",
            ));
        }
        let n = self.n_qubits;
        let amps = if targets.len() == n && targets.iter().enumerate().all(|(i, &q)| i == q) {
            u.apply(&self.amps)
        } else {
            let red = Reduction::new(n, targets)?;
            let k = red.kept_dim();
            let mut out = vec![ZERO; self.dim()];
            for t in 0..red.traced_dim() {
                for r in 0..k {
                    let mut acc = ZERO;
                    for c in 0..k {
                        acc += u.get(r, c) * self.amps[red.compose(c, t)];
                    }
                    out[red.compose(r, t)] = acc;
                }
            }
            out
        };
        PureState::new(amps)
    }

    pub fn apply(&self, u: &UnitaryMatrix) -> Result<PureState> {
        if u.dim() != self.dim() {
            return Err(Error::Dimension("operator size does not match register"));
        }
        PureState::new(u.apply(&self.amps))
    }

    pub fn projector(&self) -> DensityMatrix {
        let d = self.dim();
        let mut entries = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                entries[r * d + c] = self.amps[r] * self.amps[c].conj();
            }
        }
        DensityMatrix { dim: d, entries }
    }

    /// Reduced state on `keep`, computed directly from the amplitudes.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let entries = reduce_vector(&self.amps, keep)?;
        Ok(DensityMatrix {
            dim: 1 << keep.len(),
            entries,
        })
    }
}

/// Kronecker product of two registers.
pub fn tensor(a: &PureState, b: &PureState) -> Result<PureState> {
    if a.n_qubits + b.n_qubits > MAX_QUBITS {
        return Err(Error::Dimension("tensor product exceeds four qubits"));
    }
    Ok(PureState {
        n_qubits: a.n_qubits + b.n_qubits,
        amps: kron(&a.amps, &b.amps),
    })
}

/// Hermitian, unit-trace, positive-diagonal matrix on 1 to 4 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates a row-major `dim × dim` matrix.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        qubits_for_dim(dim).ok_or(Error::Dimension("density matrix size"))?;
        if entries.len() != dim * dim {
            return Err(Error::Dimension("entry count"));
        }
        if !all_finite(&entries) {
            return Err(Error::NonFinite("density matrix"));
        }
        let m = Self { dim, entries };
        for r in 0..dim {
            for c in r..dim {
                if (m.get(r, c) - m.get(c, r).conj()).norm() > CONSTRUCTION_TOL {
                    return Err(Error::InvalidDensityMatrix("not Hermitian"));
                }
            }
            if m.get(r, r).re < -CONSTRUCTION_TOL {
                return Err(Error::InvalidDensityMatrix("negative diagonal entry"));
            }
        }
        if (m.trace() - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::InvalidDensityMatrix("trace is not one"));
        }
        Ok(m)
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            dim,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    /// `⟨v|ρ|v⟩`.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let mut acc = ZERO;
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += v[r].conj() * self.get(r, c) * v[c];
            }
        }
        acc.re
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }
}

/// Traces out every qubit not listed in `keep`; the output orders qubits as `keep` does.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let red = Reduction::new(rho.n_qubits(), keep)?;
    let k = red.kept_dim();
    let mut entries = vec![ZERO; k * k];
    for r in 0..k {
        for c in 0..k {
            entries[r * k + c] = (0..red.traced_dim())
                .map(|t| rho.get(red.compose(r, t), red.compose(c, t)))
                .sum();
        }
    }
    Ok(DensityMatrix { dim: k, entries })
}

/// Square matrix with `U†U = I` to within [`CONSTRUCTION_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        qubits_for_dim(dim).ok_or(Error::Dimension("unitary size"))?;
        if entries.len() != dim * dim {
            return Err(Error::Dimension("entry count"));
        }
        if !all_finite(&entries) {
            return Err(Error::NonFinite("unitary"));
        }
        let u = Self { dim, entries };
        let residual = u.unitarity_residual();
        if residual >= CONSTRUCTION_TOL {
            return Err(Error::NotUnitary(residual));
        }
        Ok(u)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ONE;
        }
        Self::new(dim, entries)
    }

    /// Builds the matrix whose columns are `columns`.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let dim = columns.len();
        if columns.iter().any(|c| c.len() != dim) {
            return Err(Error::Dimension("column length"));
        }
        let mut entries = vec![ZERO; dim * dim];
        for (j, col) in columns.iter().enumerate() {
            for (i, z) in col.iter().enumerate() {
                entries[i * dim + j] = *z;
            }
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.get(r, c).conj();
            }
        }
        UnitaryMatrix { dim: d, entries }
    }

    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::Dimension("composing unitaries of different size"));
        }
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                entries[r * d + c] = (0..d).map(|k| self.get(r, k) * rhs.get(k, c)).sum();
            }
        }
        UnitaryMatrix::new(d, entries)
    }

    /// `max_jk |(U†U − I)_jk|`.
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for j in 0..d {
            for k in 0..d {
                let mut acc = ZERO;
                for i in 0..d {
                    acc += self.get(i, j).conj() * self.get(i, k);
                }
                if j == k {
                    acc -= ONE;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

/// One of the three mutually unbiased single-qubit bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    /// Computational basis `{|0⟩, |1⟩}`.
    B1,
    /// `{(|0⟩ ± |1⟩)/√2}`.
    B2,
    /// `{(|0⟩ ± i|1⟩)/√2}`.
    B3,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::B1, Basis::B2, Basis::B3];

    /// Amplitudes of the basis vector encoding `bit`.
    pub fn ket(self, bit: u8) -> [Complex64; 2] {
        let sign = if bit == 0 { 1.0 } else { -1.0 };
        match self {
            Basis::B1 if bit == 0 => [ONE, ZERO],
            Basis::B1 => [ZERO, ONE],
            Basis::B2 => [
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(sign * FRAC_1_SQRT_2, 0.0),
            ],
            Basis::B3 => [
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(0.0, sign * FRAC_1_SQRT_2),
            ],
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Unitary mapping `|0⟩, |1⟩` onto the two vectors of `basis`.
pub fn single_qubit_basis_change(basis: Basis) -> UnitaryMatrix {
    let cols = [basis.ket(0).to_vec(), basis.ket(1).to_vec()];
    UnitaryMatrix::from_columns(&cols).expect("basis vectors are orthonormal")
}

/// Completes orthonormal `columns` (placed first) to a `dim × dim` unitary.
pub fn complete_to_unitary(columns: &[Vec<Complex64>], dim: usize) -> Result<UnitaryMatrix> {
    let fixed: Vec<(usize, &[Complex64])> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| (i, c.as_slice()))
        .collect();
    complete_with_columns(&fixed, dim)
}

/// Completes orthonormal columns pinned at the given positions to a unitary.
///
/// Pinned columns are copied verbatim. The free slots are filled in ascending
/// order, each with the canonical basis vector whose residual against the
/// current span is largest (lowest index wins ties), orthogonalized twice.
pub fn complete_with_columns(fixed: &[(usize, &[Complex64])], dim: usize) -> Result<UnitaryMatrix> {
    qubits_for_dim(dim).ok_or(Error::Dimension("unitary size"))?;
    if fixed.len() > dim {
        return Err(Error::Dimension("more columns than the dimension"));
    }
    let mut slots: Vec<Option<Vec<Complex64>>> = vec![None; dim];
    for (pos, col) in fixed {
        if *pos >= dim || col.len() != dim {
            return Err(Error::Dimension("column position or length"));
        }
        if slots[*pos].is_some() {
            return Err(Error::Dimension("duplicate column position"));
        }
        if !all_finite(col) {
            return Err(Error::NonFinite("column"));
        }
        slots[*pos] = Some(col.to_vec());
    }

    let mut worst: f64 = 0.0;
    for (i, (_, a)) in fixed.iter().enumerate() {
        for (b_idx, (_, b)) in fixed.iter().enumerate().skip(i) {
            let mut g = inner(a, b);
            if i == b_idx {
                g -= ONE;
            }
            worst = worst.max(g.norm());
        }
    }
    if worst > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal(worst));
    }

    let mut span: Vec<Vec<Complex64>> = fixed.iter().map(|(_, c)| c.to_vec()).collect();
    for slot in slots.iter_mut() {
        if slot.is_some() {
            continue;
        }
        let mut best = 0;
        let mut best_norm = -1.0;
        for k in 0..dim {
            let weight: f64 = span.iter().map(|q| q[k].norm_sqr()).sum();
            let residual = 1.0 - weight;
            if residual > best_norm {
                best_norm = residual;
                best = k;
            }
        }
        let mut v = vec![ZERO; dim];
        v[best] = ONE;
        for _ in 0..2 {
            for q in &span {
                let proj = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= qi * proj;
                }
            }
        }
        let scale = 1.0 / norm_sqr(&v).sqrt();
        v.iter_mut().for_each(|z| *z *= scale);
        span.push(v.clone());
        *slot = Some(v);
    }

    let cols: Vec<Vec<Complex64>> = slots.into_iter().map(|s| s.expect("filled")).collect();
    UnitaryMatrix::from_columns(&cols)
}

#[cfg(test)]
impl UnitaryMatrix {
    fn max_entry_diff(&self, other: &UnitaryMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
