//! Entropies and mutual information, in bits.
//!
//! `0·log 0` is taken as 0 everywhere.

#[allow(unused_imports)]
use num_traits::Float;

use crate::attack::{beta_sq_from_concurrence, tau1_sq_from_concurrence, Branch};
use crate::error::{check_range, Error, Result};

/// `x·log₂ x` with the `0·log 0 = 0` convention.
fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `1 − √(1 − c²)` without cancellation for small `c`.
fn one_minus_sqrt(c: f64) -> f64 {
    let s = (1.0 - c * c).sqrt();
    c * c / (1.0 + s)
}

/// Joint distribution `p(a, e)` of two bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    p: [[f64; 2]; 2],
}

impl JointDistribution {
    pub const SUM_TOL: f64 = 1e-12;

    /// Entries in `[-1e-12, 0)` are treated as round-off and clamped to zero.
    pub fn new(p: [[f64; 2]; 2]) -> Result<Self> {
        let mut out = p;
        for x in out.iter_mut().flatten() {
            if !x.is_finite() {
                return Err(Error::InvalidDistribution("non-finite entry"));
            }
            if *x < -Self::SUM_TOL {
                return Err(Error::InvalidDistribution("negative entry"));
            }
            *x = x.max(0.0);
        }
        let sum: f64 = out.iter().flatten().sum();
        if (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::InvalidDistribution("entries do not sum to one"));
        }
        Ok(Self { p: out })
    }

    /// From the diagonal of a two-qubit density matrix in `|00⟩, |01⟩, |10⟩, |11⟩` order.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.len() != 4 {
            return Err(Error::Dimension("two-qubit diagonal has four entries"));
        }
        Self::new([[diag[0], diag[1]], [diag[2], diag[3]]])
    }

    pub fn get(&self, a: usize, e: usize) -> f64 {
        self.p[a][e]
    }

    pub fn marginal_first(&self) -> [f64; 2] {
        [self.p[0][0] + self.p[0][1], self.p[1][0] + self.p[1][1]]
    }

    pub fn marginal_second(&self) -> [f64; 2] {
        [self.p[0][0] + self.p[1][0], self.p[0][1] + self.p[1][1]]
    }
}

/// `Σ p(a,e) log₂ [p(a,e) / (p(a) p(e))]`.
pub fn mutual_information(joint: &JointDistribution) -> f64 {
    let pa = joint.marginal_first();
    let pe = joint.marginal_second();
    let mut acc = 0.0;
    for (a, &pa) in pa.iter().enumerate() {
        for (e, &pe) in pe.iter().enumerate() {
            let p = joint.get(a, e);
            if p > 0.0 {
                acc += p * (p / (pa * pe)).log2();
            }
        }
    }
    acc
}

pub fn binary_entropy(p: f64) -> Result<f64> {
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    Ok(-xlog2x(p) - xlog2x(1.0 - p))
}

/// `h(p + δ) − h(p)`, accurate when `δ` is small relative to `p` and `1 − p`.
pub fn binary_entropy_difference(p: f64, delta: f64) -> Result<f64> {
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    check_range("p + delta", p + delta, 0.0, 1.0, "[0, 1]")?;
    if p == 0.0 || p == 1.0 {
        return Ok(binary_entropy(p + delta)? - binary_entropy(p)?);
    }
    let q = 1.0 - p;
    let ln2 = core::f64::consts::LN_2;
    // −p ln(1 + δ/p) − q ln(1 − δ/q) + δ ln((q − δ)/(p + δ))
    let mut acc = -p * (delta / p).ln_1p() - q * (-delta / q).ln_1p();
    if delta != 0.0 {
        acc += delta * ((q - delta) / (p + delta)).ln();
    }
    Ok(acc / ln2)
}

/// `ε[a, b] = a log₂ a + b log₂ b − (a + b) log₂(a + b)`.
pub fn epsilon(a: f64, b: f64) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::OutOfRange {
            name: "epsilon argument",
            value: if a >= 0.0 { b } else { a },
            range: "[0, inf)",
        });
    }
    Ok(xlog2x(a) + xlog2x(b) - xlog2x(a + b))
}

/// Alice–Bob information `1 + D log₂ D + (1 − D) log₂(1 − D) = 1 − h(D)`.
pub fn i_ab(d: f64) -> Result<f64> {
    check_range("D", d, 0.0, 1.0, "[0, 1]")?;
    Ok(1.0 - binary_entropy(d)?)
}

/// General Alice–Eve expression in `(|β_{φ0}|², |β_{φ1}|², τ₁, D)`, evaluated
/// term for term. Off the `b₀ + b₁ = 1` manifold it is not a mutual
/// information and can leave `[0, 1]`; it is returned unclamped.
pub fn i_ae_general(b0: f64, b1: f64, tau1: f64, d: f64) -> Result<f64> {
    check_range("b0", b0, 0.0, 1.0, "[0, 1]")?;
    check_range("b1", b1, 0.0, 1.0, "[0, 1]")?;
    check_range("tau1", tau1, 0.0, 1.0, "[0, 1]")?;
    check_range("D", d, 0.0, 1.0, "[0, 1]")?;
    let f = 1.0 - d;
    let t2 = tau1 * tau1;
    let eta = d / (1.0 + t2);
    let lead = f * (b0 + b1) + d;
    Ok(lead - xlog2x(lead) + epsilon(f * b0 + eta, f * b1 + eta * t2)?)
}

/// The four branch pairings of `(|β_{φ0}|², |β_{φ1}|²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchPair {
    /// lower, lower
    First,
    /// lower, upper
    Second,
    /// upper, lower
    Third,
    /// upper, upper
    Fourth,
}

impl BranchPair {
    pub const ALL: [BranchPair; 4] = [
        BranchPair::First,
        BranchPair::Second,
        BranchPair::Third,
        BranchPair::Fourth,
    ];

    /// Branch number 1..=4.
    pub fn from_index(i: u8) -> Option<Self> {
        Self::ALL.get(usize::from(i).checked_sub(1)?).copied()
    }

    pub fn branches(self) -> (Branch, Branch) {
        match self {
            BranchPair::First => (Branch::Lower, Branch::Lower),
            BranchPair::Second => (Branch::Lower, Branch::Upper),
            BranchPair::Third => (Branch::Upper, Branch::Lower),
            BranchPair::Fourth => (Branch::Upper, Branch::Upper),
        }
    }
}

/// Alice–Eve information with `|β|²` values expressed through the χ concurrences.
///
/// Every pairing, including the upper/upper one, uses `(1 ± √(1 − C²))/2`.
pub fn i_ae_branch(branch: BranchPair, c_chi0: f64, c_chi1: f64, tau1: f64, d: f64) -> Result<f64> {
    let (br0, br1) = branch.branches();
    let b0 = beta_sq_from_concurrence(c_chi0, br0)?;
    let b1 = beta_sq_from_concurrence(c_chi1, br1)?;
    i_ae_general(b0, b1, tau1, d)
}

/// Alice–Eve information on `b₁ = 1 − b₀` with lower-branch `b₀` and τ₁ fixed
/// by `C_{ψ0}`, in the closed form
///
/// ```text
/// 1 + A log₂ A + B log₂ B
/// A = ½[(1 − s_χ) + D(C_ψ² − (1 − s_χ)(1 − s_ψ))/(1 − s_ψ)]
/// B = ½[(1 + s_χ) + D(2 − C_ψ² − 2s_ψ − (1 + s_χ)(1 − s_ψ))/(1 − s_ψ)]
/// ```
///
/// with `s_x = √(1 − C_x²)`.
pub fn i_ae_dependent(c_psi0: f64, c_chi0: f64, d: f64) -> Result<f64> {
    check_range("C_psi0", c_psi0, 0.0, 1.0, "(0, 1]")?;
    if c_psi0 == 0.0 {
        return Err(Error::SingularConcurrence);
    }
    check_range("C_chi0", c_chi0, 0.0, 1.0, "[0, 1]")?;
    check_range("D", d, 0.0, 0.5, "[0, 0.5]")?;
    let s_chi = (1.0 - c_chi0 * c_chi0).sqrt();
    let m_chi = one_minus_sqrt(c_chi0);
    let m_psi = one_minus_sqrt(c_psi0);
    // 2 − C² − 2s = (1 − s)²
    let a = 0.5 * (m_chi + d * (c_psi0 * c_psi0 - m_chi * m_psi) / m_psi);
    let b = 0.5 * ((1.0 + s_chi) + d * (m_psi * m_psi - (1.0 + s_chi) * m_psi) / m_psi);
    Ok(1.0 + xlog2x(a) + xlog2x(b))
}

/// Probability `p = (1 − (1 − 2D)√(1 − C²))/2`, evaluated as
/// `D + (1 − 2D)(1 − √(1 − C²))/2` so that `C = 0` gives `p = D` exactly.
pub fn equal_concurrence_flip(c: f64, d: f64) -> Result<f64> {
    check_range("C", c, 0.0, 1.0, "[0, 1]")?;
    check_range("D", d, 0.0, 1.0, "[0, 1]")?;
    Ok(d + (1.0 - 2.0 * d) * one_minus_sqrt(c) / 2.0)
}

/// Alice–Eve information when `C_{ψ0} = C_{χ0} = C`: `1 − h(p)` with
/// `p = (1 − (1 − 2D)√(1 − C²))/2`.
pub fn i_ae_equal_concurrence(c: f64, d: f64) -> Result<f64> {
    Ok(1.0 - binary_entropy(equal_concurrence_flip(c, d)?)?)
}

/// Disturbance-independent Alice–Eve information `1 − h((1 − √(1 − C²))/2)`.
pub fn i_ae_independent(c: f64) -> Result<f64> {
    check_range("C", c, 0.0, 1.0, "(0, 1]")?;
    if c == 0.0 {
        return Err(Error::SingularConcurrence);
    }
    Ok(1.0 - binary_entropy(one_minus_sqrt(c) / 2.0)?)
}

/// `(1 − √(1 − C²))/2`, the flip probability behind [`i_ae_independent`].
pub fn independent_flip(c: f64) -> Result<f64> {
    check_range("C", c, 0.0, 1.0, "[0, 1]")?;
    Ok(one_minus_sqrt(c) / 2.0)
}

/// τ₁² implied by `C_{ψ0}`; re-exported here for callers working purely in concurrences.
pub fn tau1_sq(c_psi0: f64) -> Result<f64> {
    tau1_sq_from_concurrence(c_psi0)
}
