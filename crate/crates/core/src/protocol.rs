//! One round of the entanglement-based six-state protocol under attack.
//!
//! Alice prepares a maximally entangled pair and sends its second qubit.
//! Eve applies the attack unitary to that qubit and her `|00⟩` ancilla, then
//! forwards the qubit to Bob. The four-qubit register is ordered
//! `(A, E, E₁, E₂)`: Alice's qubit, the transmitted qubit, and the two
//! ancilla qubits.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attack::{
    self, attack_images, build_attack_operator, AncillaSet, AttackParameters, ChiPhases,
};
use crate::error::{check_range, Error, Result};
use crate::qcore::{self, DensityMatrix, PureState, UnitaryMatrix};

pub use crate::qcore::Basis;

/// Qubits kept in the Alice–Eve reduced state: Alice's qubit and the first ancilla qubit.
pub const RHO_AE_QUBITS: [usize; 2] = [0, 2];

/// Qubits kept in the Alice–Bob reduced state: Alice's qubit and the transmitted qubit.
pub const RHO_AB_QUBITS: [usize; 2] = [0, 1];

/// Qubits the attack operator acts on.
pub const ATTACKED_QUBITS: [usize; 3] = [1, 2, 3];

/// Tolerance for the zero-injection residuals of [`verify_appendix_b`].
pub const INJECTION_TOL: f64 = 1e-9;

/// `Σ_v |v⟩|v⟩` written in `basis`, normalized.
pub fn prepare_pair(basis: Basis) -> PureState {
    let k0 = basis.ket(0);
    let k1 = basis.ket(1);
    let amps: Vec<Complex64> = qcore::kron(&k0, &k0)
        .into_iter()
        .zip(qcore::kron(&k1, &k1))
        .map(|(a, b)| a + b)
        .collect();
    PureState::normalized(amps).expect("pair amplitudes are nonzero")
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterceptOutcome {
    pub four_qubit_state: PureState,
    pub rho_ae: DensityMatrix,
    pub rho_ab: DensityMatrix,
}

/// Runs the attack on the second qubit of `pair`.
pub fn intercept(pair: &PureState, u: &UnitaryMatrix) -> Result<InterceptOutcome> {
    if pair.n_qubits() != 2 {
        return Err(Error::Dimension("pair must have two qubits"));
    }
    if u.dim() != 8 {
        return Err(Error::Dimension("attack operator must be 8×8"));
    }
    let ancilla = PureState::basis(2, 0)?;
    let four = pair.tensor(&ancilla)?.apply_on(u, &ATTACKED_QUBITS)?;
    let rho_ae = four.reduced(&RHO_AE_QUBITS)?;
    let rho_ab = four.reduced(&RHO_AB_QUBITS)?;
    Ok(InterceptOutcome {
        four_qubit_state: four,
        rho_ae,
        rho_ab,
    })
}

/// `reduced_rho_AE` for the computational-basis pair under `params`.
pub fn reduced_rho_ae(params: &AttackParameters) -> Result<DensityMatrix> {
    let u = build_attack_operator(params)?;
    Ok(intercept(&prepare_pair(Basis::B1), &u)?.rho_ae)
}

/// Closed-form diagonal of ρ_AE:
/// `((F b₀ + η)/2, (F(1−b₀) + ητ₁²)/2, (F b₁ + ητ₁²)/2, (F(1−b₁) + η)/2)`.
pub fn rho_ae_diagonal(params: &AttackParameters) -> [f64; 4] {
    let f = params.fidelity();
    let eta = params.eta();
    let t2 = params.tau1() * params.tau1();
    let (b0, b1) = (params.b0(), params.b1());
    [
        (f * b0 + eta) / 2.0,
        (f * (1.0 - b0) + eta * t2) / 2.0,
        (f * b1 + eta * t2) / 2.0,
        (f * (1.0 - b1) + eta) / 2.0,
    ]
}

/// The Alice–Bob state in its commonly quoted closed form: diagonal
/// `((1−D)/2, D/2, D/2, (1−D)/2)` with real corners `(1 − 2D)/4`.
pub fn rho_ab_printed(d: f64) -> Result<DensityMatrix> {
    check_range("D", d, 0.0, 0.5, "[0, 0.5]")?;
    let a = (1.0 - d) / 2.0;
    let b = d / 2.0;
    let c = (1.0 - 2.0 * d) / 4.0;
    #[rustfmt::skip]
    let m = [
        a,   0.0, 0.0, c,
        0.0, b,   0.0, 0.0,
        0.0, 0.0, b,   0.0,
        c,   0.0, 0.0, a,
    ];
    DensityMatrix::from_real(4, &m)
}

/// The Alice–Bob state implied by the attack: same diagonal as
/// [`rho_ab_printed`], corner `⟨00|ρ|11⟩ = (F/2)⟨χ₁|χ₀⟩` whose real part is
/// `(1 − 2D)/2` whenever the overlap condition holds.
pub fn rho_ab_derived(params: &AttackParameters) -> Result<DensityMatrix> {
    let anc = AncillaSet::build(params)?;
    let f = params.fidelity();
    let d = params.d();
    let corner = anc.chi1.inner(&anc.chi0)? * (f / 2.0);
    let z = Complex64::new(0.0, 0.0);
    let r = |x: f64| Complex64::new(x, 0.0);
    #[rustfmt::skip]
    let m = alloc::vec![
        r(f / 2.0), z,          z,          corner,
        z,          r(d / 2.0), z,          z,
        z,          z,          r(d / 2.0), z,
        corner.conj(), z,       z,          r(f / 2.0),
    ];
    DensityMatrix::new(4, m)
}

/// Disturbance `1 − ⟨s|ρ_B|s⟩` for each of the six signal states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisturbanceProfile {
    per_state: [[f64; 2]; 3],
}

impl DisturbanceProfile {
    pub fn get(&self, basis: Basis, bit: u8) -> f64 {
        self.per_state[basis.index()][bit as usize]
    }

    /// `(basis, bit, disturbance)` in basis-then-bit order.
    pub fn entries(&self) -> impl Iterator<Item = (Basis, u8, f64)> + '_ {
        Basis::ALL
            .into_iter()
            .flat_map(move |b| (0..2u8).map(move |v| (b, v, self.get(b, v))))
    }

    /// `max |entry − d|` over the given bases.
    pub fn max_deviation_in(&self, d: f64, bases: &[Basis]) -> f64 {
        self.entries()
            .filter(|(b, _, _)| bases.contains(b))
            .map(|(_, _, x)| (x - d).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_deviation(&self, d: f64) -> f64 {
        self.max_deviation_in(d, &Basis::ALL)
    }
}

/// Per-state disturbance of an arbitrary ancilla set, using linearity of the
/// attack on `{|0⟩, |1⟩}`. Bob's state is renormalized, so non-isometric
/// (broken) ancilla sets still give finite numbers.
pub fn disturbance_profile_for(ancillas: &AncillaSet, d: f64) -> DisturbanceProfile {
    let [img0, img1] = attack_images(ancillas, d);
    let mut per_state = [[0.0; 2]; 3];
    for basis in Basis::ALL {
        for bit in 0..2u8 {
            let s = basis.ket(bit);
            let out: Vec<Complex64> = img0
                .iter()
                .zip(&img1)
                .map(|(a, b)| s[0] * a + s[1] * b)
                .collect();
            let rho = qcore::reduce_vector(&out, &[0]).expect("three-qubit vector");
            let trace = rho[0].re + rho[3].re;
            let mut fid = Complex64::new(0.0, 0.0);
            for r in 0..2 {
                for c in 0..2 {
                    fid += s[r].conj() * rho[r * 2 + c] * s[c];
                }
            }
            per_state[basis.index()][bit as usize] = 1.0 - fid.re / trace;
        }
    }
    DisturbanceProfile { per_state }
}

/// Per-state disturbance of a constraint-feasible attack.
pub fn disturbance_profile(params: &AttackParameters) -> Result<DisturbanceProfile> {
    let ancillas = AncillaSet::build(params)?;
    if !attack::validate_constraints(&ancillas, params.d()).feasible {
        return Err(Error::Infeasible {
            reach: attack::overlap_reach(params.b0(), params.b1()),
            target: attack::required_overlap(params.d()),
        });
    }
    Ok(disturbance_profile_for(&ancillas, params.d()))
}

/// Joint outcome probabilities `p[a][b]` when both parties measure ρ_AB in `basis`.
pub fn sifted_outcomes(rho_ab: &DensityMatrix, basis: Basis) -> [[f64; 2]; 2] {
    let mut p = [[0.0; 2]; 2];
    for (a, row) in p.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            let v = qcore::kron(&basis.ket(a as u8), &basis.ket(b as u8));
            let x = rho_ab.expectation(&v);
            *cell = if x < 1e-15 { 0.0 } else { x };
        }
    }
    p
}

/// Sifted-key error fraction estimated by sampling.
///
/// Each round draws Alice's and Bob's bases uniformly; mismatched rounds are
/// discarded until `rounds` sifted rounds have been collected. A sifted round
/// in basis `b` samples the joint outcome from ρ_AB of the pair prepared in
/// `b`, measured in `b`. The generator is ChaCha8 seeded from `seed`.
pub fn qber_monte_carlo(params: &AttackParameters, rounds: u64, seed: u64) -> Result<f64> {
    if rounds == 0 {
        return Err(Error::OutOfRange {
            name: "rounds",
            value: 0.0,
            range: ">= 1",
        });
    }
    let u = build_attack_operator(params)?;
    let mut tables = [[[0.0; 2]; 2]; 3];
    for basis in Basis::ALL {
        let out = intercept(&prepare_pair(basis), &u)?;
        tables[basis.index()] = sifted_outcomes(&out.rho_ab, basis);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sifted = 0u64;
    let mut errors = 0u64;
    while sifted < rounds {
        let alice = rng.random_range(0..3usize);
        let bob = rng.random_range(0..3usize);
        if alice != bob {
            continue;
        }
        let p = &tables[alice];
        let x: f64 = rng.random();
        let error_mass = p[0][1] + p[1][0];
        let total = p[0][0] + p[1][1] + error_mass;
        if x * total < error_mass {
            errors += 1;
        }
        sifted += 1;
    }
    Ok(errors as f64 / rounds as f64)
}

/// Components outside the `{|01⟩, |10⟩}` support added to χ₀ and χ₁.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Injection {
    pub alpha0: Complex64,
    pub delta0: Complex64,
    pub alpha1: Complex64,
    pub delta1: Complex64,
}

impl Injection {
    pub fn is_zero(&self) -> bool {
        [self.alpha0, self.delta0, self.alpha1, self.delta1]
            .iter()
            .all(|z| z.norm() == 0.0)
    }
}

fn inject_one(chi: &PureState, alpha: Complex64, delta: Complex64) -> Result<PureState> {
    let extra = alpha.norm_sqr() + delta.norm_sqr();
    if extra > 1.0 {
        return Err(Error::OutOfRange {
            name: "|alpha|^2 + |delta|^2",
            value: extra,
            range: "[0, 1]",
        });
    }
    let scale = (1.0 - extra).sqrt();
    PureState::normalized(alloc::vec![
        alpha,
        chi.amp(1) * scale,
        chi.amp(2) * scale,
        delta,
    ])
}

/// General ancilla pair `φᵢ = αᵢ|00⟩ + √(1−|αᵢ|²−|δᵢ|²) χᵢ + δᵢ|11⟩`.
pub fn inject(ancillas: &AncillaSet, inj: &Injection) -> Result<AncillaSet> {
    Ok(AncillaSet {
        psi0: ancillas.psi0.clone(),
        psi1: ancillas.psi1.clone(),
        chi0: inject_one(&ancillas.chi0, inj.alpha0, inj.delta0)?,
        chi1: inject_one(&ancillas.chi1, inj.alpha1, inj.delta1)?,
    })
}

/// Residuals of a (possibly general) ancilla set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AncillaResiduals {
    /// `max |disturbance − D|` over the B₂ and B₃ states.
    pub conjugate_basis_disturbance: f64,
    /// `max |disturbance − D|` over the B₁ states.
    pub computational_disturbance: f64,
    /// `|⟨U|0⟩|00⟩, U|1⟩|00⟩⟩|`: nonzero means no unitary extends the map.
    pub image_overlap: f64,
}

impl AncillaResiduals {
    pub fn max(&self) -> f64 {
        self.conjugate_basis_disturbance
            .max(self.computational_disturbance)
            .max(self.image_overlap)
    }
}

pub fn ancilla_residuals(ancillas: &AncillaSet, d: f64) -> AncillaResiduals {
    let profile = disturbance_profile_for(ancillas, d);
    let [i0, i1] = attack_images(ancillas, d);
    AncillaResiduals {
        conjugate_basis_disturbance: profile.max_deviation_in(d, &[Basis::B2, Basis::B3]),
        computational_disturbance: profile.max_deviation_in(d, &[Basis::B1]),
        image_overlap: qcore::inner(&i0, &i1).norm(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InjectionReport {
    pub trials: usize,
    /// Largest residual over trials with all four injected amplitudes zero.
    pub zeroed_max_residual: f64,
    /// Trials with a random nonzero injection whose residual exceeded [`INJECTION_TOL`].
    pub injected_detected: usize,
    /// Smallest residual seen among the injected trials.
    pub injected_min_residual: f64,
}

/// Random-trial check that nonzero `|00⟩`/`|11⟩` components in χ₀, χ₁ break
/// basis-independent disturbance or unitarity, while the zeroed form keeps
/// every residual at round-off level.
pub fn verify_appendix_b(tau1: f64, d: f64, trials: usize, seed: u64) -> Result<InjectionReport> {
    check_range("tau1", tau1, f64::MIN_POSITIVE, 1.0, "(0, 1]")?;
    let target = attack::required_overlap(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut zeroed_max_residual: f64 = 0.0;
    let mut injected_detected = 0;
    let mut injected_min_residual = f64::INFINITY;

    for _ in 0..trials {
        let b0: f64 = rng.random();
        let mut b1 = b0;
        for _ in 0..64 {
            let cand: f64 = rng.random();
            if attack::overlap_reach(b0, cand) >= target {
                b1 = cand;
                break;
            }
        }
        let params = AttackParameters::new(d, tau1, b0, b1)?;
        let base = AncillaSet::build(&params)?;
        zeroed_max_residual = zeroed_max_residual.max(ancilla_residuals(&base, d).max());

        let draw = |rng: &mut ChaCha8Rng| {
            if rng.random_bool(0.5) {
                let r = rng.random_range(0.05..0.4);
                Complex64::from_polar(r, rng.random_range(0.0..core::f64::consts::TAU))
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let mut inj = Injection {
            alpha0: draw(&mut rng),
            delta0: draw(&mut rng),
            alpha1: draw(&mut rng),
            delta1: draw(&mut rng),
        };
        if inj.is_zero() {
            inj.alpha0 = Complex64::new(0.2, 0.0);
        }
        let broken = inject(&base, &inj)?;
        let residual = ancilla_residuals(&broken, d).max();
        injected_min_residual = injected_min_residual.min(residual);
        if residual > INJECTION_TOL {
            injected_detected += 1;
        }
    }
    Ok(InjectionReport {
        trials,
        zeroed_max_residual,
        injected_detected,
        injected_min_residual,
    })
}

/// Linear conditions on `(α_{φ0}, δ_{φ0}, α_{φ1}, δ_{φ1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionSet {
    /// Conjugate-basis disturbance plus the unitarity/cross-overlap pair, as derived.
    Derived,
    /// The derived pair split into τ₁-independent parts.
    TauIndependent,
}

/// A condition `Σ pₖ zₖ + qₖ zₖ* = 0` over the four complex unknowns.
type Condition = ([Complex64; 4], [Complex64; 4]);

fn conditions(tau1: f64, set: ConditionSet) -> Vec<Condition> {
    let z = Complex64::new(0.0, 0.0);
    let r = |x: f64| Complex64::new(x, 0.0);
    // Unknown order: α0, δ0, α1, δ1.
    match set {
        ConditionSet::Derived => alloc::vec![
            (
                [r(1.0 - tau1), r(1.0 + tau1), z, z],
                [z, z, r(1.0 - tau1), r(1.0 + tau1)]
            ),
            (
                [r(1.0 + tau1), r(1.0 - tau1), z, z],
                [z, z, r(1.0 + tau1), r(1.0 - tau1)]
            ),
            ([z, z, r(1.0), r(-tau1)], [r(tau1), r(1.0), z, z]),
            ([z, z, r(tau1), r(1.0)], [r(1.0), r(-tau1), z, z]),
        ],
        ConditionSet::TauIndependent => alloc::vec![
            ([z, z, z, r(-1.0)], [r(1.0), z, z, z]),
            ([z, z, r(1.0), z], [z, r(-1.0), z, z]),
            ([z, z, r(1.0), z], [z, r(1.0), z, z]),
            ([z, z, z, r(1.0)], [r(1.0), z, z, z]),
        ],
    }
}

/// Dimension of the real solution space of a condition set (0 means only
/// `α = δ = 0` satisfies it).
pub fn injection_null_dimension(tau1: f64, set: ConditionSet) -> usize {
    let mut rows: Vec<[f64; 8]> = Vec::new();
    for (p, q) in conditions(tau1, set) {
        let mut re = [0.0; 8];
        let mut im = [0.0; 8];
        for k in 0..4 {
            // p z + q z̄ with z = x + iy  →  (p+q)x + i(p−q)y
            let cx = p[k] + q[k];
            let cy = (p[k] - q[k]) * Complex64::new(0.0, 1.0);
            re[2 * k] = cx.re;
            re[2 * k + 1] = cy.re;
            im[2 * k] = cx.im;
            im[2 * k + 1] = cy.im;
        }
        rows.push(re);
        rows.push(im);
    }
    8 - real_rank(&mut rows, 1e-12)
}

fn real_rank(rows: &mut [[f64; 8]], tol: f64) -> usize {
    let mut rank = 0;
    for col in 0..8 {
        let pivot = (rank..rows.len()).max_by(|&a, &b| {
            rows[a][col]
                .abs()
                .partial_cmp(&rows[b][col].abs())
                .expect("finite")
        });
        let Some(pivot) = pivot else { break };
        if rows[pivot][col].abs() <= tol {
            continue;
        }
        rows.swap(rank, pivot);
        let lead = rows[rank];
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[col] / lead[col];
            for (x, l) in row.iter_mut().zip(lead.iter()) {
                *x -= f * l;
            }
        }
        rank += 1;
    }
    rank
}

/// Default attack used where only `D` matters: symmetric χ amplitudes and τ₁ = ½.
pub fn symmetric_attack(d: f64) -> Result<AttackParameters> {
    AttackParameters::new(d, 0.5, 0.5, 0.5)
}

/// Attack with χ₀ = χ₁ = the symmetric state, which violates the overlap
/// condition for every `D > 0`.
pub fn broken_attack(d: f64, tau1: f64) -> Result<AttackParameters> {
    AttackParameters::with_phases(d, tau1, 0.5, 0.5, ChiPhases::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pairs_in_each_basis() {
        let h = FRAC_1_SQRT_2;
        let phi_plus = [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)];
        let phi_minus = [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-h, 0.0)];
        for (basis, want) in [
            (Basis::B1, phi_plus),
            (Basis::B2, phi_plus),
            (Basis::B3, phi_minus),
        ] {
            let pair = prepare_pair(basis);
            for (a, b) in pair.amps().iter().zip(want) {
                assert!((a - b).norm() < 1e-15, "{basis:?}");
            }
            assert!((attack::concurrence_pure(&pair).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn no_disturbance_keeps_bell_state() {
        let p = AttackParameters::new(0.0, 0.5, 0.5, 0.5).unwrap();
        let u = build_attack_operator(&p).unwrap();
        let out = intercept(&prepare_pair(Basis::B1), &u).unwrap();
        let bell = prepare_pair(Basis::B1).projector();
        assert!(out.rho_ab.max_abs_diff(&bell) < 1e-12);
        // The ancilla factors out: four-qubit state = Φ⁺ ⊗ χ₀.
        let anc = AncillaSet::build(&p).unwrap();
        let want = prepare_pair(Basis::B1).tensor(&anc.chi0).unwrap();
        assert!((out.four_qubit_state.inner(&want).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rho_ab_diagonal_and_corner() {
        let p = AttackParameters::new(0.2, 0.5, 0.5, 0.5).unwrap();
        let u = build_attack_operator(&p).unwrap();
        let out = intercept(&prepare_pair(Basis::B1), &u).unwrap();
        let diag = out.rho_ab.diagonal();
        for (x, want) in diag.iter().zip([0.4, 0.1, 0.1, 0.4]) {
            assert!((x - want).abs() < 1e-12);
        }
        // The attack fixes Re⟨00|ρ|11⟩ = (1 − 2D)/2; see `rho_ab_printed` for the other convention.
        assert!((out.rho_ab.get(0, 3).re - 0.3).abs() < 1e-12);
        assert!(out.rho_ab.max_abs_diff(&rho_ab_derived(&p).unwrap()) < 1e-12);
    }

    #[test]
    fn intercept_rejects_bad_dimensions() {
        let u = UnitaryMatrix::identity(8).unwrap();
        assert!(intercept(&PureState::basis(1, 0).unwrap(), &u).is_err());
        let u4 = UnitaryMatrix::identity(4).unwrap();
        assert!(intercept(&prepare_pair(Basis::B1), &u4).is_err());
    }

    #[test]
    fn rho_ae_diagonal_matches_closed_form() {
        let p = AttackParameters::new(0.2, 0.5, 0.3, 0.6).unwrap();
        let rho = reduced_rho_ae(&p).unwrap();
        for (x, want) in rho.diagonal().iter().zip(rho_ae_diagonal(&p)) {
            assert!((x - want).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_disturbance_for_feasible_attack() {
        let p = AttackParameters::new(0.2, 0.5, 0.5, 0.5).unwrap();
        let prof = disturbance_profile(&p).unwrap();
        assert!(prof.max_deviation(0.2) < 1e-12);
        assert_eq!(prof.entries().count(), 6);
    }

    #[test]
    fn product_ancilla_limit_has_equal_disturbance() {
        let p = AttackParameters::new(0.15, 0.0, 0.4, 0.4).unwrap();
        let prof = disturbance_profile(&p).unwrap();
        assert!(prof.max_deviation(0.15) < 1e-12);
    }

    #[test]
    fn broken_phases_disturb_only_conjugate_bases() {
        let p = broken_attack(0.2, 0.5).unwrap();
        assert!(disturbance_profile(&p).is_err());
        let prof = disturbance_profile_for(&AncillaSet::build(&p).unwrap(), 0.2);
        assert!(prof.max_deviation_in(0.2, &[Basis::B1]) < 1e-12);
        assert!(prof.max_deviation_in(0.2, &[Basis::B2]) > 1e-3);
        assert!(prof.max_deviation_in(0.2, &[Basis::B3]) > 1e-3);
    }

    #[test]
    fn qber_is_zero_without_disturbance() {
        let p = AttackParameters::new(0.0, 0.5, 0.5, 0.5).unwrap();
        assert_eq!(qber_monte_carlo(&p, 10_000, 7).unwrap(), 0.0);
    }

    #[test]
    fn qber_is_deterministic_per_seed() {
        let p = symmetric_attack(0.2).unwrap();
        let a = qber_monte_carlo(&p, 20_000, 11).unwrap();
        let b = qber_monte_carlo(&p, 20_000, 11).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(qber_monte_carlo(&p, 0, 11).is_err());
    }

    #[test]
    fn sifted_error_mass_equals_disturbance() {
        let p = AttackParameters::new(0.3, 1.0, 0.7, 0.7).unwrap();
        let u = build_attack_operator(&p).unwrap();
        for basis in Basis::ALL {
            let out = intercept(&prepare_pair(basis), &u).unwrap();
            let t = sifted_outcomes(&out.rho_ab, basis);
            assert!((t[0][1] + t[1][0] - 0.3).abs() < 1e-12, "{basis:?}");
        }
    }

    #[test]
    fn single_injections_violate_conjugate_disturbance() {
        let p = AttackParameters::new(0.2, 0.5, 0.5, 0.5).unwrap();
        let base = AncillaSet::build(&p).unwrap();
        let v = c(0.3, 0.0);
        let z = c(0.0, 0.0);
        for inj in [
            Injection {
                alpha0: v,
                ..Default::default()
            },
            Injection {
                delta0: v,
                ..Default::default()
            },
            Injection {
                alpha1: v,
                ..Default::default()
            },
            Injection {
                delta1: v,
                ..Default::default()
            },
        ] {
            let r = ancilla_residuals(&inject(&base, &inj).unwrap(), 0.2);
            assert!(r.conjugate_basis_disturbance > 1e-3, "{inj:?}");
        }
        let zeroed = Injection {
            alpha0: z,
            delta0: z,
            alpha1: z,
            delta1: z,
        };
        assert!(ancilla_residuals(&inject(&base, &zeroed).unwrap(), 0.2).max() < 1e-12);
    }

    #[test]
    fn random_trials_detect_every_injection() {
        let r = verify_appendix_b(0.5, 0.25, 200, 3).unwrap();
        assert_eq!(r.injected_detected, 200);
        assert!(r.zeroed_max_residual < 1e-12);
        assert!(verify_appendix_b(0.0, 0.25, 1, 3).is_err());
    }

    #[test]
    fn tau_independent_conditions_force_zero() {
        for tau1 in [0.1, 0.5, 1.0] {
            assert_eq!(
                injection_null_dimension(tau1, ConditionSet::TauIndependent),
                0
            );
        }
        // δ_{φ1} = −α_{φ0}* with α_{φ0} ≠ 0 violates the split set.
        let a = c(0.3, 0.1);
        let (alpha0, delta1) = (a, -a.conj());
        let residual = (alpha0.conj() - delta1).norm();
        assert!(residual > 0.1);
    }

    #[test]
    fn derived_conditions_leave_a_two_dimensional_family() {
        for tau1 in [0.25, 0.5, 1.0] {
            assert_eq!(injection_null_dimension(tau1, ConditionSet::Derived), 2);
        }
    }

    #[test]
    fn nonzero_alpha_family_keeps_disturbance_equal_at_tau_one() {
        // α₁ = −α₀*, δ = 0 solves the derived conditions at τ₁ = 1; retune
        // the χ₁ phase so the overlap condition still holds.
        let d = 0.3;
        let a = 0.3;
        let scale2 = 1.0 - a * a;
        let target = attack::required_overlap(d);
        let theta = ((target + a * a) / scale2).acos();
        let p = AttackParameters::with_phases(
            d,
            1.0,
            0.5,
            0.5,
            ChiPhases {
                beta0: 0.0,
                gamma0: 0.0,
                beta1: theta,
                gamma1: theta,
            },
        )
        .unwrap();
        let base = AncillaSet::build(&p).unwrap();
        let inj = Injection {
            alpha0: c(a, 0.0),
            alpha1: c(-a, 0.0),
            ..Default::default()
        };
        let general = inject(&base, &inj).unwrap();
        let r = ancilla_residuals(&general, d);
        assert!(r.max() < 1e-12, "{r:?}");
    }
}
