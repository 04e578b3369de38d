//! Eve's ancilla states and attack unitary.
//!
//! The attack acts on the intercepted signal qubit and a two-qubit ancilla
//! prepared in `|00⟩`:
//!
//! ```text
//! U|0⟩|00⟩ = √F |0⟩|χ₀⟩ + √D |1⟩|ψ₀⟩
//! U|1⟩|00⟩ = √F |1⟩|χ₁⟩ + √D |0⟩|ψ₁⟩
//! ```
//!
//! with `F = 1 − D`. The ψ pair lives on `{|00⟩, |11⟩}` and the χ pair on
//! `{|01⟩, |10⟩}`, so most cross overlaps vanish identically and the only
//! nontrivial condition for basis-independent disturbance is
//! `Re⟨χ₁|χ₀⟩ = (1 − 2D)/(1 − D)`, which is met by choosing the χ₁ phases.

use core::f64::consts::{PI, TAU};

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{check_range, Error, Result};
use crate::qcore::{self, PureState, UnitaryMatrix};

/// Residuals below this count as satisfied constraints.
pub const FEASIBILITY_TOL: f64 = 1e-10;

/// Column positions of `|0⟩|00⟩` and `|1⟩|00⟩` in the 8×8 attack operator.
pub const ATTACK_COLUMNS: [usize; 2] = [0b000, 0b100];

/// Which root of `4b(1 − b) = C²` an ancilla amplitude takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `|β|² = (1 − √(1 − C²))/2 ∈ [0, ½]`
    Lower,
    /// `|β|² = (1 + √(1 − C²))/2 ∈ [½, 1]`
    Upper,
}

impl Branch {
    fn of(b: f64) -> Branch {
        if b > 0.5 {
            Branch::Upper
        } else {
            Branch::Lower
        }
    }
}

/// Phases (radians, in `[0, 2π)`) of the χ amplitudes on `|01⟩` (β) and `|10⟩` (γ).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChiPhases {
    pub beta0: f64,
    pub gamma0: f64,
    pub beta1: f64,
    pub gamma1: f64,
}

impl ChiPhases {
    fn wrapped(self) -> Self {
        let w = |x: f64| {
            let r = x % TAU;
            if r < 0.0 {
                r + TAU
            } else {
                r
            }
        };
        Self {
            beta0: w(self.beta0),
            gamma0: w(self.gamma0),
            beta1: w(self.beta1),
            gamma1: w(self.gamma1),
        }
    }
}

/// Full parameterization of the attack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackParameters {
    d: f64,
    tau1: f64,
    b0: f64,
    b1: f64,
    phases: ChiPhases,
    branch0: Branch,
    branch1: Branch,
}

impl AttackParameters {
    /// Parameters with χ₁ phases solved so every signal state sees disturbance `d`.
    pub fn new(d: f64, tau1: f64, b0: f64, b1: f64) -> Result<Self> {
        let phases = solve_phases(d, b0, b1)?;
        Self::with_phases(d, tau1, b0, b1, phases)
    }

    /// Parameters with explicit phases; no feasibility requirement, so
    /// deliberately broken attacks can be built for diagnostics.
    pub fn with_phases(d: f64, tau1: f64, b0: f64, b1: f64, phases: ChiPhases) -> Result<Self> {
        check_range("D", d, 0.0, 0.5, "[0, 0.5)")?;
        if d >= 0.5 {
            return Err(Error::OutOfRange {
                name: "D",
                value: d,
                range: "[0, 0.5)",
            });
        }
        check_range("tau1", tau1, 0.0, 1.0, "[0, 1]")?;
        check_range("b0", b0, 0.0, 1.0, "[0, 1]")?;
        check_range("b1", b1, 0.0, 1.0, "[0, 1]")?;
        for p in [phases.beta0, phases.gamma0, phases.beta1, phases.gamma1] {
            if !p.is_finite() {
                return Err(Error::NonFinite("phase"));
            }
        }
        Ok(Self {
            d,
            tau1,
            b0,
            b1,
            phases: phases.wrapped(),
            branch0: Branch::of(b0),
            branch1: Branch::of(b1),
        })
    }

    /// Parameters from ancilla concurrences and branch choices.
    pub fn from_concurrences(
        d: f64,
        c_psi0: f64,
        c_chi0: f64,
        c_chi1: f64,
        branch0: Branch,
        branch1: Branch,
    ) -> Result<Self> {
        let tau1 = tau1_sq_from_concurrence(c_psi0)?.sqrt();
        let b0 = beta_sq_from_concurrence(c_chi0, branch0)?;
        let b1 = beta_sq_from_concurrence(c_chi1, branch1)?;
        let mut p = Self::new(d, tau1, b0, b1)?;
        p.branch0 = branch0;
        p.branch1 = branch1;
        Ok(p)
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn fidelity(&self) -> f64 {
        1.0 - self.d
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }

    /// `η = D/(1 + τ₁²)`.
    pub fn eta(&self) -> f64 {
        self.d / (1.0 + self.tau1 * self.tau1)
    }

    /// `|β_{φ0}|²`.
    pub fn b0(&self) -> f64 {
        self.b0
    }

    /// `|β_{φ1}|²`.
    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn phases(&self) -> ChiPhases {
        self.phases
    }

    pub fn branch0(&self) -> Branch {
        self.branch0
    }

    pub fn branch1(&self) -> Branch {
        self.branch1
    }
}

/// The four ancilla output states. Fields are public so that general
/// (constraint-violating) ancillas can be assembled for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaSet {
    pub psi0: PureState,
    pub psi1: PureState,
    pub chi0: PureState,
    pub chi1: PureState,
}

impl AncillaSet {
    pub fn build(params: &AttackParameters) -> Result<Self> {
        let (psi0, psi1) = build_psi_states(params.tau1)?;
        let (chi0, chi1) = build_chi_states(params)?;
        Ok(Self {
            psi0,
            psi1,
            chi0,
            chi1,
        })
    }
}

/// `ψ₀ = (|00⟩ − τ₁|11⟩)/√(1+τ₁²)`, `ψ₁ = (τ₁|00⟩ + |11⟩)/√(1+τ₁²)`.
pub fn build_psi_states(tau1: f64) -> Result<(PureState, PureState)> {
    check_range("tau1", tau1, 0.0, 1.0, "[0, 1]")?;
    let n = 1.0 / (1.0 + tau1 * tau1).sqrt();
    let psi0 = PureState::from_real(&[n, 0.0, 0.0, -tau1 * n])?;
    let psi1 = PureState::from_real(&[tau1 * n, 0.0, 0.0, n])?;
    Ok((psi0, psi1))
}

/// `√b·e^{iθβ}|01⟩ + √(1−b)·e^{iθγ}|10⟩`.
pub fn chi_state(b: f64, phase_beta: f64, phase_gamma: f64) -> Result<PureState> {
    check_range("|beta|^2", b, 0.0, 1.0, "[0, 1]")?;
    let zero = Complex64::new(0.0, 0.0);
    PureState::new(vec![
        zero,
        Complex64::from_polar(b.sqrt(), phase_beta),
        Complex64::from_polar((1.0 - b).sqrt(), phase_gamma),
        zero,
    ])
}

pub fn build_chi_states(params: &AttackParameters) -> Result<(PureState, PureState)> {
    let p = params.phases;
    Ok((
        chi_state(params.b0, p.beta0, p.gamma0)?,
        chi_state(params.b1, p.beta1, p.gamma1)?,
    ))
}

/// Pure-state concurrence `2|αδ − βγ|`.
pub fn concurrence_pure(state: &PureState) -> Result<f64> {
    if state.n_qubits() != 2 {
        return Err(Error::Dimension("concurrence needs a two-qubit state"));
    }
    let a = state.amps();
    Ok((2.0 * (a[0] * a[3] - a[1] * a[2]).norm()).min(1.0))
}

fn check_concurrence(c: f64) -> Result<()> {
    check_range("concurrence", c, 0.0, 1.0, "[0, 1]")
}

/// `τ₁² = (2 − C² − 2√(1−C²))/C²`, the root of `C = 2τ₁/(1+τ₁²)` in `(0, 1]`.
pub fn tau1_sq_from_concurrence(c: f64) -> Result<f64> {
    check_concurrence(c)?;
    if c == 0.0 {
        return Err(Error::SingularConcurrence);
    }
    // Same value as the textbook form; written as C²/(1+√(1−C²))² to avoid
    // cancellation for small C.
    let s = (1.0 - c * c).sqrt();
    Ok(c * c / ((1.0 + s) * (1.0 + s)))
}

/// The discarded root `(2 − C² + 2√(1−C²))/C²`, which exceeds 1 for `C < 1`.
pub fn tau1_sq_rejected_root(c: f64) -> Result<f64> {
    check_concurrence(c)?;
    if c == 0.0 {
        return Err(Error::SingularConcurrence);
    }
    let s = (1.0 - c * c).sqrt();
    Ok((2.0 - c * c + 2.0 * s) / (c * c))
}

/// `|β|² = (1 ∓ √(1−C²))/2`.
pub fn beta_sq_from_concurrence(c: f64, branch: Branch) -> Result<f64> {
    check_concurrence(c)?;
    let s = (1.0 - c * c).sqrt();
    Ok(match branch {
        Branch::Lower => c * c / (2.0 * (1.0 + s)),
        Branch::Upper => (1.0 + s) / 2.0,
    })
}

/// Overlap `(1 − 2D)/(1 − D)` that `Re⟨χ₁|χ₀⟩` must reach.
pub fn required_overlap(d: f64) -> f64 {
    (1.0 - 2.0 * d) / (1.0 - d)
}

/// Largest `Re⟨χ₁|χ₀⟩` attainable over all phases: `√(b₀b₁) + √((1−b₀)(1−b₁))`.
pub fn overlap_reach(b0: f64, b1: f64) -> f64 {
    (b0 * b1).sqrt() + ((1.0 - b0) * (1.0 - b1)).sqrt()
}

/// χ phases meeting the overlap condition.
///
/// χ₀ stays real and positive; χ₁ takes a common phase θ on both amplitudes
/// with `cos θ = target/reach`.
pub fn solve_phases(d: f64, b0: f64, b1: f64) -> Result<ChiPhases> {
    check_range("D", d, 0.0, 0.5, "[0, 0.5)")?;
    if d >= 0.5 {
        return Err(Error::OutOfRange {
            name: "D",
            value: d,
            range: "[0, 0.5)",
        });
    }
    check_range("b0", b0, 0.0, 1.0, "[0, 1]")?;
    check_range("b1", b1, 0.0, 1.0, "[0, 1]")?;
    let target = required_overlap(d);
    let reach = overlap_reach(b0, b1);
    if reach + 1e-15 < target {
        return Err(Error::Infeasible { reach, target });
    }
    let theta = (target / reach).min(1.0).acos();
    Ok(ChiPhases {
        beta0: 0.0,
        gamma0: 0.0,
        beta1: theta,
        gamma1: theta,
    })
}

/// Residuals of the unitarity and equal-disturbance conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport {
    /// `|⟨χ₀|ψ₁⟩ + ⟨ψ₀|χ₁⟩|`
    pub unitarity_residual: f64,
    /// `|⟨ψ₀|ψ₁⟩|`
    pub psi_orthogonality_residual: f64,
    /// `|Re⟨χ₁|χ₀⟩ − (1−2D)/(1−D)|`
    pub re_overlap_residual: f64,
    /// `|⟨χ₀|ψ₀⟩ + conj⟨χ₁|ψ₁⟩|`
    pub cross_overlap_residual: f64,
    pub feasible: bool,
}

impl ConstraintReport {
    pub fn max_residual(&self) -> f64 {
        self.unitarity_residual
            .max(self.psi_orthogonality_residual)
            .max(self.re_overlap_residual)
            .max(self.cross_overlap_residual)
    }
}

pub fn validate_constraints(ancillas: &AncillaSet, d: f64) -> ConstraintReport {
    let ip = |a: &PureState, b: &PureState| qcore::inner(a.amps(), b.amps());
    let AncillaSet {
        psi0,
        psi1,
        chi0,
        chi1,
    } = ancillas;
    let unitarity_residual = (ip(chi0, psi1) + ip(psi0, chi1)).norm();
    let psi_orthogonality_residual = ip(psi0, psi1).norm();
    let re_overlap_residual = (ip(chi1, chi0).re - required_overlap(d)).abs();
    let cross_overlap_residual = (ip(chi0, psi0) + ip(chi1, psi1).conj()).norm();
    let mut report = ConstraintReport {
        unitarity_residual,
        psi_orthogonality_residual,
        re_overlap_residual,
        cross_overlap_residual,
        feasible: false,
    };
    report.feasible = report.max_residual() < FEASIBILITY_TOL;
    report
}

/// Images of `|0⟩|00⟩` and `|1⟩|00⟩` as 8-amplitude vectors (signal, E₁, E₂).
pub fn attack_images(ancillas: &AncillaSet, d: f64) -> [Vec<Complex64>; 2] {
    let sf = (1.0 - d).sqrt();
    let sd = d.sqrt();
    let image = |signal: usize, keep: &PureState, flip: &PureState| {
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        for k in 0..4 {
            v[(signal << 2) | k] += keep.amp(k) * sf;
            v[((1 - signal) << 2) | k] += flip.amp(k) * sd;
        }
        v
    };
    [
        image(0, &ancillas.chi0, &ancillas.psi0),
        image(1, &ancillas.chi1, &ancillas.psi1),
    ]
}

/// Completes the two attack images to an 8×8 unitary without checking the
/// equal-disturbance conditions.
pub fn attack_operator_from_ancillas(ancillas: &AncillaSet, d: f64) -> Result<UnitaryMatrix> {
    let [img0, img1] = attack_images(ancillas, d);
    qcore::complete_with_columns(&[(ATTACK_COLUMNS[0], &img0), (ATTACK_COLUMNS[1], &img1)], 8)
}

/// The attack unitary for constraint-feasible parameters.
pub fn build_attack_operator(params: &AttackParameters) -> Result<UnitaryMatrix> {
    let ancillas = AncillaSet::build(params)?;
    let report = validate_constraints(&ancillas, params.d);
    if !report.feasible {
        return Err(Error::Infeasible {
            reach: overlap_reach(params.b0, params.b1),
            target: required_overlap(params.d),
        });
    }
    attack_operator_from_ancillas(&ancillas, params.d)
}

/// `max_θ Re⟨χ₁|χ₀⟩` by brute-force scan over χ₁ phases; test oracle for [`overlap_reach`].
#[doc(hidden)]
pub fn scan_max_overlap(b0: f64, b1: f64, steps: usize) -> f64 {
    let chi0 = chi_state(b0, 0.0, 0.0).expect("valid b0");
    let mut best = f64::NEG_INFINITY;
    for i in 0..steps {
        for j in 0..steps {
            let tb = 2.0 * PI * i as f64 / steps as f64;
            let tg = 2.0 * PI * j as f64 / steps as f64;
            let chi1 = chi_state(b1, tb, tg).expect("valid b1");
            best = best.max(qcore::inner(chi1.amps(), chi0.amps()).re);
        }
    }
    best
}
