//! Acceptance criteria, run in order with one PASS/FAIL line each.
//!
//! Built with `harness = false`: the process exits non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use sixstate::table::parse_sweep_csv;
use sixstate_core::attack::{
    build_attack_operator, build_psi_states, concurrence_pure, tau1_sq_from_concurrence,
    tau1_sq_rejected_root, validate_constraints, AncillaSet, AttackParameters,
};
use sixstate_core::infotheory::{
    i_ab, i_ae_general, i_ae_independent, mutual_information, JointDistribution,
};
use sixstate_core::keyregion::{
    critical_disturbance, delta_i, independent_threshold, KeyRegionMode, SweepRow,
};
use sixstate_core::protocol::{
    ancilla_residuals, disturbance_profile, inject, intercept, prepare_pair, qber_monte_carlo,
    reduced_rho_ae, rho_ab_derived, rho_ab_printed, symmetric_attack, Injection,
};
use sixstate_core::qcore::Basis;
use sixstate_core::Complex64;

const GRID_D: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.45];
const GRID_TAU: [f64; 3] = [0.25, 0.5, 1.0];
const GRID_B: [f64; 3] = [0.3, 0.5, 0.7];
const SUITE_LIMIT: Duration = Duration::from_secs(30);

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn grid_params() -> Vec<AttackParameters> {
    let mut out = Vec::new();
    for d in GRID_D {
        for tau in GRID_TAU {
            for b in GRID_B {
                out.push(AttackParameters::new(d, tau, b, b).expect("b0 = b1 is always feasible"));
            }
        }
    }
    out
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst_u = 0.0f64;
    let mut worst_c = 0.0f64;
    let params = grid_params();
    for p in &params {
        let u = build_attack_operator(p).unwrap();
        worst_u = worst_u.max(u.unitarity_residual());
        let report = validate_constraints(&AncillaSet::build(p).unwrap(), p.d());
        worst_c = worst_c.max(report.max_residual());
    }
    let elapsed = start.elapsed();
    outcome(
        worst_u < 1e-12 && worst_c < 1e-10 && elapsed < Duration::from_secs(1),
        format!(
            "{} operators, max|U†U−I| = {worst_u:.1e} (< 1e-12), max constraint residual = {worst_c:.1e} (< 1e-10), {:.0} ms (< 1 s)",
            params.len(),
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn criterion_2() -> Outcome {
    let worst = grid_params()
        .iter()
        .map(|p| disturbance_profile(p).unwrap().max_deviation(p.d()))
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-10,
        format!("max |disturbance − D| over 6 states × 45 attacks = {worst:.1e} (< 1e-10)"),
    )
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_derived = 0.0f64;
    let mut worst_corner = (0.0, Complex64::new(0.0, 0.0));
    for p in grid_params() {
        let u = build_attack_operator(&p).unwrap();
        let rho = intercept(&prepare_pair(Basis::B1), &u).unwrap().rho_ab;
        let diff = rho.max_abs_diff(&rho_ab_printed(p.d()).unwrap());
        if diff > worst {
            worst = diff;
            worst_corner = (p.d(), rho.get(0, 3));
        }
        worst_derived = worst_derived.max(rho.max_abs_diff(&rho_ab_derived(&p).unwrap()));
    }
    let (d, corner) = worst_corner;
    outcome(
        worst < 1e-10,
        format!(
            "max entrywise |ρ_AB − closed form| = {worst:.3e} (< 1e-10); worst at D = {d}: simulated ⟨00|ρ|11⟩ = {:.4}{:+.4}i vs (1−2D)/4 = {:.4}; simulated state matches (F/2)⟨χ₁|χ₀⟩ corner to {worst_derived:.1e}",
            corner.re,
            corner.im,
            (1.0 - 2.0 * d) / 4.0
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut points = 0;
    let mut worst = 0.0f64;
    for d in linspace(0.02, 0.48, 10) {
        for b0 in linspace(0.2, 0.8, 7) {
            for tau in [0.1, 0.25, 0.5, 0.75, 1.0] {
                let b1 = 1.0 - b0;
                let Ok(p) = AttackParameters::new(d, tau, b0, b1) else {
                    continue;
                };
                let rho = reduced_rho_ae(&p).unwrap();
                let joint = JointDistribution::from_diagonal(&rho.diagonal()).unwrap();
                let closed = i_ae_general(b0, b1, tau, d).unwrap();
                worst = worst.max((closed - mutual_information(&joint)).abs());
                points += 1;
            }
        }
    }
    outcome(
        points >= 100 && worst < 1e-9,
        format!("{points} feasible points with b0 + b1 = 1, max |closed form − I(ρ_AE diagonal)| = {worst:.1e} (< 1e-9)"),
    )
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0f64;
    let mut min_rejected = f64::INFINITY;
    for k in 1..=19 {
        let c = k as f64 * 0.05;
        let tau = tau1_sq_from_concurrence(c).unwrap().sqrt();
        let (psi0, _) = build_psi_states(tau).unwrap();
        worst = worst.max((concurrence_pure(&psi0).unwrap() - c).abs());
        min_rejected = min_rejected.min(tau1_sq_rejected_root(c).unwrap());
    }
    outcome(
        worst < 1e-12 && min_rejected > 1.0,
        format!("c = 0.05..0.95: max round-trip error {worst:.1e} (< 1e-12), smallest rejected τ₁² = {min_rejected:.4} (> 1)"),
    )
}

fn criterion_6() -> Outcome {
    let a = Complex64::new(0.3, 0.0);
    let singles = [
        Injection {
            alpha0: a,
            ..Injection::default()
        },
        Injection {
            delta0: a,
            ..Injection::default()
        },
        Injection {
            alpha1: a,
            ..Injection::default()
        },
        Injection {
            delta1: a,
            ..Injection::default()
        },
    ];
    let mut min_violation = f64::INFINITY;
    let mut max_zeroed = 0.0f64;
    for p in grid_params() {
        let base = AncillaSet::build(&p).unwrap();
        for inj in &singles {
            let r = ancilla_residuals(&inject(&base, inj).unwrap(), p.d());
            min_violation = min_violation.min(r.conjugate_basis_disturbance);
        }
        let zeroed = inject(&base, &Injection::default()).unwrap();
        max_zeroed = max_zeroed.max(ancilla_residuals(&zeroed, p.d()).max());
    }
    outcome(
        min_violation > 1e-3 && max_zeroed < 1e-12,
        format!(
            "single 0.3 injections over 45 attacks: smallest B₂/B₃ disturbance violation {min_violation:.3e} (> 1e-3); zeroed residual {max_zeroed:.1e} (< 1e-12)"
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let d_star = critical_disturbance(KeyRegionMode::Independent, 0.7266)
        .unwrap()
        .d_star
        .unwrap();
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if independent_threshold(mid).unwrap() < 0.1565 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c_at = 0.5 * (lo + hi);
    let elapsed = start.elapsed();
    outcome(
        (d_star - 0.1565).abs() <= 0.002 && (c_at - 0.74).abs() <= 0.02 && elapsed < Duration::from_secs(1),
        format!(
            "d*(0.7266) = {d_star:.6} (0.1565 ± 0.002); c with d* = 0.1565 is {c_at:.4} (0.74 ± 0.02); {:.1} ms (< 1 s)",
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn criterion_8() -> Outcome {
    let i_ae = i_ae_independent(1.0).unwrap();
    let mut worst = 0.0f64;
    let mut min_delta = f64::INFINITY;
    for d in linspace(0.001, 0.499, 499) {
        let delta = delta_i(KeyRegionMode::Independent, 1.0, d).unwrap();
        worst = worst.max((delta - i_ab(d).unwrap()).abs());
        min_delta = min_delta.min(delta);
    }
    outcome(
        i_ae == 0.0 && worst < 1e-12 && min_delta > 0.0,
        format!("I_AE(c=1) = {i_ae}, max |ΔI − I_AB| = {worst:.1e} (< 1e-12), min ΔI on [0.001, 0.499] = {min_delta:.3e} (> 0)"),
    )
}

fn criterion_9() -> Outcome {
    let mut min_delta = f64::INFINITY;
    for c in linspace(0.01, 1.0, 100) {
        for d in linspace(0.01, 0.49, 100) {
            min_delta = min_delta.min(delta_i(KeyRegionMode::Dependent, c, d).unwrap());
        }
    }
    let zero = linspace(0.01, 0.49, 100)
        .map(|d| delta_i(KeyRegionMode::Dependent, 0.0, d).unwrap().abs())
        .fold(0.0, f64::max);
    let floor = critical_disturbance(KeyRegionMode::Dependent, 0.009)
        .unwrap()
        .precision_floor
        .unwrap();
    outcome(
        min_delta > 0.0 && zero < 1e-12,
        format!(
            "min ΔI on 100×100 grid = {min_delta:.3e} (> 0), max |ΔI(c=0)| = {zero:.1e} (< 1e-12); precision floor at c = 0.009: |ΔI| < 1e-12 for d > {floor:.7}"
        ),
    )
}

fn figure_rows(id: &str) -> Vec<SweepRow> {
    let out = Command::new(env!("CARGO_BIN_EXE_sixstate"))
        .args(["figure", "--id", id, "--format", "csv"])
        .env_remove(sixstate::OUT_DIR_ENV)
        .output()
        .expect("spawn sixstate");
    assert!(
        out.status.success(),
        "figure --id {id} exited with {}",
        out.status
    );
    parse_sweep_csv(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

fn by_series(rows: &[SweepRow]) -> Vec<&[SweepRow]> {
    rows.chunk_by(|a, b| a.c == b.c).collect()
}

/// Bisection on ΔI inside a bracketing pair of grid rows.
fn refine(lo: &SweepRow, hi: &SweepRow) -> f64 {
    let f = |d| delta_i(KeyRegionMode::Independent, lo.c, d).unwrap();
    let (mut a, mut b) = (lo.d, hi.d);
    let fa = f(a);
    while b - a > 1e-13 {
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn criterion_10() -> Outcome {
    let fig1 = figure_rows("1");
    let s1 = by_series(&fig1);
    let fig1_ok = s1.len() == 9 && fig1.iter().all(|r| r.c < 0.1 - 1e-12 || r.delta >= 0.0);
    let fig1_min = fig1.iter().map(|r| r.delta).fold(f64::INFINITY, f64::min);

    let fig2 = figure_rows("2");
    let s2 = by_series(&fig2);
    let mut fig2_ok = s2.len() == 9;
    let mut worst_root = 0.0f64;
    for series in &s2 {
        let crossings: Vec<_> = series
            .windows(2)
            .filter(|w| (w[0].delta > 0.0) != (w[1].delta > 0.0))
            .collect();
        if series[0].c < 1.0 {
            if crossings.len() != 1 {
                fig2_ok = false;
                continue;
            }
            let c = series[0].c;
            let expected = (1.0 - (1.0 - c * c).sqrt()) / 2.0;
            worst_root =
                worst_root.max((refine(&crossings[0][0], &crossings[0][1]) - expected).abs());
        } else if !crossings.is_empty() {
            fig2_ok = false;
        }
    }
    outcome(
        fig1_ok && fig2_ok && worst_root < 1e-6,
        format!(
            "figure 1: {} curves, min ΔI = {fig1_min:.3e} (≥ 0); figure 2: {} curves, one sign change each, max |d* − (1−√(1−c²))/2| = {worst_root:.1e} (< 1e-6)",
            s1.len(),
            s2.len()
        ),
    )
}

fn criterion_11() -> Outcome {
    let p = symmetric_attack(0.2).unwrap();
    let a = qber_monte_carlo(&p, 1_000_000, 2024).unwrap();
    let b = qber_monte_carlo(&p, 1_000_000, 2024).unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_sixstate"))
            .args([
                "simulate", "--d", "0.2", "--rounds", "1000000", "--seed", "2024",
            ])
            .env_remove(sixstate::OUT_DIR_ENV)
            .output()
            .expect("spawn sixstate")
    };
    let (x, y) = (run(), run());
    let identical = a.to_bits() == b.to_bits() && x.status.success() && x.stdout == y.stdout;
    outcome(
        (a - 0.2).abs() <= 0.002 && identical,
        format!(
            "QBER(D = 0.2, 10⁶ sifted rounds, seed 2024) = {a:.5} (0.2 ± 0.002); repeated runs byte-identical: {identical}"
        ),
    )
}

fn main() {
    let suite_start = Instant::now();
    let criteria: [Criterion; 11] = [
        ("unitarity and constraints", criterion_1),
        ("equal disturbance", criterion_2),
        ("Alice-Bob state closed form", criterion_3),
        ("definitional mutual information", criterion_4),
        ("concurrence inversion", criterion_5),
        ("ancilla support injection", criterion_6),
        ("standard-attack threshold", criterion_7),
        ("maximal entanglement", criterion_8),
        ("dependent-mode positivity", criterion_9),
        ("figure regression", criterion_10),
        ("QBER Monte Carlo", criterion_11),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut results: Vec<Outcome> = criteria
        .iter()
        .map(|(_, f)| {
            panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into());
                outcome(false, format!("panicked: {msg}"))
            })
        })
        .collect();
    let _ = panic::take_hook();

    let total = suite_start.elapsed();
    let r10 = &mut results[9];
    r10.pass &= total < SUITE_LIMIT;
    r10.detail.push_str(&format!(
        "; full suite {:.2} s (< 30 s)",
        total.as_secs_f64()
    ));

    for (i, ((name, _), r)) in criteria.iter().zip(&results).enumerate() {
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} [{name}] {}", i + 1, r.detail);
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
