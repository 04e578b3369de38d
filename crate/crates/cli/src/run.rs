use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::Subcommand;
use sixstate_core::attack::{
    build_attack_operator, validate_constraints, AncillaSet, AttackParameters,
};
use sixstate_core::infotheory::{i_ab, mutual_information, JointDistribution};
use sixstate_core::keyregion::{
    critical_disturbance, delta_i, independent_threshold, sweep, DRange, KeyRegionMode, SweepRow,
};
use sixstate_core::protocol::{
    disturbance_profile, injection_null_dimension, qber_monte_carlo, reduced_rho_ae,
    verify_appendix_b, ConditionSet,
};

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::svg::{emit_svg, Axes};
use crate::table::Table;

/// Environment variable naming the directory for relative `--output` paths.
pub const OUT_DIR_ENV: &str = "SIXSTATE_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Build the attack for (d, tau1, b0, b1) and report constraint residuals
    Validate,
    /// Sample the sifted-key error rate and report disturbances and information
    Simulate,
    /// Tabulate ΔI over a concurrence × disturbance grid
    Sweep,
    /// Regenerate the data behind figure 1 (dependent) or 2 (independent)
    Figure,
    /// Locate the disturbance where ΔI changes sign
    Critical,
    /// Check that χ components outside {|01⟩, |10⟩} break the attack
    VerifyAppendix,
}

fn params(cfg: &RunConfig) -> Result<AttackParameters, CliError> {
    Ok(AttackParameters::new(cfg.d, cfg.tau1, cfg.b0, cfg.b1)?)
}

fn validate(cfg: &RunConfig) -> Result<Table, CliError> {
    let p = params(cfg)?;
    let u = build_attack_operator(&p)?;
    let report = validate_constraints(&AncillaSet::build(&p)?, p.d());
    let profile = disturbance_profile(&p)?;
    Ok(Table::record(vec![
        ("d", p.d().into()),
        ("tau1", p.tau1().into()),
        ("b0", p.b0().into()),
        ("b1", p.b1().into()),
        ("theta", p.phases().beta1.into()),
        ("operator_unitarity_residual", u.unitarity_residual().into()),
        ("unitarity_residual", report.unitarity_residual.into()),
        (
            "psi_orthogonality_residual",
            report.psi_orthogonality_residual.into(),
        ),
        ("re_overlap_residual", report.re_overlap_residual.into()),
        (
            "cross_overlap_residual",
            report.cross_overlap_residual.into(),
        ),
        (
            "max_disturbance_deviation",
            profile.max_deviation(p.d()).into(),
        ),
        ("feasible", report.feasible.into()),
    ]))
}

fn simulate(cfg: &RunConfig) -> Result<Table, CliError> {
    let p = params(cfg)?;
    let qber = qber_monte_carlo(&p, cfg.rounds, cfg.seed)?;
    let profile = disturbance_profile(&p)?;
    let rho_ae = reduced_rho_ae(&p)?;
    let i_ae = mutual_information(&JointDistribution::from_diagonal(&rho_ae.diagonal())?);
    Ok(Table::record(vec![
        ("d", p.d().into()),
        ("tau1", p.tau1().into()),
        ("b0", p.b0().into()),
        ("b1", p.b1().into()),
        ("rounds", cfg.rounds.into()),
        ("seed", cfg.seed.into()),
        ("qber", qber.into()),
        (
            "qber_std_error",
            (p.d() * (1.0 - p.d()) / cfg.rounds as f64).sqrt().into(),
        ),
        (
            "max_disturbance_deviation",
            profile.max_deviation(p.d()).into(),
        ),
        ("i_ab", i_ab(p.d())?.into()),
        ("i_ae", i_ae.into()),
    ]))
}

fn sweep_rows(cfg: &RunConfig, mode: KeyRegionMode) -> Result<Vec<SweepRow>, CliError> {
    let range = DRange {
        min: cfg.d_min,
        max: cfg.d_max,
    };
    Ok(sweep(mode, &cfg.c, range, cfg.steps)?)
}

fn critical(cfg: &RunConfig) -> Result<Table, CliError> {
    let mode = KeyRegionMode::from(cfg.mode);
    let mut t = Table::new(&[
        "mode",
        "c",
        "d_star",
        "d_star_closed_form",
        "precision_floor",
        "key_region",
    ]);
    for &c in &cfg.c {
        let cp = critical_disturbance(mode, c)?;
        let closed = match (mode, cp.d_star) {
            (KeyRegionMode::Independent, Some(_)) => Some(independent_threshold(c)?),
            _ => None,
        };
        let region = match cp.d_star {
            Some(_) => "d < d_star",
            None if delta_i(mode, c, 0.25)? > 0.0 => "full domain",
            None => "none",
        };
        t.push(vec![
            mode.name().into(),
            c.into(),
            cp.d_star.into(),
            closed.into(),
            cp.precision_floor.into(),
            region.into(),
        ]);
    }
    Ok(t)
}

fn verify_appendix(cfg: &RunConfig) -> Result<Table, CliError> {
    let r = verify_appendix_b(cfg.tau1, cfg.d, cfg.trials, cfg.seed)?;
    Ok(Table::record(vec![
        ("tau1", cfg.tau1.into()),
        ("d", cfg.d.into()),
        ("trials", r.trials.into()),
        ("seed", cfg.seed.into()),
        ("zeroed_max_residual", r.zeroed_max_residual.into()),
        ("injected_detected", r.injected_detected.into()),
        ("injected_min_residual", r.injected_min_residual.into()),
        (
            "derived_null_dimension",
            injection_null_dimension(cfg.tau1, ConditionSet::Derived).into(),
        ),
        (
            "tau_independent_null_dimension",
            injection_null_dimension(cfg.tau1, ConditionSet::TauIndependent).into(),
        ),
    ]))
}

fn encode_table(t: &Table, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => Ok(t.to_csv()),
        Format::Json => Ok(t.to_json()),
        Format::Svg => Err(CliError::Usage(
            "svg output is only available for sweep and figure".into(),
        )),
    }
}

fn encode_rows(rows: &[SweepRow], format: Format, axes: &Axes) -> Result<String, CliError> {
    match format {
        Format::Svg => emit_svg(rows, axes),
        other => encode_table(&Table::from_sweep(rows), other),
    }
}

/// Renders the artifact for `command` without touching the filesystem.
pub fn render(command: Command, cfg: &RunConfig) -> Result<String, CliError> {
    match command {
        Command::Validate => encode_table(&validate(cfg)?, cfg.format),
        Command::Simulate => encode_table(&simulate(cfg)?, cfg.format),
        Command::Critical => encode_table(&critical(cfg)?, cfg.format),
        Command::VerifyAppendix => encode_table(&verify_appendix(cfg)?, cfg.format),
        Command::Sweep => {
            let mode = KeyRegionMode::from(cfg.mode);
            let axes = Axes {
                title: format!("ΔI, {} mode", mode.name()),
                ..Axes::default()
            };
            encode_rows(&sweep_rows(cfg, mode)?, cfg.format, &axes)
        }
        Command::Figure => {
            let (mode, title) = match cfg.id {
                Some(1) => (
                    KeyRegionMode::Dependent,
                    "Figure 1: ΔI, D-dependent Eve information",
                ),
                Some(2) => (
                    KeyRegionMode::Independent,
                    "Figure 2: ΔI, D-independent Eve information",
                ),
                Some(n) => {
                    return Err(CliError::Usage(format!(
                        "unknown figure id {n}; expected 1 or 2"
                    )))
                }
                None => return Err(CliError::Usage("figure requires --id 1 or --id 2".into())),
            };
            let axes = Axes {
                title: title.into(),
                ..Axes::default()
            };
            encode_rows(&sweep_rows(cfg, mode)?, cfg.format, &axes)
        }
    }
}

/// `path`, joined onto `out_dir` when relative.
pub fn resolve_output(path: &Path, out_dir: Option<&Path>) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<(), CliError> {
    let text = render(command, cfg)?;
    match &cfg.output {
        Some(path) => {
            let out_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
            let path = resolve_output(path, out_dir.as_deref());
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(io_err(parent))?;
            }
            std::fs::write(&path, text).map_err(io_err(&path))
        }
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(io_err(Path::new("<stdout>"))(e))
            }
            _ => Ok(()),
        },
    }
}
