//! Run configuration: command-line flags layered over a `key = value` file
//! layered over built-in defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use sixstate_core::keyregion::{KeyRegionMode, DEFAULT_D_MIN};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Dependent,
    Independent,
}

impl From<Mode> for KeyRegionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Dependent => KeyRegionMode::Dependent,
            Mode::Independent => KeyRegionMode::Independent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Every tunable, all optional so that layers can be merged.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Options {
    /// `key = value` file supplying defaults for any option below
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Concurrence values, comma separated
    #[arg(long = "c", global = true, value_delimiter = ',', num_args = 1..)]
    pub c: Option<Vec<f64>>,
    /// Disturbance
    #[arg(long, global = true)]
    pub d: Option<f64>,
    #[arg(long = "d-min", global = true)]
    pub d_min: Option<f64>,
    #[arg(long = "d-max", global = true)]
    pub d_max: Option<f64>,
    #[arg(long, global = true)]
    pub tau1: Option<f64>,
    #[arg(long, global = true)]
    pub b0: Option<f64>,
    #[arg(long, global = true)]
    pub b1: Option<f64>,
    /// Grid points per concurrence
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Sifted Monte Carlo rounds
    #[arg(long, global = true)]
    pub rounds: Option<u64>,
    /// Random injection trials
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Figure number (1 or 2)
    #[arg(long, global = true)]
    pub id: Option<u8>,
    /// Output file; relative paths resolve against $SIXSTATE_OUT_DIR
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value for `{key}`: {value:?}")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, false)
        .map_err(|_| CliError::Usage(format!("invalid value for `{key}`: {value:?}")))
}

impl Options {
    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn from_config_str(text: &str) -> Result<Self, CliError> {
        let mut o = Options::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", n + 1))
            })?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            let dup = || CliError::Usage(format!("config line {}: duplicate key `{key}`", n + 1));
            macro_rules! set {
                ($field:ident, $v:expr) => {{
                    if o.$field.is_some() {
                        return Err(dup());
                    }
                    o.$field = Some($v);
                }};
            }
            match key.as_str() {
                "mode" => set!(mode, parse_enum(&key, value)?),
                "format" => set!(format, parse_enum(&key, value)?),
                "c" => set!(
                    c,
                    value
                        .split(',')
                        .map(|v| parse(&key, v.trim()))
                        .collect::<Result<Vec<f64>, _>>()?
                ),
                "d" => set!(d, parse(&key, value)?),
                "d-min" => set!(d_min, parse(&key, value)?),
                "d-max" => set!(d_max, parse(&key, value)?),
                "tau1" => set!(tau1, parse(&key, value)?),
                "b0" => set!(b0, parse(&key, value)?),
                "b1" => set!(b1, parse(&key, value)?),
                "steps" => set!(steps, parse(&key, value)?),
                "seed" => set!(seed, parse(&key, value)?),
                "rounds" => set!(rounds, parse(&key, value)?),
                "trials" => set!(trials, parse(&key, value)?),
                "id" => set!(id, parse(&key, value)?),
                "output" => set!(output, PathBuf::from(value)),
                _ => {
                    return Err(CliError::Usage(format!(
                        "config line {}: unknown key `{key}`",
                        n + 1
                    )))
                }
            }
        }
        Ok(o)
    }

    pub fn from_config_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_config_str(&text)
    }

    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: Options) -> Options {
        Options {
            config: self.config.or(lower.config),
            mode: self.mode.or(lower.mode),
            c: self.c.or(lower.c),
            d: self.d.or(lower.d),
            d_min: self.d_min.or(lower.d_min),
            d_max: self.d_max.or(lower.d_max),
            tau1: self.tau1.or(lower.tau1),
            b0: self.b0.or(lower.b0),
            b1: self.b1.or(lower.b1),
            steps: self.steps.or(lower.steps),
            seed: self.seed.or(lower.seed),
            rounds: self.rounds.or(lower.rounds),
            trials: self.trials.or(lower.trials),
            id: self.id.or(lower.id),
            output: self.output.or(lower.output),
            format: self.format.or(lower.format),
        }
    }
}

/// Fully resolved options.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub c: Vec<f64>,
    pub d: f64,
    pub d_min: f64,
    pub d_max: f64,
    pub tau1: f64,
    pub b0: f64,
    pub b1: f64,
    pub steps: usize,
    pub seed: u64,
    pub rounds: u64,
    pub trials: usize,
    pub id: Option<u8>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// The nine concurrences `0.1, 0.2, …, 0.9`.
pub fn figure_concurrences() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Dependent,
            c: figure_concurrences(),
            d: 0.2,
            d_min: DEFAULT_D_MIN,
            d_max: 0.5 - DEFAULT_D_MIN,
            tau1: 0.5,
            b0: 0.5,
            b1: 0.5,
            steps: 500,
            seed: 0,
            rounds: 100_000,
            trials: 100,
            id: None,
            output: None,
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    pub fn from_options(o: Options) -> Self {
        let def = RunConfig::default();
        RunConfig {
            mode: o.mode.unwrap_or(def.mode),
            c: o.c.unwrap_or(def.c),
            d: o.d.unwrap_or(def.d),
            d_min: o.d_min.unwrap_or(def.d_min),
            d_max: o.d_max.unwrap_or(def.d_max),
            tau1: o.tau1.unwrap_or(def.tau1),
            b0: o.b0.unwrap_or(def.b0),
            b1: o.b1.unwrap_or(def.b1),
            steps: o.steps.unwrap_or(def.steps),
            seed: o.seed.unwrap_or(def.seed),
            rounds: o.rounds.unwrap_or(def.rounds),
            trials: o.trials.unwrap_or(def.trials),
            id: o.id,
            output: o.output,
            format: o.format.unwrap_or(def.format),
        }
    }

    /// Flags over the file named by `--config` (if any) over defaults.
    pub fn resolve(flags: Options) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => Options::from_config_file(path)?,
            None => Options::default(),
        };
        Ok(Self::from_options(flags.over(file)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_config_text() {
        let o = Options::from_config_str(
            "# comment\nmode = independent\nc = 0.5, 0.7\n\nd_min=0.01 # trailing\nformat=json\n",
        )
        .unwrap();
        assert_eq!(o.mode, Some(Mode::Independent));
        assert_eq!(o.c, Some(vec![0.5, 0.7]));
        assert_eq!(o.d_min, Some(0.01));
        assert_eq!(o.format, Some(Format::Json));
        assert_eq!(o.d, None);
    }

    #[test]
    fn rejects_bad_config() {
        for text in [
            "colour = red",
            "d 0.2",
            "d = x",
            "d = 0.1\nd = 0.2",
            "mode = both",
        ] {
            assert!(
                matches!(Options::from_config_str(text), Err(CliError::Usage(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn three_layer_precedence() {
        let file = Options::from_config_str("d = 0.3\nsteps = 7").unwrap();
        let flags = Options {
            d: Some(0.4),
            ..Options::default()
        };
        let cfg = RunConfig::from_options(flags.over(file));
        assert_eq!(cfg.d, 0.4);
        assert_eq!(cfg.steps, 7);
        assert_eq!(cfg.tau1, RunConfig::default().tau1);
    }
}
