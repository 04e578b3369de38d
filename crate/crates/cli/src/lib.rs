//! Command-line front end for the `sixstate-core` simulator.
//!
//! Every command renders one artifact (CSV, JSON or SVG) from a
//! [`RunConfig`](config::RunConfig) assembled from flags, an optional
//! `key = value` file and built-in defaults, in that order of precedence.

pub mod config;
pub mod error;
pub mod run;
pub mod svg;
pub mod table;

use clap::Parser;

pub use config::{Format, Mode, Options, RunConfig};
pub use error::CliError;
pub use run::{render, run, Command, OUT_DIR_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "sixstate",
    version,
    about = "Six-state QKD with an entangled-ancilla eavesdropper"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = RunConfig::resolve(cli.options).and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("sixstate: {e}");
            e.exit_code()
        }
    }
}
