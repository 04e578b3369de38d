use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(sixstate_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<sixstate_core::Error> for CliError {
    fn from(e: sixstate_core::Error) -> Self {
        match e {
            sixstate_core::Error::Infeasible { .. } => CliError::Infeasible(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}
