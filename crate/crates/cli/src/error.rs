use std::path::PathBuf;

use cvwave_core::WaveError;

/// Everything that can end a run, grouped by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("solver error: {0}")]
    Solver(WaveError),

    #[error("non-convergence: {0}")]
    NonConvergence(String),

    #[error("instability: {0}")]
    Instability(String),

    #[error("io error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0} validation check(s) failed")]
    Validation(usize),
}

impl CliError {
    pub fn config(field: &str, reason: impl std::fmt::Display) -> Self {
        CliError::Config(format!("`{field}`: {reason}"))
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
            CliError::NonConvergence(_) => 4,
            CliError::Io { .. } => 5,
            CliError::Instability(_) => 6,
        }
    }
}

impl From<WaveError> for CliError {
    fn from(e: WaveError) -> Self {
        match e {
            WaveError::Config { field, reason } => CliError::config(field, reason),
            WaveError::NonConvergence { .. }
            | WaveError::NewtonDiverged { .. }
            | WaveError::Bifurcation { .. } => CliError::NonConvergence(e.to_string()),
            other => CliError::Solver(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
