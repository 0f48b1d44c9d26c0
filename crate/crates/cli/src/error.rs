use relay_outage::OutageError;
use thiserror::Error;

use crate::config::{to_config_error, ConfigError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{context}: {source}")]
    Numerical {
        context: String,
        #[source]
        source: OutageError,
    },
    #[error("{failed} acceptance check(s) failed")]
    Selftest { failed: usize },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numerical { .. } => 3,
            CliError::Selftest { .. } => 4,
        }
    }

    /// Wraps a library error raised while evaluating `context`. Domain errors
    /// are configuration mistakes; everything else is numerical.
    pub fn from_outage(context: impl Into<String>, e: OutageError) -> Self {
        match e {
            OutageError::NonConvergence { .. } => CliError::Numerical {
                context: context.into(),
                source: e,
            },
            other => CliError::Config(to_config_error(other)),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
