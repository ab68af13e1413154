//! CLI error carrying its process exit code.
//!
//! Exit codes: 0 success, 1 for I/O, parse, and usage problems, 2 when a file
//! was read fine but violates an invariant or precondition.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("parse error in {path}: {detail}")]
    Parse { path: PathBuf, detail: String },

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
        }
    }
}

impl From<qrepeat_core::Error> for CliError {
    fn from(e: qrepeat_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
