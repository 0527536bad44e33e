use std::path::PathBuf;

use consensus_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("{0}\nhint: P^k converges only when every final class is aperiodic; add self-influence (a positive diagonal entry) to an agent of that class")]
    Improper(CoreError),
    #[error("simulate needs `initial_opinions` in the input document")]
    MissingOpinions,
    #[error("{n} agents exceed the oracle cap {cap}; raise --oracle-cap to verify anyway")]
    OracleTooLarge { n: usize, cap: usize },
    #[error("{0}")]
    Analysis(CoreError),
    #[error("{failed} verification check(s) failed")]
    VerificationFailed { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Improper(_) => 2,
            CliError::VerificationFailed { .. } => 3,
            _ => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ImproperMatrix { .. } => CliError::Improper(e),
            other => CliError::Analysis(other),
        }
    }
}
