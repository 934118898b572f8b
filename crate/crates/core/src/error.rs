use std::path::PathBuf;

use thiserror::Error;

use crate::game::{MoveError, TerminalStateError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid board: {0}")]
    Board(String),
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("network topology {found} does not match board {expected}")]
    TopologyMismatch { expected: String, found: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetError {
    #[error("input has {got} features, network expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("numeric fault: {0}")]
    NumericFault(String),
}

/// Top-level error for training runs and experiment orchestration.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Terminal(#[from] TerminalStateError),
    #[error("snapshot not found: {0}")]
    MissingSnapshot(PathBuf),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code: 2 configuration, 3 numeric fault, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Move(_) | Error::Terminal(_) | Error::Json { .. } => 2,
            Error::Net(NetError::NumericFault(_)) => 3,
            Error::Net(NetError::DimensionMismatch { .. }) => 2,
            Error::MissingSnapshot(_) | Error::Io { .. } | Error::Csv { .. } => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
