use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulation, metric and sweep layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spike train: {0}")]
    InvalidTrain(String),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("stimulus grid overflow: {0}")]
    GridOverflow(String),

    #[error("weight pool is empty: {0}")]
    EmptyPool(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    // The inner error is part of the message, not a chained source, so
    // `{:#}` printing does not repeat it.
    #[error("{path}: {cause}")]
    Config {
        path: String,
        cause: crate::config::ConfigError,
    },

    #[error("{}: {cause}", path.display())]
    Io { path: PathBuf, cause: std::io::Error },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, cause: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            cause,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
