//! Error type shared across the crate.

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by loading, validation, compilation and simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// Filesystem access failed.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A document exists but does not parse as its declared format.
    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    /// An input violates a documented invariant; the message names the field.
    #[error("validation error: {0}")]
    Validation(String),

    /// A numerical routine failed (non-finite values, singular normalization, ...).
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Error::Validation(message.into())
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Error::Numerical(message.into())
    }

    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Parse { .. } => 2,
            Error::Validation(_) => 3,
            Error::Numerical(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
