use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter, grid or configuration value is outside its documented range.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Two fields or grids that must agree do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A field was passed in the wrong representation (physical vs spectral).
    #[error("expected a {expected} field, got {found}")]
    WrongSpace {
        expected: &'static str,
        found: &'static str,
    },

    /// A non-finite coefficient appeared while stepping.
    #[error("numerical blow-up at step {step} (t = {time}): non-finite coefficient")]
    BlowUp { step: usize, time: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed snapshot {path}: {reason}")]
    Snapshot { path: PathBuf, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_)
            | Error::GridMismatch(_)
            | Error::WrongSpace { .. }
            | Error::Config(_)
            | Error::Json(_) => 1,
            Error::BlowUp { .. } => 2,
            Error::Snapshot { .. } | Error::Io { .. } => 3,
        }
    }
}
