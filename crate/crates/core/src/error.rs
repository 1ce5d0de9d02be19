use thiserror::Error;

use crate::report::Report;

/// Errors raised by the algebra layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("verification failed: {}", .0.summary())]
    Verification(Box<Report>),

    /// A computation contradicted a theorem; this signals corrupted input or a bug.
    #[error("inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn dim(message: impl Into<String>) -> Self {
        Error::Dimension(message.into())
    }
}
