use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("degree overflow: {what} needs degree {needed}, but only {available} is available")]
    DegreeOverflow {
        what: String,
        needed: usize,
        available: usize,
    },

    #[error("window mismatch: {0}")]
    WindowMismatch(String),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("space mismatch: operands live on different spaces ({0})")]
    SpaceMismatch(String),

    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
