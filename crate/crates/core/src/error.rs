use std::fmt;

use crate::dimensions::DimVec;

/// Failure to parse a quantity literal or unit expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input where parsing stopped.
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> Self {
        Self {
            offset,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: Box<DimVec>,
        found: Box<DimVec>,
    },

    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("unknown constant `{0}`")]
    UnknownConstant(String),

    #[error("constituent count must be >= 1, got {0}")]
    NonPositiveN(f64),

    #[error("missing field `{field}` required by {operation}")]
    MissingField {
        field: &'static str,
        operation: &'static str,
    },

    #[error("invalid value for {what}: {reason}")]
    InvalidValue { what: String, reason: String },

    #[error("catalog entry `{id}`, field `{field}`: {reason}")]
    Catalog { id: String, field: String, reason: String },

    #[error("validation failed for `{id}`: {reason}")]
    Validation { id: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Toml { path: String, message: String },
}

impl Error {
    pub(crate) fn mismatch(context: impl Into<String>, expected: DimVec, found: DimVec) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
            expected: Box::new(expected),
            found: Box::new(found),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
