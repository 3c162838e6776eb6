use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty point list")]
    EmptyList,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite coordinate in row {row}")]
    NonFinite { row: usize },
    #[error("rows {first} and {second} are identical")]
    DuplicateRow { first: usize, second: usize },
    #[error("row {row} has squared norm {norm_sq} above the power limit n*P = {limit}")]
    PowerViolation { row: usize, norm_sq: f64, limit: f64 },
    #[error("code has {size} points, fewer than the list size {list_size}")]
    TooFewPoints { size: usize, list_size: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{name} is outside its domain at {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
