use thiserror::Error;

/// Errors raised by the qUCC library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: orbital index {index} outside [1, {norb}]")]
    IndexOutOfRange {
        line: usize,
        index: i64,
        norb: usize,
    },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("eigensolver failure: {0}")]
    Solver(String),

    #[error("CI dimension {dimension} exceeds the cap of {cap}")]
    DimensionCap { dimension: usize, cap: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
