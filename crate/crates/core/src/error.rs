use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("expected {expected} indices, got {got}")]
    OrderMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("order {0} is not supported (must be between 1 and 30)")]
    UnsupportedOrder(usize),
    #[error("operation requires an even order, got {0}")]
    OddOrder(usize),
    #[error("multiplicity overflow for order {0}")]
    MultiplicityOverflow(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("rank bound violated: observed {observed} > bound {bound} ({which})")]
    RankBoundViolated {
        observed: usize,
        bound: usize,
        which: String,
    },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
