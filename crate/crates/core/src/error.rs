use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("enumeration of {needed} items exceeds cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible construction parameters: {0}")]
    InfeasibleConstruction(String),

    #[error("graph is not left-regular")]
    NotRegular,

    #[error("expansion too weak: delta = {delta} must exceed {threshold}")]
    ExpansionTooWeak { delta: f64, threshold: f64 },

    #[error("malformed alist: {0}")]
    MalformedAlist(String),

    #[error("linear system is infeasible")]
    Infeasible,

    #[error("row {row} has degree {degree}, above the limit {limit}")]
    RowTooDense { row: usize, degree: usize, limit: usize },

    #[error("negative entry at index {0}")]
    NegativeEntry(usize),

    #[error("vector is not in the nullspace (residual {0:e})")]
    NotInNullspace(f64),

    #[error("entry ({row}, {col}) violates the magnitude condition")]
    MagnitudeCondition { row: usize, col: usize },

    #[error("hypothesis not certified: {0}")]
    NotCertified(String),

    #[error("no solution with support size at most {0}")]
    NoSparseSolution(usize),

    #[error("alphabet mismatch at index {0}")]
    AlphabetMismatch(usize),

    #[error("arithmetic overflow in exact enumeration")]
    Overflow,

    #[error("cover degree {m} is below the largest magnitude {needed}")]
    CoverTooSmall { m: usize, needed: usize },

    #[error("cone membership violated at check {check}, variable {var}")]
    ConeViolation { check: usize, var: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
