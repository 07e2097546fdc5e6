use thiserror::Error;

pub type Result<T> = std::result::Result<T, SwapError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SwapError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("degenerate entry at ({row}, {col}): modulus {modulus:e} too small to dephase")]
    DegenerateEntry { row: usize, col: usize, modulus: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("basis construction failed: {0}")]
    ConstructionFailure(String),
    #[error("size error: {0}")]
    Size(String),
    #[error("unsupported basis: {0}")]
    UnsupportedBasis(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl SwapError {
    /// True for failures that mean a claimed identity did not hold numerically.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, SwapError::InvariantViolation(_))
    }
}
