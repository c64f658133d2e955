use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("non-finite angle {0}")]
    NonFiniteAngle(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("dimension mismatch: expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("negative value {value} at index {index}")]
    NegativeValue { index: usize, value: f64 },
    #[error("escaped mass must be nonnegative, got {0}")]
    NegativeEscape(f64),
    #[error("fields live on different grids")]
    GridMismatch,
}
