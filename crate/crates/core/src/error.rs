use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("extent mismatch: expected {expected:?}, got {got:?}")]
    ExtentMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },

    #[error("invalid extents: {0}")]
    InvalidExtents(String),

    #[error("basis mismatch: expected {expected}, got {got}")]
    BasisMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("dimension {dim} exceeds the dense cap of {cap}")]
    CapExceeded { dim: usize, cap: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("ensemble too small: need at least {need}, got {got}")]
    Undersized { need: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("linear algebra failure: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
