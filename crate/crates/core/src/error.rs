use std::fmt;

use thiserror::Error;

/// Side of the grid toward which a would-be bound state grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    Left,
    Right,
    Both,
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Growth::Left => write!(f, "left (toward x_min)"),
            Growth::Right => write!(f, "right (toward x_max)"),
            Growth::Both => write!(f, "both boundaries"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("sampled functions live on different grids")]
    GridMismatch,

    #[error("non-finite value at node {index}")]
    NonFinite { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("massless case M = 0 is not supported by the spinor reduction")]
    Massless,

    #[error("state is not normalizable: |psi| grows toward {0}")]
    NonNormalizable(Growth),

    #[error("degenerate matching root: G2 = 0 leaves G1 undefined, choose the other branch")]
    DegenerateRoot,

    #[error("degenerate parameter at hierarchy level {level}: {reason}")]
    DegenerateParameter { level: usize, reason: String },

    #[error("wrong solver: {0}")]
    WrongSolver(String),

    #[error("QR iteration did not converge after {iterations} iterations")]
    QrNonConvergence { iterations: usize },

    #[error("matrix size {size} exceeds the dense complex QR cap {cap}")]
    SizeCap { size: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
