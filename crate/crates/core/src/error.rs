use crate::solver::CriticalPoint;
use thiserror::Error;

/// Errors raised by hypermatrix and solver operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape {0:?}: need at least two factors, each of positive dimension")]
    InvalidShape(Vec<usize>),

    #[error("coefficient count {found} does not match shape product {expected}")]
    CoeffCount { expected: usize, found: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("factor index {index} out of range for {order} factors")]
    FactorIndex { index: usize, order: usize },

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("hypermatrix is identically zero")]
    ZeroTensor,

    #[error("partial contraction vanished on factor {factor}; restart from a different point")]
    DegenerateDirection { factor: usize },

    #[error("no restart converged (best residual {:.3e})", .best.residual)]
    NoConvergence { best: Box<CriticalPoint> },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("unsupported form: {0}")]
    UnsupportedForm(String),

    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("no real singular vectors: {0}")]
    NoRealSingularVector(String),

    #[error("characteristic polynomial vanishes identically (degenerate pencil)")]
    DegeneratePencil,

    #[error("invalid interval [{lo}, {hi}] or tolerance {tol}")]
    InvalidInterval { lo: f64, hi: f64, tol: f64 },

    #[error("malformed state file: {0}")]
    StateFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
