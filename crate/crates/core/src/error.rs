use crate::prelude::*;
use num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("integrand is not finite at node {node:?}")]
    NonFiniteIntegrand { node: Vec<f64> },

    #[error("all basis functions vanish at {point:?}")]
    BasePoint { point: Vec<Complex64> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("sample rejected: {0}")]
    Rejected(Rejection),
}

/// Reasons a zero count is refused. A rejected sample is discarded and
/// redrawn by the caller.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum Rejection {
    #[error("zero too close to the boundary (relative margin {margin:e})")]
    BoundaryMargin { margin: f64 },
    #[error("phase tracking did not resolve the boundary curve")]
    PhaseResolution,
    #[error("winding number {winding} is not close to an integer")]
    NonIntegerWinding { winding: f64 },
    #[error("system is degenerate (resultant vanishes identically)")]
    Degenerate,
    #[error("root with |w| = {modulus:e} is too close to 0 or infinity")]
    IllConditionedRoot { modulus: f64 },
}

impl From<Rejection> for Error {
    fn from(r: Rejection) -> Self {
        Error::Rejected(r)
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
