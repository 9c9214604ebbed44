use thiserror::Error;

use crate::convex::Minimizer;

#[derive(Debug, Error)]
pub enum DepthError {
    #[error("empty data cloud")]
    EmptyCloud,
    #[error("need at least {needed} observations, found {found}")]
    TooFewPoints { found: usize, needed: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value in input")]
    NonFinite,
    #[error("sample covariance is not positive definite")]
    SingularCovariance,
    #[error("constraint matrix is rank deficient")]
    RankDeficient,
    #[error("linear system or program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),
    #[error("invalid linear program: {0}")]
    InvalidProgram(String),
    #[error("convex minimization did not converge after {iterations} iterations")]
    ConvergenceFailure {
        iterations: usize,
        best: Box<Minimizer>,
    },
    #[error("invalid depth order {0}: must be >= 1 or infinity")]
    InvalidOrder(String),
    #[error("invalid depth level {0}: must lie in (0, 1]")]
    InvalidLevel(f64),
    #[error("ray at angle {angle:.6} rad did not leave the level set after {doublings} doublings")]
    RayEscape { angle: f64, doublings: usize },
    #[error("{0}")]
    InvalidContour(String),
    #[error("query point {index}: {source}")]
    BatchPoint {
        index: usize,
        #[source]
        source: Box<DepthError>,
    },
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl DepthError {
    /// True for failures raised by a numerical solver, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        match self {
            DepthError::Infeasible
            | DepthError::Unbounded
            | DepthError::IterationLimit(_)
            | DepthError::ConvergenceFailure { .. }
            | DepthError::RayEscape { .. } => true,
            DepthError::BatchPoint { source, .. } => source.is_solver_failure(),
            _ => false,
        }
    }
}
