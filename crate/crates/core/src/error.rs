use thiserror::Error;

use crate::model::Component;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("eigenvalue within {gap:.3e} of the imaginary axis (tolerance {tol:.1e})")]
    ImaginaryAxisEigenvalue { gap: f64, tol: f64 },

    #[error("spectral projector for {component} mode {mode:?}: {source}")]
    ProjectorAt {
        component: Component,
        mode: Vec<i64>,
        #[source]
        source: Box<Error>,
    },

    #[error("matrix sign iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("singular matrix in {0}")]
    Singular(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("warp profile violates f(0) = f(1) = 0: f(0) = {f0:.3e}, f(1) = {f1:.3e}")]
    WarpBoundary { f0: f64, f1: f64 },

    #[error("warped models only act on radial (k = 0) data, found mode {0:?}")]
    NonRadialWarped(Vec<i64>),

    #[error("ℬφ ≠ 0: boundary residual {0:.3e}")]
    BoundaryIncompatible(f64),

    #[error("boundary constraint system is rank deficient at {component} (σ_min/σ_max = {ratio:.3e})")]
    SingularConstraint { component: Component, ratio: f64 },

    #[error("boundary at {component} imposes {rank} conditions, the grid elimination needs {expected}")]
    ConstraintCount { component: Component, rank: usize, expected: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fit is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("not enough curve points in the fit window: {found} < {required}")]
    TooFewPoints { found: usize, required: usize },

    #[error("coefficient index {0} is not available")]
    UnsupportedIndex(usize),
}

impl Error {
    /// True for failures of the analytic hypotheses (as opposed to bad input).
    pub fn is_math_domain(&self) -> bool {
        match self {
            Error::ImaginaryAxisEigenvalue { .. }
            | Error::NonConvergence { .. }
            | Error::SingularConstraint { .. }
            | Error::ConstraintCount { .. }
            | Error::Singular(_) => true,
            Error::ProjectorAt { source, .. } => source.is_math_domain(),
            _ => false,
        }
    }
}
