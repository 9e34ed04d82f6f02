use supervol_core::{GrassmannError, LinalgError, SpecialError, VolumeError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),
    #[error("even block of the quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("embedding is not differentiable here: constraint body {body} is not positive")]
    NonDifferentiable { body: f64 },
    #[error("quadrature did not converge at {nodes_per_axis} nodes per axis (last estimate {last_estimate})")]
    NonConvergence {
        nodes_per_axis: usize,
        last_estimate: f64,
    },
    #[error("Lie algebra basis expansion residual {0:e} exceeds tolerance")]
    BasisResidual(f64),
}
