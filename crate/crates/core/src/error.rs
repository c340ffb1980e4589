use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("graph construction failed: {0}")]
    ConstructionFailed(String),

    #[error("Jury table needs a polynomial of degree >= 3, got degree {0}")]
    UnsupportedDegree(usize),

    #[error("parameters outside the validity region: {0}")]
    OutOfValidityRegion(String),

    #[error("non-finite state detected at iteration {iteration}")]
    DivergenceDetected { iteration: usize },

    #[error("not converged after {iterations} iterations (gradient norm {grad_norm:e})")]
    NotConverged { iterations: usize, grad_norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
