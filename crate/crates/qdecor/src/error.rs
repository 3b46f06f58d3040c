use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },
    #[error("matrix is not positive definite (min eigenvalue {min_eig:.3e})")]
    NotPositiveDefinite { min_eig: f64 },
    #[error("not a density matrix: {0}")]
    InvalidDensity(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("negative channel coefficient q{index} = {value:.3e}")]
    NegativeCoefficient { index: usize, value: f64 },
    #[error("channel coefficients violate the trace constraint (residual {0:.3e})")]
    TraceConstraint(f64),
    #[error("singular parameter: {0}")]
    SingularParameter(&'static str),
    #[error("no nonnegative coefficients reach the requested output (min q = {min_q:.3e})")]
    Infeasible { min_q: f64 },
    #[error("invalid state parameters: {0}")]
    InvalidState(String),
    #[error("phase grid of {samples} points cannot resolve degree {degree}")]
    GridTooCoarse { samples: usize, degree: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
