use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape parameter M must be finite and > 0, got {0}")]
    InvalidShape(f64),
    #[error("scale parameter sigma must be finite and > 0, got {0}")]
    InvalidScale(f64),
    #[error("location parameter mu must be finite, got {0}")]
    InvalidLocation(f64),
    #[error("correlation rho must satisfy |rho| < 1, got {0}")]
    InvalidCorrelation(f64),
    #[error("probability must lie strictly inside (0, 1), got {0}")]
    InvalidProbability(f64),
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("covariance matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("covariance matrix is not positive definite (leading minor {minor} fails)")]
    NotPositiveDefinite { minor: usize },
    #[error(
        "series for {what} did not converge: {terms} terms, \
         error estimate {error_estimate:e}, condition number {condition_number:e}"
    )]
    NotConverged {
        what: String,
        terms: usize,
        error_estimate: f64,
        condition_number: f64,
    },
    #[error("series for {what} is too ill-conditioned (condition number {condition_number:e})")]
    IllConditioned { what: String, condition_number: f64 },
    #[error("{0} overflows the representable range")]
    Overflow(String),
    #[error("{0}")]
    Domain(String),
    #[error("quadrature failed to reach tolerance: estimate {estimate:e}, error {error:e}")]
    QuadratureFailed { estimate: f64, error: f64 },
    #[error("sample is empty")]
    EmptySample,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
