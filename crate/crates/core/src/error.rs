use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A Gram matrix failed Cholesky or exceeded the condition-number guard.
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    /// Quadrature node counts below the degree-dependent minimum.
    #[error("insufficient quadrature resolution: {0}")]
    Resolution(String),

    /// Numerical rank different from the expected one.
    #[error("rank error: expected dimension {expected}, found {found}")]
    Rank { expected: usize, found: usize },

    /// A multishift weight could not be inverted.
    #[error("singular weight: {0}")]
    SingularWeight(String),

    /// Moment data is not of Dirichlet type.
    #[error("inconsistent moments: {0}")]
    InconsistentMoments(String),

    /// Extracted Fourier data is not the moment sequence of a positive measure.
    #[error("extracted data not positive: {0}")]
    NotPositive(String),

    /// Moment table violates the splitting identities.
    #[error("splitting violated: residual {0:e}")]
    SplittingViolated(f64),

    /// Random example generation gave up.
    #[error("generation failed: {0}")]
    Generation(String),

    /// Input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
