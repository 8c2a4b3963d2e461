use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Argument outside the domain of a function (branch cut, z = 0, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid family or precision parameter.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// A precondition of an operation was violated (for example a zero partial numerator).
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("singular value: {0}")]
    Singular(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("invalid equivalence transform: {0}")]
    InvalidTransform(String),
    #[error("no convergence within {cap} steps: {detail}")]
    NonConvergence { cap: u64, detail: String },
    /// Two-precision agreement or quadrature did not reach the requested digits.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
