use thiserror::Error;

/// Infrastructure failures. Property violations are never reported through
/// this type; they are entries in a [`crate::certifier::PropertyReport`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("polynomial must have degree >= {expected}, got {actual}")]
    DegreeTooLow { expected: usize, actual: usize },

    #[error("root finder did not converge after {iterations} iterations (worst residual {residual:e})")]
    RootsNotConverged { iterations: usize, residual: f64 },

    #[error("no computed root within {tolerance:e} of beta = {beta} (nearest at distance {distance:e})")]
    BetaNotMatched {
        beta: f64,
        distance: f64,
        tolerance: f64,
    },

    #[error("factor does not divide P' exactly (remainder {remainder:e})")]
    NotExactDivisor { remainder: f64 },

    #[error("root {root} is not simple: |P'(z)| = {derivative:e}")]
    MultipleRoot { root: String, derivative: f64 },

    #[error("expected at least {expected} roots on the unit circle, found {actual}")]
    TooFewCircleRoots { expected: usize, actual: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("singular Jacobian (condition estimate {condition:e})")]
    SingularJacobian { condition: f64 },

    #[error("polynomial is not real")]
    NotReal,

    #[error("reference data: {0}")]
    Reference(String),

    #[error(transparent)]
    Json(#[from] JsonError),
}

/// serde_json's error is not `Clone`, so keep its rendered message.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{0}")]
pub struct JsonError(pub String);

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(JsonError(e.to_string()))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
