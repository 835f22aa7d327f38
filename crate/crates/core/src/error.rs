//! Error type shared by every module in the crate.

use crate::norm::Norm;

/// Unified error type for construction, validation, and engine failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("norm mismatch: {left:?} vs {right:?}")]
    NormMismatch { left: Norm, right: Norm },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("not a chain: elements {first} and {second} are incomparable")]
    NotAChain { first: usize, second: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("iterate left the cone at iteration {iteration}")]
    ConeExit { iteration: usize },

    #[error("non-finite integrand at node x={x}, y={y}")]
    NonFiniteIntegrand { x: f64, y: f64 },

    #[error(
        "kernel validation failed: {sign_violations} sign violation(s), \
         {growth_violations} growth violation(s); first at {first:?}"
    )]
    KernelValidation {
        sign_violations: usize,
        growth_violations: usize,
        first: Option<(f64, f64)>,
    },

    #[error("finite map domain is not closed under the map: image of element {index} is missing")]
    DomainNotClosed { index: usize },

    #[error("point not in the map's domain: {0:?}")]
    NotInDomain(Vec<f64>),

    #[error("csv parse error in {path} at row {row}, column {column}: {message}")]
    CsvParse {
        path: String,
        row: usize,
        column: usize,
        message: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
