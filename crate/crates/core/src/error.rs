use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("element index {index} out of range for ground set of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),

    #[error("invalid objective: {0}")]
    InvalidObjective(String),

    #[error("witness is not generic: |a . g| = {dot:e} <= tolerance for generator {index}")]
    NonGenericWitness { index: usize, dot: f64 },

    #[error("linear program failed to converge after {iterations} pivots")]
    LpNoConvergence { iterations: usize },

    #[error("chamber enumeration failed: {0}")]
    Chamber(String),

    #[error("enumeration limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("{0} is only supported for d = {1}")]
    UnsupportedDimension(&'static str, usize),

    #[error("variance identity violated: direct {direct}, via identity {via_identity}")]
    IdentityViolated { direct: f64, via_identity: f64 },

    #[error("malformed partition: {0}")]
    MalformedPartition(String),
}
