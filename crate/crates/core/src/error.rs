use thiserror::Error;

/// Errors raised by population, law and representation operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} of size {size} exceeds the configured bound {limit}")]
    SizeLimit {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid bijection: {0}")]
    InvalidBijection(String),

    #[error("ground sets differ")]
    MismatchedGroundSets,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid state space: {0}")]
    InvalidStateSpace(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("event mixes assignment functions from different populations")]
    MixedPopulations,

    #[error("{0} is not a subset of the population")]
    NotSubset(String),

    #[error("event is not saturated under the induced relation")]
    NotSaturated,

    #[error("invalid law: {0}")]
    InvalidLaw(String),

    #[error("law distinguishes strongly indistinguishable individuals: {0}")]
    Inadmissible(String),

    #[error("no greatest invariant partition exists")]
    NoGreatestElement,

    #[error("individuals are not independent under this law")]
    NotIndependent,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("law is not in the image of the parametric family: {0}")]
    Coverage(String),

    #[error("identifiability violated: {0}")]
    Identifiability(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("value {0} outside [0, 1]")]
    OutOfRange(f64),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
