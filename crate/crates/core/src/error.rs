use thiserror::Error;

/// Errors raised by the sampler, divergence and bound routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid convex body: {0}")]
    InvalidBody(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("stepsize {eta} exceeds 2/M = {limit}")]
    StepsizeTooLarge { eta: f64, limit: f64 },

    #[error("batch is empty")]
    EmptyBatch,

    #[error("batch index {index} out of range for {n} components")]
    BatchIndexOutOfRange { index: usize, n: usize },

    #[error("batch size {b} not in 1..={n}")]
    BatchSizeOutOfRange { b: usize, n: usize },

    #[error("initial point lies outside the body")]
    InitOutsideBody,

    #[error("body has infinite diameter; supply a diameter proxy")]
    UnboundedBody,

    #[error("Renyi order {alpha} too large for variance pair (sigma_alpha^2 = {sigma_alpha_sq})")]
    OrderTooLargeForVariancePair { alpha: f64, sigma_alpha_sq: f64 },

    #[error("reference Gaussian has zero variance")]
    DegenerateReference,

    #[error("support of size {size} exceeds the oracle limit of {limit}")]
    OracleScaleExceeded { size: usize, limit: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("empty sample set")]
    EmptySamples,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
