use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value outside the domain of an operation (latitude 95°, negative distance, ...).
    #[error("input out of domain: {0}")]
    InputDomain(String),

    /// Point too far from the tangent-plane origin.
    #[error("projection out of domain: {0}")]
    Projection(String),

    /// Kinematic precondition of a link-expiration computation failed.
    #[error("invalid kinematic state: {0}")]
    State(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("too many malformed rows: {bad} of {total} rows failed to parse (first: {first})")]
    TooManyRowErrors {
        bad: usize,
        total: usize,
        first: String,
    },

    #[error("config error: {0}")]
    Config(String),

    /// The problem instance cannot support the requested operation (too few aircraft, ...).
    #[error("instance error: {0}")]
    Instance(String),

    #[error("unknown node id `{0}`")]
    UnknownNode(String),

    #[error("invalid route: {0}")]
    InvalidRoute(String),

    /// Exhaustive enumeration refused because the instance exceeds the tractability guard.
    #[error("instance too large for exhaustive enumeration: {0}")]
    Size(String),

    #[error("empty input: {0}")]
    Empty(String),

    /// An internal invariant did not hold. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
