use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed crossing tuple: {0}")]
    MalformedTuple(String),
    #[error("strand {label} appears {count} times (expected 2)")]
    StrandMultiplicity { label: u32, count: usize },
    #[error("inconsistent orientation at strand {0}")]
    InconsistentOrientation(u32),
    #[error("diagram has {crossings} crossings, above the limit of {limit}")]
    TooLarge { crossings: usize, limit: usize },
    #[error("missing basepoint")]
    MissingBasepoint,
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("frame mismatch: {0}")]
    FrameMismatch(String),
    #[error("not a cycle")]
    NotACycle,
    #[error("Tor obstruction: {0}")]
    TorObstruction(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
