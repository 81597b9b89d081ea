use thiserror::Error;

/// Errors raised by the exact computations and the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("size mismatch: partition of {left} paired with partition of {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("inexact division while computing {0} (character table is inconsistent)")]
    InexactDivision(&'static str),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("{0} lies within the guard band of its dimension threshold")]
    NearThreshold(String),

    #[error("unsupported target: {0}")]
    UnsupportedTarget(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed transcript: {0}")]
    MalformedTranscript(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("cache file {path}: {reason}")]
    Cache { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
