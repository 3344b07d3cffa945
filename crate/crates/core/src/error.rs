use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length must be at least 1")]
    ZeroLength,

    #[error("requested length {requested} exceeds the enumeration cap {cap}")]
    Capacity { requested: usize, cap: usize },

    #[error("parse error at position {position} in {input:?}: {message}")]
    Parse { input: String, position: usize, message: String },

    #[error("invalid generator family: {0}")]
    InvalidFamily(String),

    #[error("operation not supported for {variant} families: {reason}")]
    UnsupportedVariant { variant: &'static str, reason: &'static str },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("sequence file {path}: {message}")]
    SequenceFile { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
