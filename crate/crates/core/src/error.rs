use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown item `{0}`")]
    UnknownItem(String),

    #[error("invalid item id `{0}`: ids must be non-empty and contain no whitespace, '[' or ']'")]
    InvalidItem(String),

    #[error("external utility of `{item}` must be positive and finite, got {value}")]
    InvalidUtility { item: String, value: f64 },

    #[error("sequence {sid}: {reason}")]
    InvalidSequence { sid: u64, reason: String },

    #[error("pattern does not occur in the sequence")]
    NoOccurrence,

    #[error("sequence {0} has zero utility")]
    ZeroUtilitySequence(u64),

    #[error("position {position} out of range 1..={len}")]
    PositionOutOfRange { position: usize, len: usize },

    #[error("pattern is not a one-item extension of the given generator")]
    NotAGenerator,

    #[error("illegal extension: {0}")]
    IllegalExtension(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),

    #[error("database exceeds oracle limits: {0}")]
    LimitsExceeded(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("parse error at line {line}, column {column}: {reason}")]
    Parse {
        line: usize,
        column: usize,
        reason: String,
    },

    #[error("sequence {sid}: declared utility {declared} but computed {computed}")]
    UtilityMismatch {
        sid: u64,
        declared: f64,
        computed: f64,
    },

    #[error("duplicate sequence id {0}")]
    DuplicateSid(u64),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, column: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            reason: reason.into(),
        }
    }
}
