use thiserror::Error;

/// Errors produced by the storage-code toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("mask {mask:#x} is out of range for arity {arity}")]
    MaskOutOfRange { mask: u64, arity: u32 },

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: u32, right: u32 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("arity {arity} exceeds the {what} ceiling of {limit}")]
    Resource {
        what: &'static str,
        arity: u32,
        limit: u32,
    },

    #[error("connection set is empty (zero element)")]
    EmptySet,

    #[error("connection set must contain the zero vector (constant coefficient is 0)")]
    MissingZero,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("word is not a codeword; repair from neighbours is unsound")]
    RepairUnsound,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for errors caused by exceeding a size ceiling.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}
