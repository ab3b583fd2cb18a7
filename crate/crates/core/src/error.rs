use thiserror::Error;

/// Errors raised by the model. Every variant describes an input the caller
/// can fix; nothing here signals an internal inconsistency.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("vector of length {len} exceeds VDPE size {capacity}; decompose first")]
    VectorTooLong { len: usize, capacity: usize },

    #[error("unsupported layer kind `{kind}` for layer `{layer}`")]
    UnsupportedLayer { layer: String, kind: String },

    #[error("invalid layer `{layer}`: {reason}")]
    InvalidLayer { layer: String, reason: String },

    #[error("invalid configuration: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),

    #[error("no sign change of the resolution residual on [{lo_dbm}, {hi_dbm}] dBm")]
    NoRoot { lo_dbm: f64, hi_dbm: f64 },

    #[error("malformed LUT image: {0}")]
    LutFormat(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn range(what: &'static str, value: impl Into<i64>, min: i64, max: i64) -> Self {
        Error::OutOfRange {
            what,
            value: value.into(),
            min,
            max,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
