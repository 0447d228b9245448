use thiserror::Error;

/// Errors raised by the time-scale library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("time scale must be non-empty")]
    EmptyTimeScale,

    #[error("invalid segment [{lo}, {hi}]: bounds must be finite with lo <= hi")]
    InvalidSegment { lo: f64, hi: f64 },

    #[error("point {t} is not a member of the time scale")]
    NotInTimeScale { t: f64 },

    #[error("interval endpoints out of order: a = {a} > b = {b}")]
    InvertedInterval { a: f64, b: f64 },

    #[error("grid step must be positive and finite, got {h}")]
    InvalidStep { h: f64 },

    #[error("point {t} is not a grid node")]
    NotANode { t: f64 },

    #[error("point {t} lies outside the kappa-restricted interval (left-scattered maximum)")]
    NotInKappa { t: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("grid functions do not share a grid")]
    GridMismatch,

    #[error("non-finite value at t = {t}")]
    NonFinite { t: f64 },

    #[error("window too small: sigma(a) = {sigma_a} exceeds c = {c}")]
    WindowTooSmall { sigma_a: f64, c: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
