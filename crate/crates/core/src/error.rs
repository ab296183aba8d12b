use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subsystem index {index} out of range (space has {count} subsystems)")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("a bosonic mode needs at least 2 levels, got {0}")]
    TooFewLevels(usize),

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("sites {0} and {1} are not nearest neighbours")]
    NotNeighbours(usize, usize),

    #[error("time grid must be sorted and non-negative")]
    UnsortedTimes,

    #[error("time series must be uniformly sampled with at least {min} points")]
    InvalidTimeGrid { min: usize },

    #[error("series has no non-zero spectral peak")]
    NoSpectralPeak,

    #[error("gate acts on {0} qubits; at most 2 supported")]
    SpanTooLarge(usize),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
