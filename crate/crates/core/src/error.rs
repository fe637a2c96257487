use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rail index {rail} out of range 1..={rails}")]
    RailOutOfRange { rail: usize, rails: usize },

    #[error("rails {0} and {0} coincide; a two-rail element needs distinct rails")]
    SameRail(usize),

    #[error("reflectivity {0} outside [0, 1]")]
    Reflectivity(f64),

    #[error("dimension mismatch: expected {expected} rails, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("empty stage list")]
    EmptyComposition,

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("probability vector sums to {0}, expected 1")]
    NotNormalizedProbabilities(f64),

    #[error("invalid noise parameter: {0}")]
    Noise(String),

    #[error("infeasible calibration target: {0}")]
    Infeasible(String),

    #[error("invalid configuration `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
