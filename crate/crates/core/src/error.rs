use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("cannot normalize a vector with squared norm {0:e}")]
    Normalization(f64),

    #[error("projection outcome has Born weight {0:e}; nothing to renormalize")]
    NullOutcome(f64),

    #[error("projector family is not complete: max deviation from identity {0:e}")]
    Completeness(f64),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("causality error: {0}")]
    Causality(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("stream order violated: event {requested} requested after event {current}")]
    StreamOrder { current: usize, requested: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::UnknownExperiment(_) => 2,
            Error::Io(_) => 4,
            _ => 3,
        }
    }
}
