use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("CONFIG-INVALID at {path}: {message}")]
    ConfigInvalid { path: String, message: String },

    #[error("UNKNOWN-SELECTOR: {0}")]
    UnknownSelector(String),

    #[error(transparent)]
    Core(#[from] siftlab_core::Error),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::ConfigInvalid { path: path.into(), message: message.into() }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
