use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Sizes, indices, or settings that cannot describe a valid object.
    #[error("configuration error: {0}")]
    Config(String),

    /// An input violated a numerical contract (unitarity, hermiticity, ...).
    #[error("numerical contract violated: {0}")]
    Numerical(String),

    #[error("failed to parse {what}: {msg}")]
    Parse { what: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
