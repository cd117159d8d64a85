use thiserror::Error;

/// Errors surfaced by the command-line frontend. All map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    /// A file could not be read.
    #[error("{path}: {message}")]
    Io {
        /// Path as given.
        path: String,
        /// Underlying error.
        message: String,
    },
    /// A file or argument is malformed.
    #[error("parse error: {0}")]
    Parse(String),
    /// The input parsed but is rejected by the core library.
    #[error(transparent)]
    Core(#[from] stochord_core::Error),
    /// Normalization by a mean that is not positive.
    #[error("cannot normalize: mean is {0}")]
    ZeroMeanNormalize(f64),
    /// Invalid parameter combination.
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// Result alias for the frontend.
pub type CliResult<T> = Result<T, CliError>;
