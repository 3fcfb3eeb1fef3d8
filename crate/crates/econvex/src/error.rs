use thiserror::Error;

/// Failures that map to exit code 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn invalid(context: &str, e: impl std::fmt::Display) -> Self {
        CliError::Invalid(format!("{context}: {e}"))
    }
}
