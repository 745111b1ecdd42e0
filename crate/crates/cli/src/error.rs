use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("InputParse at {context}: {message}")]
    InputParse { context: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] ruelle::Error),
}

impl CliError {
    /// 2 for a violated bound, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(ruelle::Error::BoundViolated(_)) => 2,
            _ => 1,
        }
    }
}
