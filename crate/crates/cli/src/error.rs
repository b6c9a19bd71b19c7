use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] limitgroup::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for an invariant failure inside a pipeline, 1 for anything the
    /// caller can fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(limitgroup::Error::Invariant(_)) => 2,
            _ => 1,
        }
    }
}
