use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] plemelj::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// 2 = validation failure, 3 = ill-conditioned solve, 4 = check failure,
    /// 1 = anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(plemelj::Error::ValidationFailed(_)) => 2,
            CliError::Core(plemelj::Error::IllConditioned { .. }) => 3,
            CliError::CheckFailed(_) => 4,
            _ => 1,
        }
    }
}
