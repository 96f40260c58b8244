use thiserror::Error;

/// Everything the command line can fail with, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] st_forge_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("serialization error: {0}")]
    Csv(#[from] csv::Error),
    #[error("oracle disagreement: {0}")]
    OracleMismatch(String),
    #[error("work estimate {cells} exceeds ST_FORGE_MAX_CELLS = {cap}")]
    WorkCap { cells: u128, cap: u128 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Core(st_forge_core::Error::Overflow) => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Json(_) | CliError::Csv(_) => 4,
            CliError::OracleMismatch(_) => 5,
            CliError::WorkCap { .. } => 6,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
