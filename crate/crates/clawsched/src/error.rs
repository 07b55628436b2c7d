use std::path::Path;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(clawsched_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    /// 2 invalid input, 3 budget exceeded, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Core(clawsched_core::Error::BudgetExceeded(_)) => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) => 4,
        }
    }
}

impl From<clawsched_core::Error> for CliError {
    fn from(e: clawsched_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Invalid(format!("malformed JSON: {e}"))
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            CliError::Io(e.to_string())
        } else {
            CliError::Invalid(format!("malformed CSV: {e}"))
        }
    }
}
