use std::path::PathBuf;

use zetascope_core::Error as CoreError;

/// Everything the front end can fail with; [`CliError::exit_code`] maps it
/// onto the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
    /// A check ran to completion and did not hold.
    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    /// 2 input, 3 tolerance, 4 capability, 1 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::Input(_)) => 2,
            CliError::Core(CoreError::Tolerance(_)) => 3,
            CliError::Core(CoreError::Capability(_)) => 4,
            CliError::Core(CoreError::Internal(_)) => 1,
            CliError::Io { .. } | CliError::Json(_) | CliError::Csv(_) | CliError::Usage(_) => 2,
            CliError::CheckFailed(_) => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

macro_rules! usage {
    ($($t:tt)*) => { $crate::error::CliError::Usage(format!($($t)*)) };
}
pub(crate) use usage;
