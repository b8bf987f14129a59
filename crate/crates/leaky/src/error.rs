use std::process::ExitCode;

use leaky_core::Error as CoreError;

pub type CliResult<T> = Result<T, CliError>;

/// Failures grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    SizeGuard(String),
    #[error("{0}")]
    Convergence(String),
    #[error("selftest check {name} failed: {detail}")]
    Selftest { name: String, detail: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Selftest { .. } => 1,
            CliError::Input(_) => 2,
            CliError::SizeGuard(_) => 3,
            CliError::Convergence(_) => 4,
        }
    }

    pub fn to_exit_code(&self) -> ExitCode {
        ExitCode::from(self.exit_code())
    }

    pub fn input(msg: impl std::fmt::Display) -> Self {
        CliError::Input(msg.to_string())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::TooLarge(_) => CliError::SizeGuard(e.to_string()),
            CoreError::NotConverged(_) | CoreError::Lp(_) => CliError::Convergence(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
