//! Error taxonomy shared by every subcommand. The variant determines
//! the process exit code: 2 config, 3 I/O, 4 data format, 5 not enough
//! data to compute the requested statistic.

use algebrarium_core::analytics::AnalyticsError;
use algebrarium_core::jsonl::JsonlError;
use algebrarium_core::{EvalError, GenError, SimError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Insufficient(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Data(_) => 4,
            CliError::Insufficient(_) => 5,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

impl From<JsonlError> for CliError {
    fn from(err: JsonlError) -> Self {
        match err {
            JsonlError::Malformed { .. } => CliError::Data(err.to_string()),
            JsonlError::Io { .. } => CliError::Io(err.to_string()),
        }
    }
}

impl From<GenError> for CliError {
    fn from(err: GenError) -> Self {
        match err {
            GenError::Config(_) | GenError::ResampleExhausted { .. } => {
                CliError::Config(err.to_string())
            }
            GenError::UnsupportedMode { .. }
            | GenError::AnswerMismatch { .. }
            | GenError::Algebra(_) => CliError::Data(err.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(err: SimError) -> Self {
        match err {
            SimError::ProfileMismatch { .. } | SimError::Config(_) => {
                CliError::Config(err.to_string())
            }
            SimError::ChainMismatch { .. } => CliError::Data(err.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(err: EvalError) -> Self {
        match err {
            EvalError::EmptyRecord { .. } => CliError::Insufficient(err.to_string()),
            EvalError::Config(_) => CliError::Config(err.to_string()),
        }
    }
}

impl From<AnalyticsError> for CliError {
    fn from(err: AnalyticsError) -> Self {
        match err {
            // A budget outside 1..=n comes from --k-list, not the data.
            AnalyticsError::BudgetOutOfRange { .. } => CliError::Config(err.to_string()),
            AnalyticsError::InputMismatch(_) => CliError::Data(err.to_string()),
            AnalyticsError::InsufficientData(_) => CliError::Insufficient(err.to_string()),
        }
    }
}
