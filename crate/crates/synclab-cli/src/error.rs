use thiserror::Error;

/// CLI failures, bucketed by exit code.
///
/// Exit codes: 0 all checks passed, 1 at least one check failed, 2 parse
/// error (scenario or group file, malformed flags), 3 dimension or
/// precondition error, 4 internal numeric failure.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition error: {0}")]
    Precondition(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<synclab::Error> for CliError {
    fn from(err: synclab::Error) -> Self {
        use synclab::Error as E;
        match &err {
            E::InvalidGroup(_) | E::InvalidIrrepTable(_) => CliError::Parse(err.to_string()),
            E::NumericalFailure { .. } => CliError::Internal(err.to_string()),
            _ => CliError::Precondition(err.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
