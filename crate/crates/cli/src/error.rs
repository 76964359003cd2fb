use thiserror::Error;

/// Failures that end a run, each tied to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),

    #[error("{0}")]
    Solver(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadInput(_) => 2,
            CliError::Solver(_) | CliError::Io(_) => 3,
        }
    }

    pub fn bad(msg: impl Into<String>) -> Self {
        CliError::BadInput(msg.into())
    }
}

impl From<psusy_core::Error> for CliError {
    fn from(e: psusy_core::Error) -> Self {
        use psusy_core::Error as E;
        match e {
            E::InvalidGrid(_) | E::InvalidParameter(_) | E::Massless | E::GridMismatch => {
                CliError::BadInput(e.to_string())
            }
            _ => CliError::Solver(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
