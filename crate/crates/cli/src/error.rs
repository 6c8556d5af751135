use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("physicality guard: {0}")]
    Physicality(String),

    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Physicality(_) => 4,
        }
    }
}

impl From<helmwave::Error> for CliError {
    fn from(e: helmwave::Error) -> Self {
        use helmwave::Error as E;
        match e {
            E::InvalidGrid(_) | E::InvalidArgument(_) | E::NonFinite(_) | E::GridMismatch(_) => {
                CliError::Config(e.to_string())
            }
            E::Physicality(m) => CliError::Physicality(m),
            E::Io(_) | E::Malformed(_) => CliError::Io(e.to_string()),
            E::Consistency(_) => CliError::Failed(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
