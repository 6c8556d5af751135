use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("grid mismatch: {0}")]
    GridMismatch(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A request that would select an exponentially growing evanescent
    /// solution without the caller opting in.
    #[error("physicality constraint violated: {0}")]
    Physicality(String),

    /// A nominally real functional came out with a significant imaginary
    /// part, or two routes to the same quantity disagree.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
