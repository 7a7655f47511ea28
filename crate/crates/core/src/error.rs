use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration or command-line value is missing or invalid.
    #[error("invalid configuration: {0}")]
    Validation(String),

    /// Bracket expansion for a root did not straddle the target.
    #[error("root bracket not found after {doublings} doublings (target {target})")]
    IterationLimit { doublings: usize, target: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 2,
            _ => 1,
        }
    }
}
