use std::fmt;

use fusionlens_core::{BackendError, Error};

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Io = 1,
    Partial = 2,
    Usage = 64,
    Data = 65,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            status: Status::Usage,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            status: Status::Data,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            status: Status::Io,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Unreachable backends count as I/O failures; malformed inputs are data errors.
pub fn status_of(err: &Error) -> Status {
    match err {
        Error::Io(_) => Status::Io,
        Error::Backend(BackendError::Transport(_) | BackendError::Status { .. }) => Status::Io,
        Error::Config(_) => Status::Usage,
        Error::Backend(_) | Error::InvalidInput(_) | Error::Parse(_) | Error::Undefined(_) => {
            Status::Data
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        Self {
            status: status_of(&err),
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Self::io(err.to_string())
    }
}

pub type CliResult<T = Status> = Result<T, CliError>;
