use std::fmt;
use std::process::ExitCode;

use tjchain::Error;

/// Failure categories with their exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Invalid configuration or parameters (exit 1).
    Validation,
    /// Solver non-convergence or a failed check (exit 2).
    Convergence,
    /// File system errors (exit 3).
    Io,
}

#[derive(Debug)]
pub struct Failure {
    pub kind: Kind,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Failure { kind: Kind::Validation, message: message.into() }
    }

    pub fn convergence(message: impl Into<String>) -> Self {
        Failure { kind: Kind::Convergence, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure { kind: Kind::Io, message: message.into() }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self.kind {
            Kind::Validation => 1,
            Kind::Convergence => 2,
            Kind::Io => 3,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::InvalidParams(_)
            | Error::Pole(_)
            | Error::DimensionOverflow { .. }
            | Error::RegimeMismatch(_)
            | Error::InvalidInput(_)
            | Error::Parse(_) => Kind::Validation,
            Error::Io(_) => Kind::Io,
            _ => Kind::Convergence,
        };
        Failure { kind, message: e.to_string() }
    }
}
