use std::fmt;

use chargroup::Error;

/// Process exit codes.
pub mod code {
    pub const OK: i32 = 0;
    pub const FAILS_AT: i32 = 1;
    pub const MASS_VIOLATION: i32 = 2;
    pub const DEGREE_CAP: i32 = 3;
    pub const IO: i32 = 4;
    pub const USAGE: i32 = 64;
    pub const INTERNAL: i32 = 70;
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Engine(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => code::USAGE,
            CliError::Io(_) => code::IO,
            CliError::Engine(e) => match e {
                Error::MassFormulaViolation { .. } => code::MASS_VIOLATION,
                Error::DegreeCapExceeded { .. } => code::DEGREE_CAP,
                Error::Invalid(_) => code::USAGE,
                Error::Parse { .. } | Error::Asymmetry(_) => code::IO,
                _ => code::INTERNAL,
            },
        }
    }

    pub fn io(context: impl fmt::Display, e: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {e}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}
