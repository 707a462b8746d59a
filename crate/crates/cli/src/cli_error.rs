//! Process-level error with its exit code: 1 for runtime/IO failures,
//! 2 for usage errors.

use std::fmt;

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl fmt::Display) -> Self {
        Self { code: EXIT_USAGE, message: message.to_string() }
    }

    pub fn runtime(message: impl fmt::Display) -> Self {
        Self { code: EXIT_RUNTIME, message: message.to_string() }
    }
}

impl From<cone_core::Error> for CliError {
    fn from(e: cone_core::Error) -> Self {
        // Bad names are operator input wherever they surface.
        match e {
            cone_core::Error::UnknownActivation { .. } => CliError::usage(e),
            _ => CliError::runtime(e),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
