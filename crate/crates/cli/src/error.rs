use std::fmt;

use impartial::Error;

/// Process exit codes. Listed in `--help`.
pub const OK: u8 = 0;
pub const FAILED: u8 = 1;
pub const INVALID_INPUT: u8 = 2;
pub const DESCRIPTOR_MISMATCH: u8 = 3;
pub const RETRIES_EXHAUSTED: u8 = 4;
pub const CAPACITY: u8 = 5;

pub const EXIT_CODES_HELP: &str = "\
Exit codes:
  0  success
  1  an axiom is violated, or an expected result (UNSAT, a witness) was not obtained
  2  input could not be parsed or failed validation
  3  mechanism descriptor and parameters do not fit together
  4  random multigraph search exhausted its retries
  5  capacity limit exceeded (n > 20) or the requested mode is infeasible";

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(INVALID_INPUT, message)
    }

    pub fn mismatch(message: impl Into<String>) -> Self {
        Self::new(DESCRIPTOR_MISMATCH, message)
    }

    pub fn io(path: &str, e: std::io::Error) -> Self {
        Self::input(format!("{path}: {e}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capacity { .. } | Error::ModeInfeasible(_) => CAPACITY,
            Error::RetriesExhausted { .. } => RETRIES_EXHAUSTED,
            Error::Inconsistent(_) => FAILED,
            _ => INVALID_INPUT,
        };
        CliError::new(code, e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
