use std::fmt;

use freeconv::Error;

pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_NON_CONVERGENCE: u8 = 4;

/// A failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self { code: EXIT_PARSE, message: message.into() }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Self { code: EXIT_DOMAIN, message: message.into() }
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
            Error::Parse(_) => EXIT_PARSE,
            Error::NonConvergence { .. } | Error::JacobiNonConvergence(_) | Error::Quadrature { .. } => {
                EXIT_NON_CONVERGENCE
            }
            _ => EXIT_DOMAIN,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::parse(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::parse(format!("csv error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
