use std::fmt;
use std::path::Path;

use gatecx_core::Error;

/// Process exit codes. 2 is left to clap, which uses it for malformed
/// arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Code {
    Ok = 0,
    /// A requested check ran and failed.
    CheckFailed = 1,
    /// Unknown gate name or an out-of-range value.
    InvalidInput = 3,
    /// Experiment config could not be parsed or validated.
    Config = 4,
    /// File could not be read or written.
    Io = 5,
    /// Comparison across units or protocols.
    Refused = 6,
    /// Embedded or stored data is corrupt.
    Data = 7,
}

#[derive(Debug)]
pub struct CliError {
    pub code: Code,
    pub message: String,
}

impl CliError {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::new(Code::Io, format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Config(_) | Error::Toml(_) => Code::Config,
            Error::Io { .. } => Code::Io,
            Error::MixedUnits(..) | Error::MixedProtocols(..) => Code::Refused,
            Error::FixtureChecksum { .. } | Error::Json(_) | Error::InvalidGenotype(_) | Error::KindMismatch => {
                Code::Data
            }
            _ => Code::InvalidInput,
        };
        let message = match &e {
            Error::MixedUnits(..) | Error::MixedProtocols(..) => {
                format!("refusing to compare: {e}; rank each unit and protocol separately")
            }
            _ => e.to_string(),
        };
        Self { code, message }
    }
}

pub type CliResult<T = Code> = Result<T, CliError>;
