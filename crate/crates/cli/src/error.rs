// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::process::ExitCode;

use spinflop_core::Error;

/// Process exit status classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Invalid = 2,
    Domain = 3,
    Io = 4,
    Numerical = 5,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError {
            exit: Exit::Invalid,
            message: message.into(),
        }
    }

    pub fn io(context: impl fmt::Display, err: std::io::Error) -> Self {
        CliError {
            exit: Exit::Io,
            message: format!("{context}: {err}"),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            exit: Exit::Numerical,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.exit as u8)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let exit = match err {
            Error::InvalidParameter { .. } => Exit::Invalid,
            Error::BeyondCriticalField { .. } | Error::ZeroField { .. } => Exit::Domain,
            Error::QuadratureNotConverged { .. } | Error::Degenerate { .. } | Error::UndefinedPhase | Error::Fit(_) => {
                Exit::Numerical
            }
        };
        CliError {
            exit,
            message: err.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
