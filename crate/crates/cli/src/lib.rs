//! Command-line front end for `stable-exit-core`: grid evaluation of the
//! ladder exponent, exit-time transforms and densities, verification suites,
//! and reproducible sampling, with CSV/JSON output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input or
//! unsupported law, 3 numerical non-convergence, 4 I/O error.

pub mod args;
pub mod commands;
pub mod output;
pub mod parallel;
pub mod parse;
pub mod suites;

use std::fmt;
use std::io;
use std::path::Path;

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Core(stable_exit_core::Error),
    Usage(String),
    Io(String, io::Error),
    VerificationFailed(usize),
}

impl CliError {
    fn io(path: Option<&Path>, e: io::Error) -> Self {
        let target = path.map_or_else(
            || "standard output".to_string(),
            |p| p.display().to_string(),
        );
        CliError::Io(target, e)
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
            CliError::Io(..) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
            CliError::Io(target, e) => write!(f, "cannot write {target}: {e}"),
            CliError::VerificationFailed(n) => write!(f, "{n} verification case(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<stable_exit_core::Error> for CliError {
    fn from(e: stable_exit_core::Error) -> Self {
        CliError::Core(e)
    }
}
