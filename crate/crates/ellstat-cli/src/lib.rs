//! Orchestration behind the `ellstat` binary: curve parsing, subcommand
//! execution, CSV emission, block scheduling and checkpoint/resume.

pub mod checkpoint;
pub mod curves;
pub mod oracle;
pub mod output;
pub mod run;

use std::fmt;

/// Exit taxonomy: 0 success, 1 usage, 2 I/O (including checkpoint refusal),
/// 3 invariant violation mid-scan.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Invariant { p: u64, what: String },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Invariant { p, what } => {
                write!(f, "invariant violation at p = {p}: {what}")
            }
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Invariant { .. } => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<ellstat_core::ScanError> for CliError {
    fn from(e: ellstat_core::ScanError) -> Self {
        match e {
            ellstat_core::ScanError::Invariant { p, what } => CliError::Invariant { p, what },
            ellstat_core::ScanError::Aborted(m) => CliError::Io(m),
        }
    }
}
