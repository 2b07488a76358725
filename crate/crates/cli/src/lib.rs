//! Document schema and command implementations for the `cornerforge` CLI.
//!
//! Interchange format: a single JSON document with named entities of four
//! kinds (monoid, map, complex, refinement). Matrices are row-major arrays
//! of arrays of integers. All emitted lists appear in the canonical order
//! defined by the core library, so outputs are byte-stable for a fixed
//! input and seed.

pub mod document;
pub mod ops;

use std::io::Write;
use std::sync::OnceLock;

/// Diagnostics level, controlled by the CORNERFORGE_LOG environment
/// variable (off, info, debug). Defaults to info.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LogLevel {
    Off,
    Info,
    Debug,
}

pub fn log_level() -> LogLevel {
    static LEVEL: OnceLock<LogLevel> = OnceLock::new();
    *LEVEL.get_or_init(|| match std::env::var("CORNERFORGE_LOG").as_deref() {
        Ok("off") => LogLevel::Off,
        Ok("debug") => LogLevel::Debug,
        _ => LogLevel::Info,
    })
}

pub fn log_info(msg: &str) {
    if log_level() >= LogLevel::Info {
        let _ = writeln!(std::io::stderr(), "cornerforge: {msg}");
    }
}

pub fn log_debug(msg: &str) {
    if log_level() >= LogLevel::Debug {
        let _ = writeln!(std::io::stderr(), "cornerforge[debug]: {msg}");
    }
}

/// An error that terminates the run with a specific exit code: 2 for input
/// errors, 1 for validation failures.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<cornerforge_core::Error> for CliError {
    fn from(e: cornerforge_core::Error) -> Self {
        CliError::input(e.to_string())
    }
}
