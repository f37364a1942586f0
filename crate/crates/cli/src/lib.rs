//! Command implementations behind the `lora-planner` binary.

pub mod commands;
pub mod config;
pub mod output;

use std::fmt;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// An error ready to be reported on stderr with an exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        CliError { kind: kind.to_string(), message: message.into(), exit_code: EXIT_INPUT }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { kind: "internal".to_string(), message: message.into(), exit_code: EXIT_INTERNAL }
    }

    /// Single-line JSON report, e.g. `{"error":"infeasible-radius","message":"..."}`.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind, "message": self.message }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}
