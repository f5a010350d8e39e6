use std::fmt;

use serde_json::{json, Value};

/// A failure reported to the user as `{"error": code, "detail": ...}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: String,
    pub detail: String,
    /// Input line the problem was found on.
    pub line: Option<usize>,
}

impl CliError {
    pub fn new(code: impl Into<String>, detail: impl Into<String>) -> Self {
        CliError {
            code: code.into(),
            detail: detail.into(),
            line: None,
        }
    }

    pub fn at(mut self, line: Option<usize>) -> Self {
        self.line = self.line.or(line);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "error": self.code, "detail": self.detail });
        if let Some(l) = self.line {
            v["line"] = json!(l);
        }
        v
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{} (line {l}): {}", self.code, self.detail),
            None => write!(f, "{}: {}", self.code, self.detail),
        }
    }
}

impl std::error::Error for CliError {}

impl From<tpq_core::Error> for CliError {
    fn from(e: tpq_core::Error) -> Self {
        CliError::new(e.code(), e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new("Io", e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
