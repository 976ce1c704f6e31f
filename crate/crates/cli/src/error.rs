use std::fmt;

use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_ACCEPTANCE: i32 = 4;

/// A failure with its exit code. Displays as one JSON line.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn config(message: String) -> Self {
        Self {
            code: EXIT_CONFIG,
            kind: "config",
            message,
        }
    }

    pub fn numerical(message: String) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            kind: "numerical",
            message,
        }
    }

    pub fn acceptance(message: String) -> Self {
        Self {
            code: EXIT_ACCEPTANCE,
            kind: "acceptance",
            message,
        }
    }

    pub fn io(message: String) -> Self {
        Self {
            code: EXIT_CONFIG,
            kind: "io",
            message,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = json!({"error": self.kind, "code": self.code, "message": self.message.replace('\n', " ")});
        write!(f, "{line}")
    }
}

impl std::error::Error for CliError {}

impl From<busqc::Error> for CliError {
    fn from(e: busqc::Error) -> Self {
        use busqc::Error::*;
        match e {
            InvalidParameter(_) | InvalidRegister(_) | UnsupportedGate(_) | Parse { .. } | SizeCap { .. } => {
                CliError::config(e.to_string())
            }
            WindowTooSmall { .. } | NonConvergence(_) | NoDoubleWell(_) | BracketFailure { .. } | SingularSystem => {
                CliError::numerical(e.to_string())
            }
        }
    }
}
