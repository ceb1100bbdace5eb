use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Config,
    Numerical,
    Precondition,
    Io,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Config => 2,
            ErrorKind::Numerical => 3,
            ErrorKind::Precondition => 4,
            ErrorKind::Io => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Config, message: message.into() }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Precondition, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Io, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    /// One-line JSON object for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind, "exit_code": self.exit_code(), "message": self.message }
        })
        .to_string()
    }
}

impl From<torus_hopf::Error> for CliError {
    fn from(e: torus_hopf::Error) -> Self {
        let kind = if e.is_numerical() {
            ErrorKind::Numerical
        } else if e.is_precondition() {
            ErrorKind::Precondition
        } else {
            ErrorKind::Config
        };
        CliError { kind, message: e.to_string() }
    }
}
