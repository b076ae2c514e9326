use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Module(#[from] nbtrace::Error),
    #[error("{path}: {source}")]
    Graph {
        path: String,
        source: nbtrace::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{failed} of {total} identity checks exceeded the tolerance")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Module(_) | CliError::Graph { .. } => "module",
            CliError::Io(_) => "io",
            CliError::Json(_) => "serialization",
            CliError::Verification { .. } => "verification",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        json!({
            "schema": crate::output::SCHEMA,
            "error": { "kind": self.kind(), "message": self.to_string() },
        })
        .to_string()
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
