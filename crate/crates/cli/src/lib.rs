//! Config-driven experiment runner for `splitwalk`.

pub mod config;
pub mod output;
pub mod presets;
pub mod run;
pub mod validate;

use serde_json::json;

pub use config::{Config, Experiment};
pub use output::{Manifest, Output};
pub use run::run;
pub use validate::{validate, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at {field}: {message}")]
    Config { field: String, message: String },
    #[error("config failed validation with {} issue(s)", .0.issues.len())]
    Invalid(Report),
    #[error("unknown preset {name:?}; known presets: {known}")]
    UnknownPreset { name: String, known: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("experiment {requested} does not match config experiment {configured}")]
    Mismatch { requested: String, configured: String },
    #[error(transparent)]
    Library(#[from] splitwalk::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "config",
            CliError::Invalid(_) => "invalid",
            CliError::UnknownPreset { .. } => "preset",
            CliError::Io { .. } => "io",
            CliError::Mismatch { .. } => "mismatch",
            CliError::Library(_) => "library",
        }
    }

    /// One-line JSON description for stderr.
    pub fn json_line(&self) -> String {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        match self {
            CliError::Config { field, .. } => v["field"] = json!(field),
            CliError::Invalid(report) => v["issues"] = json!(report.issues),
            _ => {}
        }
        v.to_string()
    }
}
