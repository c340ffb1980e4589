//! Per-invocation JSON summary. Every command emits the same top-level
//! keys; command-specific data lives under `results`.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult, EXIT_NOT_CONVERGED};

pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotConverged,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub command: String,
    /// Preset name or config path.
    pub source: String,
    pub status: Status,
    /// Files written next to the summary, relative to the output directory.
    pub outputs: Vec<String>,
    pub results: Value,
    pub error: Option<String>,
}

impl Summary {
    pub fn new(command: &str, source: &str) -> Self {
        Summary {
            command: command.to_string(),
            source: source.to_string(),
            status: Status::Ok,
            outputs: Vec::new(),
            results: Value::Null,
            error: None,
        }
    }

    /// Exit code implied by the status.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::NotConverged => EXIT_NOT_CONVERGED,
            Status::Error => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// Output directory plus the list of files written into it.
pub struct OutDir {
    dir: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(dir: &Path) -> CliResult<Self> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
        Ok(OutDir { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
        Ok(())
    }

    pub fn written(&self) -> Vec<String> {
        self.written.clone()
    }
}
