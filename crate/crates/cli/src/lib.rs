//! Config-driven experiment harness for the accelerated aggregative
//! tracking methods. The `aggsim` binary is a thin wrapper over
//! [`invoke`]; everything is exposed so tests can drive commands in-process.

pub mod commands;
pub mod config;
pub mod error;
pub mod presets;
pub mod setup;
pub mod summary;

use std::path::Path;

pub use commands::{execute, Command};
pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
pub use summary::{Status, Summary};

use summary::{OutDir, SUMMARY_FILE};

/// Where a config comes from.
#[derive(Debug, Clone)]
pub enum ConfigSource {
    Preset(String),
    File(std::path::PathBuf),
}

impl ConfigSource {
    pub fn label(&self) -> String {
        match self {
            ConfigSource::Preset(name) => name.clone(),
            ConfigSource::File(path) => path.display().to_string(),
        }
    }

    pub fn load(&self) -> CliResult<ExperimentConfig> {
        match self {
            ConfigSource::Preset(name) => presets::preset(name),
            ConfigSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                ExperimentConfig::parse(&text).map_err(|e| match e {
                    CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
                    other => other,
                })
            }
        }
    }
}

/// Loads the config, runs the command and writes `summary.json` into
/// `out` (or `output.dir`, or `./out`). Failures after the output directory
/// exists still leave a summary with status `error`.
pub fn invoke(command: Command, source: &ConfigSource, out: Option<&Path>) -> CliResult<Summary> {
    let cfg = source.load()?;
    let dir = match (out, &cfg.output) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(o)) => o.dir.clone().into(),
        (None, None) => "out".into(),
    };
    let mut outdir = OutDir::create(&dir)?;
    match execute(command, &cfg, &source.label(), &mut outdir) {
        Ok(summary) => {
            outdir.write(SUMMARY_FILE, &summary.to_json())?;
            Ok(summary)
        }
        Err(e) => {
            let mut summary = Summary::new(command.as_str(), &source.label());
            summary.status = Status::Error;
            summary.error = Some(e.to_string());
            summary.outputs = outdir.written();
            // best effort: the original error is what matters
            let _ = outdir.write(SUMMARY_FILE, &summary.to_json());
            Err(e)
        }
    }
}
