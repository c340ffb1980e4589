//! Built-in experiment presets, stored as ordinary config files.

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub const PRESET_NAMES: [&str; 3] = ["placement-paper", "cournot-paper", "quadratic-demo"];

/// TOML source of a preset.
pub fn preset_source(name: &str) -> CliResult<&'static str> {
    match name {
        "placement-paper" => Ok(include_str!("../presets/placement-paper.toml")),
        "cournot-paper" => Ok(include_str!("../presets/cournot-paper.toml")),
        "quadratic-demo" => Ok(include_str!("../presets/quadratic-demo.toml")),
        other => Err(CliError::Config(format!(
            "unknown preset `{other}` (expected one of {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}

pub fn preset(name: &str) -> CliResult<ExperimentConfig> {
    ExperimentConfig::parse(preset_source(name)?)
}
