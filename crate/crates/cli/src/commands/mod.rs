//! One module per subcommand. Each writes its CSV files into the output
//! directory and returns the summary; the caller writes `summary.json`.

mod bounds;
mod rates;
mod region;
mod robustness;
mod run;
mod sweep;
mod topology;

use std::fmt::Write;

use aggsim_core::solver::{self, IterTrace, SolverConfig};

use crate::config::{ExperimentConfig, RunMode};
use crate::error::{CliError, CliResult};
use crate::setup::Experiment;
use crate::summary::{OutDir, Summary};

pub use bounds::cmd_bounds;
pub use rates::{cmd_rates, RATES_HEADER};
pub use region::{cmd_region, REGION_HEADER};
pub use robustness::{cmd_robustness, residual_floor, ROBUSTNESS_HEADER};
pub use run::cmd_run;
pub use sweep::{cmd_sweep, SweepResult, SweepRow, SWEEP_HEADER};
pub use topology::{cmd_topology, TOPOLOGY_HEADER};

/// Long-format comparison header shared by multi-algorithm outputs.
pub const LONG_HEADER: &str = "algorithm,iter,residual";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Sweep,
    Topology,
    Robustness,
    Bounds,
    Region,
    Rates,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Sweep => "sweep",
            Command::Topology => "topology",
            Command::Robustness => "robustness",
            Command::Bounds => "bounds",
            Command::Region => "region",
            Command::Rates => "rates",
        }
    }

    pub fn mode(self) -> RunMode {
        match self {
            Command::Run => RunMode::Single,
            Command::Sweep => RunMode::Sweep,
            Command::Topology => RunMode::TopologyCompare,
            Command::Robustness => RunMode::Robustness,
            Command::Bounds => RunMode::Bounds,
            Command::Region => RunMode::Region,
            Command::Rates => RunMode::Rates,
        }
    }
}

/// Runs `command` and returns its summary (not yet written to disk).
pub fn execute(command: Command, cfg: &ExperimentConfig, source: &str, out: &mut OutDir) -> CliResult<Summary> {
    if let Some(mode) = cfg.mode {
        if mode != command.mode() {
            return Err(CliError::key(
                "mode",
                format!("config is for `{}`, invoked as `{}`", mode.as_str(), command.as_str()),
            ));
        }
    }
    let mut summary = Summary::new(command.as_str(), source);
    match command {
        Command::Run => cmd_run(cfg, out, &mut summary)?,
        Command::Sweep => cmd_sweep(cfg, out, &mut summary)?,
        Command::Topology => cmd_topology(cfg, out, &mut summary)?,
        Command::Robustness => cmd_robustness(cfg, out, &mut summary)?,
        Command::Bounds => cmd_bounds(cfg, out, &mut summary)?,
        Command::Region => cmd_region(cfg, out, &mut summary)?,
        Command::Rates => cmd_rates(cfg, out, &mut summary)?,
    }
    summary.outputs = out.written();
    Ok(summary)
}

pub(crate) fn run_solver(exp: &Experiment, config: &SolverConfig) -> aggsim_core::Result<IterTrace> {
    run_on(exp, &exp.graph, config)
}

pub(crate) fn run_on(
    exp: &Experiment,
    graph: &aggsim_core::CommGraph,
    config: &SolverConfig,
) -> aggsim_core::Result<IterTrace> {
    solver::run(exp.problem.as_ref(), graph, config, &exp.x0, exp.x_minus1(), Some(&exp.oracle))
}

/// Appends `label,iter,value` rows for one trace.
pub(crate) fn push_long_rows(out: &mut String, label: &str, trace: &IterTrace, value: impl Fn(&solver::IterRecord) -> f64) {
    for r in &trace.records {
        writeln!(out, "{label},{},{:e}", r.k, value(r)).unwrap();
    }
}

/// JSON number, or null for non-finite values.
pub(crate) fn num(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

pub(crate) fn opt_num(v: Option<f64>) -> serde_json::Value {
    v.map_or(serde_json::Value::Null, num)
}
