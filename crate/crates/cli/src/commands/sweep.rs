use std::fmt::Write;

use serde_json::json;

use aggsim_core::solver::{Algorithm, SolverConfig};

use super::run_solver;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::setup::Experiment;
use crate::summary::{OutDir, Summary};

pub const SWEEP_HEADER: &str = "momentum,iterations,converged";
pub const SWEEP_FILE: &str = "sweep.csv";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub momentum: f64,
    /// Rounds executed; the divergence index for runs that blew up.
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut s = format!("{SWEEP_HEADER}\n");
        for r in &self.rows {
            writeln!(s, "{:e},{},{}", r.momentum, r.iterations, r.converged).unwrap();
        }
        s
    }
}

/// Iterations-to-tolerance over `sweep.values` for the configured momentum
/// algorithm. Grid points run in parallel; row order follows the input.
pub fn sweep(exp: &Experiment, base: &SolverConfig, values: &[f64]) -> CliResult<SweepResult> {
    let configs = values
        .iter()
        .map(|&m| {
            let mut c = base.clone();
            match base.algorithm {
                Algorithm::DagtHb => c.beta = m,
                Algorithm::DagtNes => c.gamma = m,
                Algorithm::Dagt => unreachable!("checked by caller"),
            }
            c.validate().map_err(|e| CliError::key("sweep.values", e.to_string()))?;
            Ok(c)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let rows = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| {
                scope.spawn(move || match run_solver(exp, c) {
                    Ok(t) => SweepRow { momentum: c.momentum(), iterations: t.iterations(), converged: t.converged },
                    Err(aggsim_core::Error::DivergenceDetected { iteration }) => {
                        SweepRow { momentum: c.momentum(), iterations: iteration, converged: false }
                    }
                    Err(e) => panic!("solver failed on a validated config: {e}"),
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker")).collect()
    });
    Ok(SweepResult { rows })
}

/// Writes `sweep.csv`. Non-convergent values are flagged, not errors.
pub fn cmd_sweep(cfg: &ExperimentConfig, out: &mut OutDir, summary: &mut Summary) -> CliResult<()> {
    let base = cfg.solver_config()?;
    if base.algorithm == Algorithm::Dagt {
        return Err(CliError::key("solver.algorithm", "sweep needs dagt_hb or dagt_nes"));
    }
    let values = cfg.sweep.as_ref().map(|s| s.values.clone()).unwrap_or_default();
    let exp = Experiment::build(cfg)?;
    let result = sweep(&exp, &base, &values)?;
    out.write(SWEEP_FILE, &result.to_csv())?;
    let best = result.rows.iter().filter(|r| r.converged).min_by_key(|r| r.iterations);
    summary.results = json!({
        "algorithm": base.algorithm.as_str(),
        "alpha": base.alpha,
        "rows": result.rows.iter().map(|r| json!({
            "momentum": r.momentum, "iterations": r.iterations, "converged": r.converged,
        })).collect::<Vec<_>>(),
        "best_momentum": best.map(|r| r.momentum),
        "best_iterations": best.map(|r| r.iterations),
    });
    Ok(())
}
