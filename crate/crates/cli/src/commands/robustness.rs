use std::fmt::Write;

use serde_json::json;

use aggsim_core::solver::{Algorithm, SolverConfig};

use super::{num, run_solver};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::setup::Experiment;
use crate::summary::{OutDir, Status, Summary};

pub const ROBUSTNESS_HEADER: &str = "scenario,algorithm,iter,residual_msq,grad_norm";
pub const ROBUSTNESS_FILE: &str = "robustness.csv";

/// Median of the last 10% of the values (at least one).
pub fn residual_floor(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let take = (values.len() / 10).max(1);
    let mut tail = values[values.len() - take..].to_vec();
    tail.sort_by(f64::total_cmp);
    let m = tail.len() / 2;
    if tail.len() % 2 == 1 {
        tail[m]
    } else {
        0.5 * (tail[m - 1] + tail[m])
    }
}

fn scenario_config(cfg: &ExperimentConfig, base: &SolverConfig, algorithm: Algorithm) -> SolverConfig {
    SolverConfig {
        algorithm,
        beta: if algorithm == Algorithm::DagtHb { cfg.solver.beta } else { 0.0 },
        gamma: if algorithm == Algorithm::DagtNes { cfg.solver.gamma } else { 0.0 },
        delay_steps: 0,
        noise_sigma: 0.0,
        ..base.clone()
    }
}

/// Delay and noise scenarios for all three algorithms, with momentum taken
/// from `solver.beta` / `solver.gamma`. Delayed runs must converge; noisy
/// runs (fixed `noise_iters` budget, no stopping rule) must stay finite.
/// Writes `robustness.csv`.
pub fn cmd_robustness(cfg: &ExperimentConfig, out: &mut OutDir, summary: &mut Summary) -> CliResult<()> {
    let spec = cfg
        .robustness
        .clone()
        .ok_or_else(|| CliError::key("robustness", "section required for this command"))?;
    let exp = Experiment::build(cfg)?;
    let base = cfg.solver_config()?;
    let mut csv = format!("{ROBUSTNESS_HEADER}\n");
    let mut rows = Vec::new();
    let mut ok = true;

    for scenario in ["delay", "noise"] {
        for algorithm in Algorithm::ALL {
            let mut sc = scenario_config(cfg, &base, algorithm);
            if scenario == "delay" {
                sc.delay_steps = spec.delay_steps;
            } else {
                sc.noise_sigma = spec.noise_sigma;
                sc.max_iter = spec.noise_iters;
                sc.tol = 0.0;
            }
            match run_solver(&exp, &sc) {
                Ok(trace) => {
                    for r in &trace.records {
                        writeln!(csv, "{scenario},{algorithm},{},{:e},{:e}", r.k, r.residual_msq, r.grad_norm).unwrap();
                    }
                    let residuals: Vec<f64> = trace.records.iter().map(|r| r.residual_msq).collect();
                    let bounded = residuals.iter().all(|v| v.is_finite());
                    let passed = if scenario == "delay" { trace.converged } else { bounded };
                    ok &= passed;
                    rows.push(json!({
                        "scenario": scenario,
                        "algorithm": algorithm.as_str(),
                        "iterations": trace.iterations(),
                        "converged": trace.converged,
                        "diverged": false,
                        "final_grad_norm": num(trace.last().grad_norm),
                        "residual_floor": num(residual_floor(&residuals)),
                        "max_residual": num(residuals.iter().copied().fold(0.0, f64::max)),
                    }));
                }
                Err(aggsim_core::Error::DivergenceDetected { iteration }) => {
                    ok = false;
                    rows.push(json!({
                        "scenario": scenario,
                        "algorithm": algorithm.as_str(),
                        "iterations": iteration,
                        "converged": false,
                        "diverged": true,
                    }));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    out.write(ROBUSTNESS_FILE, &csv)?;
    if !ok {
        summary.status = Status::NotConverged;
    }
    summary.results = json!({
        "delay_steps": spec.delay_steps,
        "noise_sigma": spec.noise_sigma,
        "noise_iters": spec.noise_iters,
        "runs": rows,
    });
    Ok(())
}
