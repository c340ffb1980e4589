use std::fmt::Write;

use serde_json::json;

use aggsim_core::solver::{Algorithm, SolverConfig};
use aggsim_core::stability::{optimal_params, quadratic_rates};

use super::{num, opt_num, push_long_rows, run_solver, LONG_HEADER};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::setup::Experiment;
use crate::summary::{OutDir, Status, Summary};

pub const RATES_HEADER: &str = "algorithm,alpha,momentum,predicted_rate,measured_rate,relative_error";
pub const RATES_FILE: &str = "rates.csv";
pub const COMPARISON_FILE: &str = "comparison.csv";

/// Predicted versus measured rates of all three algorithms at their
/// closed-form tunings on a quadratic instance. Writes `rates.csv` and the
/// long-format residual traces `comparison.csv`.
pub fn cmd_rates(cfg: &ExperimentConfig, out: &mut OutDir, summary: &mut Summary) -> CliResult<()> {
    let exp = Experiment::build(cfg)?;
    let qp = exp
        .quadratic
        .as_ref()
        .ok_or_else(|| CliError::key("problem.kind", "rates needs the quadratic instance"))?;
    let base = cfg.solver_config()?;
    let (mu, l1) = (exp.constants.mu, exp.constants.l1);

    let mut csv = format!("{RATES_HEADER}\n");
    let mut long = format!("{LONG_HEADER}\n");
    let mut rows = Vec::new();
    for algorithm in Algorithm::ALL {
        let op = optimal_params(algorithm, mu, l1)?;
        let m = op.momentum.unwrap_or(0.0);
        let sc = SolverConfig {
            algorithm,
            alpha: op.alpha,
            beta: if algorithm == Algorithm::DagtHb { m } else { 0.0 },
            gamma: if algorithm == Algorithm::DagtNes { m } else { 0.0 },
            ..base.clone()
        };
        let predicted = quadratic_rates(qp, &exp.graph, op.alpha, m, algorithm)?;
        let trace = run_solver(&exp, &sc)?;
        let measured = trace.measured_rate();
        let rel = measured.map(|r| (r - predicted.predicted_rate).abs() / predicted.predicted_rate);
        let fmt = |v: Option<f64>| v.map_or("NaN".to_string(), |v| format!("{v:e}"));
        writeln!(
            csv,
            "{algorithm},{:e},{m:e},{:e},{},{}",
            op.alpha,
            predicted.predicted_rate,
            fmt(measured),
            fmt(rel)
        )
        .unwrap();
        push_long_rows(&mut long, algorithm.as_str(), &trace, |r| r.residual_msq);
        if !trace.converged {
            summary.status = Status::NotConverged;
        }
        rows.push(json!({
            "algorithm": algorithm.as_str(),
            "alpha": op.alpha,
            "momentum": m,
            "predicted_rate": predicted.predicted_rate,
            "full_spectral_radius": predicted.spectral_radius,
            "reduced_radius": predicted.reduced_radius,
            "measured_rate": opt_num(measured),
            "relative_error": opt_num(rel),
            "iterations": trace.iterations(),
            "converged": trace.converged,
            "final_residual_msq": num(trace.last().residual_msq),
        }));
    }
    out.write(RATES_FILE, &csv)?;
    out.write(COMPARISON_FILE, &long)?;
    summary.results = json!({ "mu": mu, "l1": l1, "rho_graph": exp.graph.rho(), "algorithms": rows });
    Ok(())
}
