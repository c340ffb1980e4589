use serde_json::json;

use aggsim_core::problem::aggregate;
use aggsim_core::stability::quadratic_rates;

use super::{num, opt_num, run_solver};
use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::setup::Experiment;
use crate::summary::{OutDir, Status, Summary};

pub const TRACE_FILE: &str = "trace.csv";

/// Single run with oracle residuals. Writes `trace.csv`.
pub fn cmd_run(cfg: &ExperimentConfig, out: &mut OutDir, summary: &mut Summary) -> CliResult<()> {
    let exp = Experiment::build(cfg)?;
    let sc = cfg.solver_config()?;
    let trace = run_solver(&exp, &sc)?;
    out.write(TRACE_FILE, &trace.to_csv())?;

    let x = &trace.final_state.x;
    let u = aggregate(exp.problem.as_ref(), x)?;
    let d = u.len();
    let tracker_gap = trace
        .final_state
        .u
        .chunks(d)
        .flat_map(|ui| ui.iter().zip(&u).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    let predicted = match &exp.quadratic {
        Some(qp) => Some(quadratic_rates(qp, &exp.graph, sc.alpha, sc.momentum(), sc.algorithm)?.predicted_rate),
        None => None,
    };
    let last = trace.last();
    if !trace.converged {
        summary.status = Status::NotConverged;
    }
    summary.results = json!({
        "algorithm": sc.algorithm.as_str(),
        "alpha": sc.alpha,
        "momentum": sc.momentum(),
        "rho_graph": exp.graph.rho(),
        "iterations": trace.iterations(),
        "converged": trace.converged,
        "final_residual_msq": num(last.residual_msq),
        "final_obj_gap": num(last.obj_gap),
        "final_grad_norm": num(last.grad_norm),
        "measured_rate": opt_num(trace.measured_rate()),
        "predicted_rate": opt_num(predicted),
        "final_x": x,
        "final_aggregate": u,
        "max_tracker_gap": tracker_gap,
        "x_star": exp.oracle.x_star,
        "oracle_method": exp.oracle.method.as_str(),
    });
    Ok(())
}
