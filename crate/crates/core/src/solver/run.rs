use crate::error::{check_dim, Error, Result};
use crate::graph::CommGraph;
use crate::linalg::{consensus_error, norm};
use crate::oracle::OracleSolution;
use crate::problem::{global_gradient, objective, AggregativeProblem};

use super::comm::Channel;
use super::state::{init_state, step_hb, step_hb_with, step_nes, step_nes_with, SolverState};
use super::trace::{IterRecord, IterTrace};
use super::{Algorithm, SolverConfig};

/// Runs the configured algorithm until `||grad F(x_k)|| < tol` or
/// `max_iter` rounds. The global gradient is a centralized monitor only.
pub fn run(
    problem: &dyn AggregativeProblem,
    graph: &CommGraph,
    config: &SolverConfig,
    x0: &[f64],
    x_minus1: Option<&[f64]>,
    oracle: Option<&OracleSolution>,
) -> Result<IterTrace> {
    run_observed(problem, graph, config, x0, x_minus1, oracle, &mut |_| {})
}

/// [`run`] with a callback invoked on every state, the initial one included.
pub fn run_observed(
    problem: &dyn AggregativeProblem,
    graph: &CommGraph,
    config: &SolverConfig,
    x0: &[f64],
    x_minus1: Option<&[f64]>,
    oracle: Option<&OracleSolution>,
    observer: &mut dyn FnMut(&SolverState),
) -> Result<IterTrace> {
    config.validate()?;
    if let Some(o) = oracle {
        check_dim(x0.len(), o.x_star.len())?;
    }
    let mut state = init_state(problem, graph, x0, x_minus1)?;
    let mut channel = config
        .is_perturbed()
        .then(|| Channel::new(config.delay_steps, config.noise_sigma, config.seed));

    let mut records = Vec::new();
    let mut rec = record(problem, &state, oracle)?;
    observer(&state);
    records.push(rec);
    while state.k < config.max_iter && !(rec.grad_norm < config.tol) {
        let (alpha, m) = (config.alpha, config.momentum());
        match (config.algorithm, channel.as_mut()) {
            (Algorithm::Dagt | Algorithm::DagtHb, None) => step_hb(&mut state, problem, graph, alpha, m),
            (Algorithm::DagtNes, None) => step_nes(&mut state, problem, graph, alpha, m),
            (Algorithm::Dagt | Algorithm::DagtHb, Some(ch)) => {
                step_hb_with(&mut state, problem, graph, alpha, m, ch)
            }
            (Algorithm::DagtNes, Some(ch)) => step_nes_with(&mut state, problem, graph, alpha, m, ch),
        }
        if !state.is_finite() {
            return Err(Error::DivergenceDetected { iteration: state.k });
        }
        rec = record(problem, &state, oracle)?;
        if !rec.grad_norm.is_finite() {
            return Err(Error::DivergenceDetected { iteration: state.k });
        }
        observer(&state);
        records.push(rec);
    }
    Ok(IterTrace {
        algorithm: config.algorithm,
        records,
        converged: rec.grad_norm < config.tol,
        final_state: state,
    })
}

fn record(
    problem: &dyn AggregativeProblem,
    state: &SolverState,
    oracle: Option<&OracleSolution>,
) -> Result<IterRecord> {
    let d = problem.agg_dim();
    let grad_norm = norm(&global_gradient(problem, &state.x)?);
    let (residual_msq, obj_gap) = match oracle {
        Some(o) => {
            let sq: f64 = state.x.iter().zip(&o.x_star).map(|(a, b)| (a - b) * (a - b)).sum();
            (sq / problem.n_agents() as f64, objective(problem, &state.x)? - o.f_star)
        }
        None => (f64::NAN, f64::NAN),
    };
    Ok(IterRecord {
        k: state.k,
        residual_msq,
        obj_gap,
        grad_norm,
        u_track_err: consensus_error(&state.u, d),
        s_track_err: consensus_error(&state.s, d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_topology, TopologyKind};
    use crate::problem::make_quadratic;

    #[test]
    fn zero_iterations_gives_initial_record() {
        let q = make_quadratic(vec![1.0, 2.0], vec![1.0, 0.0], vec![0.0, 0.0]).unwrap();
        let g = build_topology(TopologyKind::Complete, 2, None, None).unwrap();
        let mut cfg = SolverConfig::new(Algorithm::Dagt, 0.1);
        cfg.max_iter = 0;
        let t = run(&q, &g, &cfg, &[1.0, 1.0], None, None).unwrap();
        assert_eq!(t.records.len(), 1);
        assert!(!t.converged);
        assert!(t.records[0].residual_msq.is_nan());
    }

    #[test]
    fn oversized_step_is_reported_as_divergence() {
        let q = make_quadratic(vec![1.0, 2.0], vec![1.0, 0.0], vec![0.0, 0.0]).unwrap();
        let g = build_topology(TopologyKind::Complete, 2, None, None).unwrap();
        let mut cfg = SolverConfig::new(Algorithm::Dagt, 1e3);
        cfg.max_iter = 100_000;
        match run(&q, &g, &cfg, &[1.0, 1.0], None, None) {
            Err(Error::DivergenceDetected { iteration }) => assert!(iteration > 1),
            other => panic!("expected divergence, got {other:?}"),
        }
    }
}
