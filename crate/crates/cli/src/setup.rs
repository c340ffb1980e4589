//! Materializes a config into a problem instance, graph, initial point and
//! reference solution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aggsim_core::graph::{build_topology, CommGraph, TopologyKind};
use aggsim_core::oracle::{self, OracleSolution};
use aggsim_core::problem::{
    make_placement, make_quadratic, AggregativeProblem, CournotProblem, QuadraticProblem, RegularityConstants,
};

use crate::config::{ExperimentConfig, ProblemKind};
use crate::error::{CliError, CliResult};

pub struct Experiment {
    pub problem: Box<dyn AggregativeProblem>,
    /// Set for the scalar quadratic instance, which has exact rates.
    pub quadratic: Option<QuadraticProblem>,
    pub graph: CommGraph,
    pub x0: Vec<f64>,
    pub x_minus1: Option<Vec<f64>>,
    /// Problem constants with any config overrides applied.
    pub constants: RegularityConstants,
    pub oracle: OracleSolution,
}

impl Experiment {
    pub fn build(cfg: &ExperimentConfig) -> CliResult<Self> {
        let (problem, quadratic) = build_problem(cfg)?;
        let n = problem.n_agents();
        if cfg.topology.n_agents != n {
            return Err(CliError::key(
                "topology.n_agents",
                format!("problem has {n} agents, topology has {}", cfg.topology.n_agents),
            ));
        }
        let graph = build_graph(cfg, cfg.topology_kind()?)?;
        let total = problem.layout().total();
        let (x0, x_minus1) = initial_point(cfg, total)?;
        let constants = constants_with_overrides(problem.constants(), cfg)?;
        let oracle = oracle::solve(problem.as_ref(), oracle::DEFAULT_TOL, oracle::DEFAULT_MAX_ITER)?;
        Ok(Experiment { problem, quadratic, graph, x0, x_minus1, constants, oracle })
    }

    pub fn x_minus1(&self) -> Option<&[f64]> {
        self.x_minus1.as_deref()
    }
}

/// Graph of the given kind over the config's agent count. The configured
/// edge probability only applies to random graphs.
pub fn build_graph(cfg: &ExperimentConfig, kind: TopologyKind) -> CliResult<CommGraph> {
    let t = &cfg.topology;
    let edge_prob = if kind == TopologyKind::Random {
        Some(t.edge_prob.ok_or_else(|| CliError::key("topology.edge_prob", "required for random graphs"))?)
    } else {
        None
    };
    build_topology(kind, t.n_agents, edge_prob, t.seed).map_err(|e| CliError::key("topology", e.to_string()))
}

fn build_problem(cfg: &ExperimentConfig) -> CliResult<(Box<dyn AggregativeProblem>, Option<QuadraticProblem>)> {
    let p = &cfg.problem;
    let kind = p.kind.ok_or_else(|| CliError::key("problem.kind", "missing"))?;
    let wrap = |e: aggsim_core::Error| CliError::key("problem", e.to_string());
    Ok(match kind {
        ProblemKind::Placement => {
            let r = p.r.clone().unwrap_or_default();
            let w = p.omega.clone().unwrap_or_default();
            (Box::new(make_placement(r, w).map_err(wrap)?), None)
        }
        ProblemKind::Cournot => {
            let range = |v: Option<[f64; 2]>| v.map(|[a, b]| (a, b)).unwrap_or_default();
            let cp = CournotProblem::random(
                p.n_agents.unwrap_or_default(),
                range(p.kappa_range),
                range(p.theta_range),
                range(p.sigma_range),
                p.omega1.unwrap_or_default(),
                p.omega2.unwrap_or_default(),
                p.seed.unwrap_or(0),
            )
            .map_err(wrap)?;
            (Box::new(cp), None)
        }
        ProblemKind::Quadratic => {
            let qp = make_quadratic(
                p.c.clone().unwrap_or_default(),
                p.h.clone().unwrap_or_default(),
                p.l.clone().unwrap_or_default(),
            )
            .map_err(wrap)?;
            (Box::new(qp.clone()), Some(qp))
        }
    })
}

fn initial_point(cfg: &ExperimentConfig, total: usize) -> CliResult<(Vec<f64>, Option<Vec<f64>>)> {
    let init = &cfg.init;
    let x0 = match (&init.x0, init.x0_range) {
        (Some(_), Some(_)) => return Err(CliError::key("init", "give either x0 or x0_range, not both")),
        (Some(x), None) => x.clone(),
        (None, Some([lo, hi])) => {
            if !(lo <= hi) {
                return Err(CliError::key("init.x0_range", format!("empty interval [{lo}, {hi}]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(init.seed.unwrap_or(0));
            (0..total).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect()
        }
        (None, None) => vec![0.0; total],
    };
    if x0.len() != total {
        return Err(CliError::key("init.x0", format!("expected {total} entries, got {}", x0.len())));
    }
    if let Some(xm) = &init.x_minus1 {
        if xm.len() != total {
            return Err(CliError::key("init.x_minus1", format!("expected {total} entries, got {}", xm.len())));
        }
    }
    Ok((x0, init.x_minus1.clone()))
}

fn constants_with_overrides(c: RegularityConstants, cfg: &ExperimentConfig) -> CliResult<RegularityConstants> {
    let p = &cfg.problem;
    RegularityConstants::new(
        p.mu.unwrap_or(c.mu),
        p.l1.unwrap_or(c.l1),
        p.l2.unwrap_or(c.l2),
        p.l3.unwrap_or(c.l3),
    )
    .map_err(|e| CliError::key("problem", e.to_string()))
}
