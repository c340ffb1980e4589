use crate::error::{check_dim, Result};
use crate::graph::CommGraph;
use crate::problem::AggregativeProblem;

use super::comm::Channel;

/// Stacked iterates of all agents.
///
/// `y` is the point at which gradients and aggregation maps are evaluated:
/// the extrapolated point for Nesterov, and a copy of `x` otherwise. The
/// trackers satisfy `mean(u) = mean(phi(y))` and
/// `mean(s) = mean(grad2 f(y, u))` after every unperturbed round.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub x: Vec<f64>,
    pub x_prev: Vec<f64>,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub s: Vec<f64>,
    pub k: usize,
    // phi(y_k) and grad2 f(y_k, u_k), reused by the next tracker update
    pub(crate) phi: Vec<f64>,
    pub(crate) g2: Vec<f64>,
}

impl SolverState {
    pub fn is_finite(&self) -> bool {
        [&self.x, &self.y, &self.u, &self.s]
            .iter()
            .all(|v| v.iter().all(|z| z.is_finite()))
    }

    /// Builds a state from explicit trackers, e.g. a consensus point.
    pub fn from_parts(
        problem: &dyn AggregativeProblem,
        x: Vec<f64>,
        x_prev: Vec<f64>,
        u: Vec<f64>,
        s: Vec<f64>,
    ) -> Result<Self> {
        let total = problem.layout().total();
        let nd = problem.n_agents() * problem.agg_dim();
        check_dim(total, x.len())?;
        check_dim(total, x_prev.len())?;
        check_dim(nd, u.len())?;
        check_dim(nd, s.len())?;
        let y = x.clone();
        let phi = eval_phi(problem, &y);
        let g2 = eval_grad2(problem, &y, &u);
        Ok(SolverState { x, x_prev, y, u, s, k: 0, phi, g2 })
    }
}

fn eval_phi(problem: &dyn AggregativeProblem, p: &[f64]) -> Vec<f64> {
    let layout = problem.layout();
    let d = problem.agg_dim();
    let mut out = vec![0.0; problem.n_agents() * d];
    for i in 0..problem.n_agents() {
        problem.aggregation(i, &p[layout.range(i)], &mut out[i * d..(i + 1) * d]);
    }
    out
}

fn eval_grad2(problem: &dyn AggregativeProblem, p: &[f64], u: &[f64]) -> Vec<f64> {
    let layout = problem.layout();
    let d = problem.agg_dim();
    let mut out = vec![0.0; problem.n_agents() * d];
    for i in 0..problem.n_agents() {
        let b = i * d..(i + 1) * d;
        problem.grad_aggregate(i, &p[layout.range(i)], &u[b.clone()], &mut out[b]);
    }
    out
}

/// `u_0 = phi(x_0)`, `s_0 = grad2 f(x_0, u_0)`, `y_0 = x_0`; `x_{-1}`
/// defaults to `x_0`.
pub fn init_state(
    problem: &dyn AggregativeProblem,
    graph: &CommGraph,
    x0: &[f64],
    x_minus1: Option<&[f64]>,
) -> Result<SolverState> {
    check_dim(problem.n_agents(), graph.n_agents())?;
    let total = problem.layout().total();
    check_dim(total, x0.len())?;
    let x_prev = match x_minus1 {
        Some(v) => {
            check_dim(total, v.len())?;
            v.to_vec()
        }
        None => x0.to_vec(),
    };
    let phi = eval_phi(problem, x0);
    let u = phi.clone();
    let g2 = eval_grad2(problem, x0, &u);
    let s = g2.clone();
    Ok(SolverState {
        x: x0.to_vec(),
        x_prev,
        y: x0.to_vec(),
        u,
        s,
        k: 0,
        phi,
        g2,
    })
}

#[derive(Clone, Copy)]
enum Momentum {
    HeavyBall(f64),
    Nesterov(f64),
}

fn advance(
    state: &mut SolverState,
    problem: &dyn AggregativeProblem,
    graph: &CommGraph,
    alpha: f64,
    momentum: Momentum,
    channel: Option<&mut Channel>,
) {
    let layout = problem.layout();
    let n = problem.n_agents();
    let d = problem.agg_dim();

    // search direction at y_k
    let mut dir = vec![0.0; layout.total()];
    let mut tmp = Vec::new();
    for i in 0..n {
        let r = layout.range(i);
        let b = i * d..(i + 1) * d;
        tmp.resize(r.len(), 0.0);
        let p = &state.y[r.clone()];
        problem.grad_local(i, p, &state.u[b.clone()], &mut dir[r.clone()]);
        problem.apply_agg_jacobian(i, p, &state.s[b], &mut tmp);
        dir[r].iter_mut().zip(&tmp).for_each(|(g, t)| *g += t);
    }

    let x_new: Vec<f64>;
    let y_new: Vec<f64>;
    match momentum {
        Momentum::HeavyBall(beta) => {
            x_new = (0..dir.len())
                .map(|j| state.x[j] - alpha * dir[j] + beta * (state.x[j] - state.x_prev[j]))
                .collect();
            y_new = x_new.clone();
        }
        Momentum::Nesterov(gamma) => {
            x_new = (0..dir.len()).map(|j| state.y[j] - alpha * dir[j]).collect();
            y_new = (0..dir.len())
                .map(|j| x_new[j] + gamma * (x_new[j] - state.x[j]))
                .collect();
        }
    }

    let phi_new = eval_phi(problem, &y_new);
    let mut mixed = vec![0.0; n * d];
    let (u_new, s_new, g2_new);
    match channel {
        None => {
            graph.mix_into(&state.u, d, &mut mixed);
            u_new = combine(&mixed, &phi_new, &state.phi);
            g2_new = eval_grad2(problem, &y_new, &u_new);
            graph.mix_into(&state.s, d, &mut mixed);
            s_new = combine(&mixed, &g2_new, &state.g2);
        }
        Some(ch) => {
            ch.prime(state);
            let src = ch.source();
            let (src_u, src_s, src_phi, src_g2) =
                (src.u.clone(), src.s.clone(), src.phi.clone(), src.g2.clone());
            ch.mix(graph, &src_u, d, &mut mixed);
            u_new = combine(&mixed, &phi_new, &src_phi);
            g2_new = eval_grad2(problem, &y_new, &u_new);
            ch.mix(graph, &src_s, d, &mut mixed);
            s_new = combine(&mixed, &g2_new, &src_g2);
        }
    }

    state.x_prev = std::mem::replace(&mut state.x, x_new);
    state.y = y_new;
    state.u = u_new;
    state.s = s_new;
    state.phi = phi_new;
    state.g2 = g2_new;
    state.k += 1;
}

fn combine(mixed: &[f64], new: &[f64], old: &[f64]) -> Vec<f64> {
    (0..mixed.len()).map(|j| mixed[j] + new[j] - old[j]).collect()
}

/// One heavy-ball round (DAGT when `beta = 0`).
pub fn step_hb(
    state: &mut SolverState,
    problem: &dyn AggregativeProblem,
    graph: &CommGraph,
    alpha: f64,
    beta: f64,
) {
    advance(state, problem, graph, alpha, Momentum::HeavyBall(beta), None);
}

/// One Nesterov round.
pub fn step_nes(
    state: &mut SolverState,
    problem: &dyn AggregativeProblem,
    graph: &CommGraph,
    alpha: f64,
    gamma: f64,
) {
    advance(state, problem, graph, alpha, Momentum::Nesterov(gamma), None);
}

/// Heavy-ball round whose tracker exchange goes through `channel`.
pub fn step_hb_with(
    state: &mut SolverState,
    problem: &dyn AggregativeProblem,
    graph: &CommGraph,
    alpha: f64,
    beta: f64,
    channel: &mut Channel,
) {
    advance(state, problem, graph, alpha, Momentum::HeavyBall(beta), Some(channel));
    channel.record(state);
}

/// Nesterov round whose tracker exchange goes through `channel`.
pub fn step_nes_with(
    state: &mut SolverState,
    problem: &dyn AggregativeProblem,
    graph: &CommGraph,
    alpha: f64,
    gamma: f64,
    channel: &mut Channel,
) {
    advance(state, problem, graph, alpha, Momentum::Nesterov(gamma), Some(channel));
    channel.record(state);
}

/// Largest componentwise gaps `|mean(u) - mean(phi(y))|` and
/// `|mean(s) - mean(grad2 f(y, u))|`.
pub fn tracking_gaps(state: &SolverState, problem: &dyn AggregativeProblem) -> (f64, f64) {
    let d = problem.agg_dim();
    let phi = eval_phi(problem, &state.y);
    let g2 = eval_grad2(problem, &state.y, &state.u);
    let gap = |a: &[f64], b: &[f64]| {
        let ma = crate::linalg::block_mean(a, d);
        let mb = crate::linalg::block_mean(b, d);
        ma.iter().zip(&mb).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
    };
    (gap(&state.u, &phi), gap(&state.s, &g2))
}
