//! Communication topologies with symmetric doubly stochastic weights.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;

/// Row/column sums must be within this of one.
pub const STOCHASTIC_TOL: f64 = 1e-12;
/// Off-diagonal weights at or below this magnitude are treated as absent edges.
pub const EDGE_TOL: f64 = 1e-14;
/// Attempts at drawing a connected random graph before giving up.
pub const MAX_RANDOM_RETRIES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TopologyKind {
    Ring,
    Star,
    Complete,
    Random,
}

impl TopologyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TopologyKind::Ring => "ring",
            TopologyKind::Star => "star",
            TopologyKind::Complete => "complete",
            TopologyKind::Random => "random",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ring" => Ok(TopologyKind::Ring),
            "star" => Ok(TopologyKind::Star),
            "complete" => Ok(TopologyKind::Complete),
            "random" => Ok(TopologyKind::Random),
            other => Err(Error::InvalidArgument(format!("unknown topology kind `{other}`"))),
        }
    }
}

/// A property of Assumption-1 style mixing matrices that a candidate fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    NotSquare,
    NegativeEntry,
    NotSymmetric,
    RowSums,
    ColumnSums,
    Disconnected,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Violation::NotSquare => "matrix is not square",
            Violation::NegativeEntry => "matrix has negative entries",
            Violation::NotSymmetric => "matrix is not symmetric",
            Violation::RowSums => "rows do not sum to 1",
            Violation::ColumnSums => "columns do not sum to 1",
            Violation::Disconnected => "graph is not connected",
        };
        f.write_str(msg)
    }
}

/// Checks symmetry, double stochasticity and connectivity. Returns one entry per violated property.
pub fn validate(weights: &DMatrix<f64>) -> Vec<Violation> {
    if !weights.is_square() {
        return vec![Violation::NotSquare];
    }
    let n = weights.nrows();
    let mut out = Vec::new();
    if weights.iter().any(|&w| w < 0.0) {
        out.push(Violation::NegativeEntry);
    }
    let symmetric = (0..n).all(|i| (0..i).all(|j| weights[(i, j)] == weights[(j, i)]));
    if !symmetric {
        out.push(Violation::NotSymmetric);
    }
    if (0..n).any(|i| (weights.row(i).sum() - 1.0).abs() > STOCHASTIC_TOL) {
        out.push(Violation::RowSums);
    }
    if (0..n).any(|j| (weights.column(j).sum() - 1.0).abs() > STOCHASTIC_TOL) {
        out.push(Violation::ColumnSums);
    }
    if !is_connected(weights) {
        out.push(Violation::Disconnected);
    }
    out
}

/// BFS over the nonzero off-diagonal pattern (either direction counts as an edge).
fn is_connected(weights: &DMatrix<f64>) -> bool {
    let n = weights.nrows();
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if j != i
                && !seen[j]
                && (weights[(i, j)].abs() > EDGE_TOL || weights[(j, i)].abs() > EDGE_TOL)
            {
                seen[j] = true;
                count += 1;
                queue.push_back(j);
            }
        }
    }
    count == n
}

/// Metropolis-Hastings weights `a_ij = 1 / (1 + max(d_i, d_j))` on an undirected adjacency pattern.
pub fn metropolis_weights(adjacency: &[Vec<bool>]) -> DMatrix<f64> {
    let n = adjacency.len();
    let degree: Vec<usize> = adjacency
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().filter(|&(j, &e)| e && j != i).count())
        .collect();
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j && adjacency[i][j] {
                w[(i, j)] = 1.0 / (1.0 + degree[i].max(degree[j]) as f64);
            }
        }
    }
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| w[(i, j)]).sum();
        w[(i, i)] = 1.0 - off;
    }
    w
}

/// An undirected communication graph with a symmetric doubly stochastic mixing matrix `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommGraph {
    weights: DMatrix<f64>,
    rho: f64,
}

impl CommGraph {
    /// Wraps an explicit mixing matrix after validating it.
    pub fn from_weights(weights: DMatrix<f64>) -> Result<Self> {
        let violations = validate(&weights);
        if !violations.is_empty() {
            let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidArgument(list.join("; ")));
        }
        if weights.nrows() < 2 {
            return Err(Error::InvalidArgument("a graph needs at least 2 agents".into()));
        }
        let rho = contraction_of(&weights);
        Ok(CommGraph { weights, rho })
    }

    pub fn n_agents(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// `rho = ||A - K_N||_2`, cached at construction.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `out = (A (x) I_block) v` for a stacked vector of `N` blocks.
    pub fn mix_into(&self, v: &[f64], block: usize, out: &mut [f64]) {
        let n = self.n_agents();
        debug_assert_eq!(v.len(), n * block);
        debug_assert_eq!(out.len(), n * block);
        for i in 0..n {
            let dst = &mut out[i * block..(i + 1) * block];
            dst.iter_mut().for_each(|o| *o = 0.0);
            for j in 0..n {
                let a = self.weights[(i, j)];
                if a == 0.0 {
                    continue;
                }
                for c in 0..block {
                    dst[c] += a * v[j * block + c];
                }
            }
        }
    }

    /// Weight matrix as row-major CSV with shortest round-trip float formatting.
    pub fn weights_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n_agents() {
            let row: Vec<String> = self.weights.row(i).iter().map(|w| format!("{w}")).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

fn contraction_of(weights: &DMatrix<f64>) -> f64 {
    let n = weights.nrows();
    let centered = weights - linalg::averaging_matrix(n);
    linalg::symmetric_eigenvalues(&centered)
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
}

/// Consensus contraction factor `rho = ||A - K_N||`; equal to the largest
/// eigenvalue magnitude of `A - K_N` since `A` is symmetric.
pub fn contraction_factor(graph: &CommGraph) -> f64 {
    graph.rho
}

/// Builds a topology with Metropolis-Hastings weights.
///
/// `edge_prob` is required for (and only for) random graphs, which are
/// Erdos-Renyi draws redrawn until connected, at most
/// [`MAX_RANDOM_RETRIES`] times. `seed` defaults to 0.
pub fn build_topology(
    kind: TopologyKind,
    n_agents: usize,
    edge_prob: Option<f64>,
    seed: Option<u64>,
) -> Result<CommGraph> {
    if n_agents < 2 {
        return Err(Error::InvalidArgument(format!(
            "topology needs at least 2 agents, got {n_agents}"
        )));
    }
    match (kind, edge_prob) {
        (TopologyKind::Random, None) => {
            return Err(Error::InvalidArgument("random topology requires edge_prob".into()))
        }
        (TopologyKind::Random, Some(p)) if !(p > 0.0 && p <= 1.0) => {
            return Err(Error::InvalidArgument(format!("edge_prob must be in (0, 1], got {p}")))
        }
        (TopologyKind::Random, Some(_)) => {}
        (_, Some(_)) => {
            return Err(Error::InvalidArgument(format!(
                "edge_prob only applies to random topologies, not {kind}"
            )))
        }
        (_, None) => {}
    }

    let n = n_agents;
    let mut adj = vec![vec![false; n]; n];
    let connect = |adj: &mut Vec<Vec<bool>>, i: usize, j: usize| {
        adj[i][j] = true;
        adj[j][i] = true;
    };
    match kind {
        TopologyKind::Ring => {
            for i in 0..n {
                connect(&mut adj, i, (i + 1) % n);
            }
        }
        TopologyKind::Star => {
            for i in 1..n {
                connect(&mut adj, 0, i);
            }
        }
        TopologyKind::Complete => {
            for i in 0..n {
                for j in (i + 1)..n {
                    connect(&mut adj, i, j);
                }
            }
        }
        TopologyKind::Random => {
            let p = edge_prob.unwrap_or(1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
            let mut found = false;
            for _ in 0..MAX_RANDOM_RETRIES {
                adj.iter_mut().for_each(|row| row.iter_mut().for_each(|e| *e = false));
                for i in 0..n {
                    for j in (i + 1)..n {
                        if rng.random::<f64>() < p {
                            connect(&mut adj, i, j);
                        }
                    }
                }
                let pattern = DMatrix::from_fn(n, n, |i, j| if adj[i][j] { 1.0 } else { 0.0 });
                if is_connected(&pattern) {
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(Error::ConstructionFailed(format!(
                    "no connected graph with n={n}, p={p} after {MAX_RANDOM_RETRIES} draws"
                )));
            }
        }
    }
    CommGraph::from_weights(metropolis_weights(&adj))
}
