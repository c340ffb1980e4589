//! Distributed aggregative problems.
//!
//! Each agent `i` owns a cost `f_i(x_i, u)` that depends on its own state
//! `x_i in R^{n_i}` and on the aggregate `u(x) = (1/N) sum_j phi_j(x_j) in R^d`.
//! The global objective is `F(x) = sum_i f_i(x_i, u(x))` and its gradient is
//!
//! ```text
//! grad F(x)_i = grad1 f_i(x_i, u(x)) + grad phi_i(x_i) * (1/N) sum_j grad2 f_j(x_j, u(x))
//! ```
//!
//! Vectors over all agents are stacked agent by agent (`col(x_1, ..., x_N)`).

mod cournot;
mod placement;
mod quadratic;

pub use cournot::{make_cournot, CournotProblem};
pub use placement::{make_placement, PlacementProblem};
pub use quadratic::{make_quadratic, QuadraticProblem};

use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::linalg;

/// Regularity constants: strong convexity `mu` of `F`, Lipschitz constant `l1`
/// of the tracked gradient map, Lipschitz constant `l2` of `grad2 f`, and
/// the bound `l3` on `||grad phi_i||`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityConstants {
    pub mu: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl RegularityConstants {
    pub fn new(mu: f64, l1: f64, l2: f64, l3: f64) -> Result<Self> {
        let c = RegularityConstants { mu, l1, l2, l3 };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.mu, self.l1, self.l2, self.l3].iter().all(|v| v.is_finite());
        if !finite || self.mu <= 0.0 || self.l1 <= 0.0 || self.l2 < 0.0 || self.l3 < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "need mu > 0, L1 > 0, L2 >= 0, L3 >= 0; got {self:?}"
            )));
        }
        if self.mu > self.l1 * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "mu = {} exceeds L1 = {}",
                self.mu, self.l1
            )));
        }
        Ok(())
    }

    /// `kappa = L1 / mu`.
    pub fn condition_number(&self) -> f64 {
        self.l1 / self.mu
    }
}

/// Offsets of each agent's block inside a stacked state vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    offsets: Vec<usize>,
}

impl Layout {
    pub fn new(dims: impl IntoIterator<Item = usize>) -> Self {
        let mut offsets = vec![0];
        for d in dims {
            offsets.push(offsets.last().unwrap() + d);
        }
        Layout { offsets }
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn range(&self, agent: usize) -> std::ops::Range<usize> {
        self.offsets[agent]..self.offsets[agent + 1]
    }

    pub fn n_blocks(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// Evaluator bundle for one aggregative problem instance.
///
/// Output-slice methods write exactly `local_dim(agent)` or `agg_dim()` values.
pub trait AggregativeProblem: Send + Sync {
    fn n_agents(&self) -> usize;
    fn local_dim(&self, agent: usize) -> usize;
    fn agg_dim(&self) -> usize;

    /// `f_i(x_i, u)`.
    fn local_cost(&self, agent: usize, x_i: &[f64], u: &[f64]) -> f64;
    /// `phi_i(x_i)`.
    fn aggregation(&self, agent: usize, x_i: &[f64], out: &mut [f64]);
    /// `grad1 f_i(x_i, u)`, gradient in the agent's own state.
    fn grad_local(&self, agent: usize, x_i: &[f64], u: &[f64], out: &mut [f64]);
    /// `grad2 f_i(x_i, u)`, gradient in the aggregate argument.
    fn grad_aggregate(&self, agent: usize, x_i: &[f64], u: &[f64], out: &mut [f64]);
    /// `grad phi_i(x_i) * v` with `grad phi_i` the `n_i x d` Jacobian transpose.
    fn apply_agg_jacobian(&self, agent: usize, x_i: &[f64], v: &[f64], out: &mut [f64]);

    fn constants(&self) -> RegularityConstants;

    /// Constant Hessian of `F` when the problem is jointly quadratic.
    fn hessian(&self) -> Option<DMatrix<f64>> {
        None
    }

    /// `grad phi_i(x_i)` as an explicit `n_i x d` matrix.
    fn agg_jacobian(&self, agent: usize, x_i: &[f64]) -> DMatrix<f64> {
        let (ni, d) = (self.local_dim(agent), self.agg_dim());
        let mut m = DMatrix::zeros(ni, d);
        let mut e = vec![0.0; d];
        let mut col = vec![0.0; ni];
        for c in 0..d {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[c] = 1.0;
            self.apply_agg_jacobian(agent, x_i, &e, &mut col);
            m.column_mut(c).copy_from_slice(&col);
        }
        m
    }

    fn layout(&self) -> Layout {
        Layout::new((0..self.n_agents()).map(|i| self.local_dim(i)))
    }
}

/// `u(x) = (1/N) sum_i phi_i(x_i)`.
pub fn aggregate(problem: &dyn AggregativeProblem, x: &[f64]) -> Result<Vec<f64>> {
    let layout = problem.layout();
    check_dim(layout.total(), x.len())?;
    let d = problem.agg_dim();
    let n = problem.n_agents();
    let mut u = vec![0.0; d];
    let mut phi = vec![0.0; d];
    for i in 0..n {
        problem.aggregation(i, &x[layout.range(i)], &mut phi);
        u.iter_mut().zip(&phi).for_each(|(a, p)| *a += p);
    }
    u.iter_mut().for_each(|a| *a /= n as f64);
    Ok(u)
}

/// `F(x) = sum_i f_i(x_i, u(x))`.
pub fn objective(problem: &dyn AggregativeProblem, x: &[f64]) -> Result<f64> {
    let u = aggregate(problem, x)?;
    let layout = problem.layout();
    Ok((0..problem.n_agents())
        .map(|i| problem.local_cost(i, &x[layout.range(i)], &u))
        .sum())
}

/// Centralized global gradient `grad F(x)`; agents never see this, it is
/// used for monitoring and by the oracle.
pub fn global_gradient(problem: &dyn AggregativeProblem, x: &[f64]) -> Result<Vec<f64>> {
    let u = aggregate(problem, x)?;
    let layout = problem.layout();
    let n = problem.n_agents();
    let d = problem.agg_dim();

    let mut mean_g2 = vec![0.0; d];
    let mut g2 = vec![0.0; d];
    for i in 0..n {
        problem.grad_aggregate(i, &x[layout.range(i)], &u, &mut g2);
        mean_g2.iter_mut().zip(&g2).for_each(|(a, g)| *a += g);
    }
    mean_g2.iter_mut().for_each(|a| *a /= n as f64);

    let mut grad = vec![0.0; layout.total()];
    let mut tmp = Vec::new();
    for i in 0..n {
        let r = layout.range(i);
        tmp.resize(r.len(), 0.0);
        problem.grad_local(i, &x[r.clone()], &u, &mut grad[r.clone()]);
        problem.apply_agg_jacobian(i, &x[r.clone()], &mean_g2, &mut tmp);
        grad[r].iter_mut().zip(&tmp).for_each(|(g, t)| *g += t);
    }
    Ok(grad)
}

/// Extreme eigenvalues of a symmetric Hessian as `(mu, L1)`.
pub(crate) fn hessian_extremes(h: &DMatrix<f64>) -> (f64, f64) {
    let ev = linalg::symmetric_eigenvalues(h);
    (ev[0], ev[ev.len() - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_validation() {
        assert!(RegularityConstants::new(1.0, 9.0, 0.0, 1.0).is_ok());
        assert!(RegularityConstants::new(2.0, 1.0, 0.0, 1.0).is_err());
        assert!(RegularityConstants::new(0.0, 1.0, 0.0, 1.0).is_err());
        assert!(RegularityConstants::new(1.0, 1.0, -1.0, 1.0).is_err());
        assert_eq!(RegularityConstants::new(1.0, 9.0, 0.0, 1.0).unwrap().condition_number(), 9.0);
    }

    #[test]
    fn layout_offsets() {
        let l = Layout::new([2, 1, 3]);
        assert_eq!(l.total(), 6);
        assert_eq!(l.range(1), 2..3);
        assert_eq!(l.range(2), 3..6);
        assert_eq!(l.n_blocks(), 3);
    }
}
