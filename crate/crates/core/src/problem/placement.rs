use nalgebra::DMatrix;

use super::{hessian_extremes, AggregativeProblem, RegularityConstants};
use crate::error::{Error, Result};

/// Optimal placement in the plane: `f_i = w_i ||x_i - r_i||^2 + ||x_i - u||^2`
/// with identity aggregation, so `u` is the centroid of the free entities.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementProblem {
    anchors: Vec<[f64; 2]>,
    weights: Vec<f64>,
    constants: RegularityConstants,
}

pub fn make_placement(anchors: Vec<[f64; 2]>, weights: Vec<f64>) -> Result<PlacementProblem> {
    if anchors.is_empty() {
        return Err(Error::InvalidArgument("placement needs at least one agent".into()));
    }
    if anchors.len() != weights.len() {
        return Err(Error::InvalidArgument(format!(
            "{} anchors but {} weights",
            anchors.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(Error::InvalidArgument(format!("placement weights must be positive, got {w}")));
    }
    let mut p = PlacementProblem {
        anchors,
        weights,
        constants: RegularityConstants { mu: 1.0, l1: 1.0, l2: 2.0, l3: 1.0 },
    };
    let (mu, l1) = hessian_extremes(&p.hessian_matrix());
    p.constants = RegularityConstants::new(mu, l1, 2.0, 1.0)?;
    Ok(p)
}

impl PlacementProblem {
    pub fn anchors(&self) -> &[[f64; 2]] {
        &self.anchors
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    // F = sum w_i ||x_i - r_i||^2 + sum ||x_i||^2 - N ||u||^2
    fn hessian_matrix(&self) -> DMatrix<f64> {
        let n = self.anchors.len();
        let mut h = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                for c in 0..2 {
                    let mut v = -2.0 / n as f64;
                    if i == j {
                        v += 2.0 * self.weights[i] + 2.0;
                    }
                    h[(2 * i + c, 2 * j + c)] = v;
                }
            }
        }
        h
    }
}

impl AggregativeProblem for PlacementProblem {
    fn n_agents(&self) -> usize {
        self.anchors.len()
    }

    fn local_dim(&self, _agent: usize) -> usize {
        2
    }

    fn agg_dim(&self) -> usize {
        2
    }

    fn local_cost(&self, agent: usize, x_i: &[f64], u: &[f64]) -> f64 {
        let r = self.anchors[agent];
        let w = self.weights[agent];
        (0..2)
            .map(|c| w * (x_i[c] - r[c]).powi(2) + (x_i[c] - u[c]).powi(2))
            .sum()
    }

    fn aggregation(&self, _agent: usize, x_i: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&x_i[..2]);
    }

    fn grad_local(&self, agent: usize, x_i: &[f64], u: &[f64], out: &mut [f64]) {
        let r = self.anchors[agent];
        let w = self.weights[agent];
        for c in 0..2 {
            out[c] = 2.0 * w * (x_i[c] - r[c]) + 2.0 * (x_i[c] - u[c]);
        }
    }

    fn grad_aggregate(&self, _agent: usize, x_i: &[f64], u: &[f64], out: &mut [f64]) {
        for c in 0..2 {
            out[c] = -2.0 * (x_i[c] - u[c]);
        }
    }

    fn apply_agg_jacobian(&self, _agent: usize, _x_i: &[f64], v: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&v[..2]);
    }

    fn constants(&self) -> RegularityConstants {
        self.constants
    }

    fn hessian(&self) -> Option<DMatrix<f64>> {
        Some(self.hessian_matrix())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{aggregate, global_gradient};

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(make_placement(vec![[0.0, 0.0]], vec![1.0, 2.0]).is_err());
        assert!(make_placement(vec![[0.0, 0.0]], vec![0.0]).is_err());
        assert!(make_placement(vec![], vec![]).is_err());
    }

    #[test]
    fn single_agent_gradient_ignores_aggregate_terms() {
        let p = make_placement(vec![[0.0, 0.0]], vec![1.0]).unwrap();
        let g = global_gradient(&p, &[1.0, 0.0]).unwrap();
        assert_eq!(g, vec![2.0, 0.0]);
        let g0 = global_gradient(&p, &[0.0, 0.0]).unwrap();
        assert_eq!(g0, vec![0.0, 0.0]);
    }

    #[test]
    fn aggregate_of_identical_points() {
        let p = make_placement(vec![[1.0, 1.0]; 3], vec![1.0; 3]).unwrap();
        let u = aggregate(&p, &[1.0, 2.0, 1.0, 2.0, 1.0, 2.0]).unwrap();
        assert_eq!(u, vec![1.0, 2.0]);
    }

    #[test]
    fn constants_from_hessian_spectrum() {
        // eigenvalues 2w (consensus direction) and 2w + 2
        let p = make_placement(vec![[0.0, 0.0]; 5], vec![20.0; 5]).unwrap();
        let c = p.constants();
        assert!((c.mu - 40.0).abs() < 1e-10);
        assert!((c.l1 - 42.0).abs() < 1e-10);
        assert_eq!((c.l2, c.l3), (2.0, 1.0));
    }
}
