use nalgebra::DMatrix;

use super::{AggregativeProblem, RegularityConstants};
use crate::error::{Error, Result};

/// Scalar quadratic instance `f_i = c_i x_i^2 / 2 + u / N`, `phi_i = h_i x_i + l_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticProblem {
    c: Vec<f64>,
    h: Vec<f64>,
    l: Vec<f64>,
}

pub fn make_quadratic(c: Vec<f64>, h: Vec<f64>, l: Vec<f64>) -> Result<QuadraticProblem> {
    let n = c.len();
    if n == 0 || h.len() != n || l.len() != n {
        return Err(Error::InvalidArgument(format!(
            "quadratic parameter lengths differ or are empty: {} / {} / {}",
            n,
            h.len(),
            l.len()
        )));
    }
    if let Some(ci) = c.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument(format!("c_i must be positive, got {ci}")));
    }
    // negative h_i is not covered by the block-matrix rate analysis
    if let Some(hi) = h.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument(format!("h_i must be nonnegative, got {hi}")));
    }
    Ok(QuadraticProblem { c, h, l })
}

impl QuadraticProblem {
    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn l(&self) -> &[f64] {
        &self.l
    }

    /// `C = diag(c)`.
    pub fn c_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.c))
    }

    /// `H = diag(h)`.
    pub fn h_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.h))
    }
}

impl AggregativeProblem for QuadraticProblem {
    fn n_agents(&self) -> usize {
        self.c.len()
    }

    fn local_dim(&self, _agent: usize) -> usize {
        1
    }

    fn agg_dim(&self) -> usize {
        1
    }

    fn local_cost(&self, i: usize, x_i: &[f64], u: &[f64]) -> f64 {
        0.5 * self.c[i] * x_i[0] * x_i[0] + u[0] / self.c.len() as f64
    }

    fn aggregation(&self, i: usize, x_i: &[f64], out: &mut [f64]) {
        out[0] = self.h[i] * x_i[0] + self.l[i];
    }

    fn grad_local(&self, i: usize, x_i: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = self.c[i] * x_i[0];
    }

    fn grad_aggregate(&self, _i: usize, _x_i: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = 1.0 / self.c.len() as f64;
    }

    fn apply_agg_jacobian(&self, i: usize, _x_i: &[f64], v: &[f64], out: &mut [f64]) {
        out[0] = self.h[i] * v[0];
    }

    fn constants(&self) -> RegularityConstants {
        let mu = self.c.iter().copied().fold(f64::INFINITY, f64::min);
        let l1 = self.c.iter().copied().fold(0.0, f64::max);
        let l3 = self.h.iter().copied().fold(0.0, f64::max);
        RegularityConstants { mu, l1, l2: 0.0, l3 }
    }

    fn hessian(&self) -> Option<DMatrix<f64>> {
        Some(self.c_matrix())
    }
}
