use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{hessian_extremes, AggregativeProblem, RegularityConstants};
use crate::error::{Error, Result};

/// Nash-Cournot generation game:
/// `f_i = kappa_i x_i^2 + theta_i x_i + sigma_i - (omega1 - omega2 * S) x_i`
/// where `S = sum_j x_j` is the total output.
///
/// The aggregate is a mean, so `phi_i(x_i) = N x_i` makes `u(x) = S`.
#[derive(Debug, Clone, PartialEq)]
pub struct CournotProblem {
    kappa: Vec<f64>,
    theta: Vec<f64>,
    sigma: Vec<f64>,
    omega1: f64,
    omega2: f64,
    constants: RegularityConstants,
}

pub fn make_cournot(
    kappa: Vec<f64>,
    theta: Vec<f64>,
    sigma: Vec<f64>,
    omega1: f64,
    omega2: f64,
) -> Result<CournotProblem> {
    let n = kappa.len();
    if n == 0 || theta.len() != n || sigma.len() != n {
        return Err(Error::InvalidArgument(format!(
            "cournot parameter lengths differ or are empty: {} / {} / {}",
            n,
            theta.len(),
            sigma.len()
        )));
    }
    if let Some(k) = kappa.iter().find(|k| !(**k > 0.0)) {
        return Err(Error::InvalidArgument(format!("kappa must be positive, got {k}")));
    }
    if !(omega2 > 0.0) {
        return Err(Error::InvalidArgument(format!("omega2 must be positive, got {omega2}")));
    }
    let mut p = CournotProblem {
        kappa,
        theta,
        sigma,
        omega1,
        omega2,
        constants: RegularityConstants { mu: 1.0, l1: 1.0, l2: 0.0, l3: 0.0 },
    };
    let (mu, l1) = hessian_extremes(&p.hessian_matrix());
    p.constants = RegularityConstants::new(mu, l1, omega2, n as f64)?;
    Ok(p)
}

/// Closed interval `[lo, hi]` for drawing instance parameters.
pub type Interval = (f64, f64);

impl CournotProblem {
    /// Draws `kappa`, `theta`, `sigma` uniformly from the given intervals.
    pub fn random(
        n: usize,
        kappa: Interval,
        theta: Interval,
        sigma: Interval,
        omega1: f64,
        omega2: f64,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |(lo, hi): Interval, rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..n).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect()
        };
        let k = draw(kappa, &mut rng);
        let t = draw(theta, &mut rng);
        let s = draw(sigma, &mut rng);
        make_cournot(k, t, s, omega1, omega2)
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn omegas(&self) -> (f64, f64) {
        (self.omega1, self.omega2)
    }

    // F = sum kappa_i x_i^2 + (theta_i - omega1) x_i + sigma_i + omega2 S^2
    fn hessian_matrix(&self) -> DMatrix<f64> {
        let n = self.kappa.len();
        DMatrix::from_fn(n, n, |i, j| {
            2.0 * self.omega2 + if i == j { 2.0 * self.kappa[i] } else { 0.0 }
        })
    }
}

impl AggregativeProblem for CournotProblem {
    fn n_agents(&self) -> usize {
        self.kappa.len()
    }

    fn local_dim(&self, _agent: usize) -> usize {
        1
    }

    fn agg_dim(&self) -> usize {
        1
    }

    fn local_cost(&self, i: usize, x_i: &[f64], u: &[f64]) -> f64 {
        let x = x_i[0];
        self.kappa[i] * x * x + self.theta[i] * x + self.sigma[i] - (self.omega1 - self.omega2 * u[0]) * x
    }

    fn aggregation(&self, _i: usize, x_i: &[f64], out: &mut [f64]) {
        out[0] = self.kappa.len() as f64 * x_i[0];
    }

    fn grad_local(&self, i: usize, x_i: &[f64], u: &[f64], out: &mut [f64]) {
        out[0] = 2.0 * self.kappa[i] * x_i[0] + self.theta[i] - self.omega1 + self.omega2 * u[0];
    }

    fn grad_aggregate(&self, _i: usize, x_i: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = self.omega2 * x_i[0];
    }

    fn apply_agg_jacobian(&self, _i: usize, _x_i: &[f64], v: &[f64], out: &mut [f64]) {
        out[0] = self.kappa.len() as f64 * v[0];
    }

    fn constants(&self) -> RegularityConstants {
        self.constants
    }

    fn hessian(&self) -> Option<DMatrix<f64>> {
        Some(self.hessian_matrix())
    }
}
