//! Exact rates for the scalar quadratic instance.
//!
//! For `f_i = c_i x_i^2 / 2 + u / N` with `phi_i = h_i x_i + l_i` the error
//! dynamics are linear, so the convergence rate is the spectral radius of a
//! block matrix built from `C = diag(c)`, `H = diag(h)` and the mixing
//! matrix. That radius splits into the graph part `rho` and the radius of a
//! small optimization-only matrix.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::CommGraph;
use crate::linalg::{averaging_matrix, spectral_radius};
use crate::problem::QuadraticProblem;
use crate::solver::Algorithm;

use super::matrices::{ErrorSystemMatrix, MatrixInputs, MatrixKind};

/// Agreement required between the full radius and the reduced shortcut.
pub const REDUCED_IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticRates {
    pub matrix: ErrorSystemMatrix,
    /// Radius of the full block matrix.
    pub spectral_radius: f64,
    /// Radius of the reduced optimization matrix.
    pub reduced_radius: f64,
    /// `max(rho_graph, reduced_radius)`.
    pub predicted_rate: f64,
    /// `|spectral_radius - predicted_rate|`. Near-defective spectra (e.g. the
    /// critically damped optimal tunings) make dense eigenvalues accurate only
    /// to about `sqrt(eps)`, so the gap is reported rather than enforced.
    pub identity_gap: f64,
}

fn set_block(m: &mut DMatrix<f64>, bi: usize, bj: usize, b: &DMatrix<f64>) {
    let n = b.nrows();
    m.view_mut((bi * n, bj * n), (n, n)).copy_from(b);
}

fn inputs(qp: &QuadraticProblem, graph: &CommGraph, alpha: f64, momentum: f64) -> MatrixInputs {
    MatrixInputs::Quadratic {
        c: qp.c().to_vec(),
        h: qp.h().to_vec(),
        weights: graph.weights().clone(),
        alpha,
        momentum,
    }
}

/// Full block matrix `P1^{-1} P2` for the given algorithm. State blocks are
/// `(x - x*, [x_prev - x*,] u - K u, s - K s)`.
pub fn full_matrix(
    qp: &QuadraticProblem,
    graph: &CommGraph,
    alpha: f64,
    momentum: f64,
    algorithm: Algorithm,
) -> Result<ErrorSystemMatrix> {
    use crate::problem::AggregativeProblem;
    let n = qp.n_agents();
    crate::error::check_dim(n, graph.n_agents())?;
    let id = DMatrix::<f64>::identity(n, n);
    let c = qp.c_matrix();
    let h = qp.h_matrix();
    let kn = averaging_matrix(n);
    let mix = graph.weights() - &kn;
    let knh_h = &kn * &h - &h;
    let i_ac = &id - &c * alpha;

    let (nb, coupling_row, coupling, kind) = match algorithm {
        Algorithm::Dagt => (3, 1, knh_h.clone(), MatrixKind::PD3),
        Algorithm::DagtHb => (4, 2, knh_h.clone(), MatrixKind::PH3),
        Algorithm::DagtNes => (4, 2, &knh_h * (1.0 + momentum), MatrixKind::PN3),
    };
    let mut p2 = DMatrix::zeros(nb * n, nb * n);
    match algorithm {
        Algorithm::Dagt => {
            set_block(&mut p2, 0, 0, &i_ac);
            set_block(&mut p2, 0, 2, &(&h * -alpha));
            set_block(&mut p2, 1, 0, &knh_h);
            set_block(&mut p2, 1, 1, &mix);
            set_block(&mut p2, 2, 2, &mix);
        }
        Algorithm::DagtHb => {
            let beta = momentum;
            set_block(&mut p2, 0, 0, &(&id * (1.0 + beta) - &c * alpha));
            set_block(&mut p2, 0, 1, &(&id * -beta));
            set_block(&mut p2, 0, 3, &(&h * -alpha));
            set_block(&mut p2, 1, 0, &id);
            set_block(&mut p2, 2, 0, &knh_h);
            set_block(&mut p2, 2, 2, &mix);
            set_block(&mut p2, 3, 3, &mix);
        }
        Algorithm::DagtNes => {
            let gamma = momentum;
            let kn_i = &kn - &id;
            set_block(&mut p2, 0, 0, &(&i_ac * (1.0 + gamma)));
            set_block(&mut p2, 0, 1, &(&i_ac * -gamma));
            set_block(&mut p2, 0, 3, &(&h * -alpha));
            set_block(&mut p2, 1, 0, &id);
            set_block(&mut p2, 2, 0, &(&kn_i * &h * (1.0 + 2.0 * gamma)));
            set_block(&mut p2, 2, 1, &(&kn_i * &h * -gamma));
            set_block(&mut p2, 2, 2, &mix);
            set_block(&mut p2, 3, 3, &mix);
        }
    }
    // P1 is unit lower triangular with a single off-diagonal block
    let mut p1_inv = DMatrix::identity(nb * n, nb * n);
    set_block(&mut p1_inv, coupling_row, 0, &(-coupling));
    Ok(ErrorSystemMatrix { kind, entries: p1_inv * p2, inputs: inputs(qp, graph, alpha, momentum) })
}

/// Optimization-only matrix: `I - alpha C` (DAGT), `P_H4` or `P_N4`.
pub fn reduced_matrix(
    qp: &QuadraticProblem,
    graph: &CommGraph,
    alpha: f64,
    momentum: f64,
    algorithm: Algorithm,
) -> ErrorSystemMatrix {
    let c = qp.c_matrix();
    let n = c.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let i_ac = &id - &c * alpha;
    let (kind, entries) = match algorithm {
        Algorithm::Dagt => (MatrixKind::PD4, i_ac),
        Algorithm::DagtHb => {
            let mut m = DMatrix::zeros(2 * n, 2 * n);
            set_block(&mut m, 0, 0, &(&id * (1.0 + momentum) - &c * alpha));
            set_block(&mut m, 0, 1, &(&id * -momentum));
            set_block(&mut m, 1, 0, &id);
            (MatrixKind::PH4, m)
        }
        Algorithm::DagtNes => {
            let mut m = DMatrix::zeros(2 * n, 2 * n);
            set_block(&mut m, 0, 0, &(&i_ac * (1.0 + momentum)));
            set_block(&mut m, 0, 1, &(&i_ac * -momentum));
            set_block(&mut m, 1, 0, &id);
            (MatrixKind::PN4, m)
        }
    };
    ErrorSystemMatrix { kind, entries, inputs: inputs(qp, graph, alpha, momentum) }
}

/// Radius of the full block matrix next to the shortcut
/// `max(rho_graph, reduced radius)`.
pub fn quadratic_rates(
    qp: &QuadraticProblem,
    graph: &CommGraph,
    alpha: f64,
    momentum: f64,
    algorithm: Algorithm,
) -> Result<QuadraticRates> {
    let matrix = full_matrix(qp, graph, alpha, momentum, algorithm)?;
    let spectral_radius = matrix.spectral_radius();
    let reduced_radius = reduced_matrix(qp, graph, alpha, momentum, algorithm).spectral_radius();
    let predicted_rate = reduced_radius.max(graph.rho());
    let identity_gap = (spectral_radius - predicted_rate).abs();
    Ok(QuadraticRates { matrix, spectral_radius, reduced_radius, predicted_rate, identity_gap })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalParams {
    pub alpha: f64,
    /// `None` for DAGT.
    pub momentum: Option<f64>,
}

/// Closed-form tuning: DAGT `2/(mu+L1)`; heavy-ball
/// `4/(sqrt L1 + sqrt mu)^2`, `(sqrt L1 - sqrt mu)/(sqrt L1 + sqrt mu)`;
/// Nesterov `4/(3 L1 + mu)`, `(sqrt(3k+1) - 2)/(sqrt(3k+1) + 2)`.
pub fn optimal_params(algorithm: Algorithm, mu: f64, l1: f64) -> Result<OptimalParams> {
    if !(mu > 0.0 && mu <= l1 && l1.is_finite()) {
        return Err(Error::InvalidArgument(format!("need 0 < mu <= L1, got mu = {mu}, L1 = {l1}")));
    }
    Ok(match algorithm {
        Algorithm::Dagt => OptimalParams { alpha: 2.0 / (mu + l1), momentum: None },
        Algorithm::DagtHb => {
            let (sl, sm) = (l1.sqrt(), mu.sqrt());
            OptimalParams { alpha: 4.0 / (sl + sm).powi(2), momentum: Some((sl - sm) / (sl + sm)) }
        }
        Algorithm::DagtNes => {
            let r = (3.0 * l1 / mu + 1.0).sqrt();
            OptimalParams { alpha: 4.0 / (3.0 * l1 + mu), momentum: Some((r - 2.0) / (r + 2.0)) }
        }
    })
}

/// Rates claimed for the optimal parameters: `(k-1)/(k+1)`,
/// `(sqrt k - 1)/(sqrt k + 1)` and `(sqrt(3k+1) - 2)/(sqrt(3k+1) + 2)`.
pub fn claimed_optimal_rate(algorithm: Algorithm, mu: f64, l1: f64) -> f64 {
    let k = l1 / mu;
    match algorithm {
        Algorithm::Dagt => (k - 1.0) / (k + 1.0),
        Algorithm::DagtHb => (k.sqrt() - 1.0) / (k.sqrt() + 1.0),
        Algorithm::DagtNes => {
            let r = (3.0 * k + 1.0).sqrt();
            (r - 2.0) / (r + 2.0)
        }
    }
}

/// Radius of the reduced matrix for a spectrum `c` given only through its
/// extremes `mu` and `L1` (the radius depends only on them).
pub fn reduced_radius_extremes(algorithm: Algorithm, mu: f64, l1: f64, alpha: f64, momentum: f64) -> f64 {
    let c = vec![mu, l1];
    let qp = crate::problem::make_quadratic(c, vec![0.0; 2], vec![0.0; 2]).expect("valid spectrum");
    let g = crate::graph::build_topology(crate::graph::TopologyKind::Complete, 2, None, None).expect("complete graph");
    spectral_radius(&reduced_matrix(&qp, &g, alpha, momentum, algorithm).entries)
}

/// Upper bound on the reduced radius claimed for parameters satisfying the
/// side conditions: `beta` when `beta >= (1 - sqrt(alpha L1))^2` (heavy-ball),
/// `sqrt((1 - alpha mu) gamma)` when `1/L1 <= alpha <= 1/mu` and
/// `gamma >= (1 - sqrt(alpha mu))/(1 + sqrt(alpha mu))` (Nesterov).
pub fn claimed_radius_bound(mu: f64, l1: f64, alpha: f64, momentum: f64, algorithm: Algorithm) -> Result<f64> {
    match algorithm {
        Algorithm::DagtHb => {
            let floor = (1.0 - (alpha * l1).sqrt()).powi(2);
            if momentum >= floor {
                Ok(momentum)
            } else {
                Err(Error::OutOfValidityRegion(format!("beta = {momentum} below (1 - sqrt(alpha L1))^2 = {floor}")))
            }
        }
        Algorithm::DagtNes => {
            let sm = (alpha * mu).sqrt();
            let floor = (1.0 - sm) / (1.0 + sm);
            if alpha < 1.0 / l1 || alpha > 1.0 / mu {
                Err(Error::OutOfValidityRegion(format!("alpha = {alpha} outside [1/L1, 1/mu]")))
            } else if momentum < floor {
                Err(Error::OutOfValidityRegion(format!(
                    "gamma = {momentum} below (1 - sqrt(alpha mu))/(1 + sqrt(alpha mu)) = {floor}"
                )))
            } else {
                Ok(((1.0 - alpha * mu) * momentum).sqrt())
            }
        }
        Algorithm::Dagt => Err(Error::InvalidArgument("the bound concerns the momentum methods".into())),
    }
}
