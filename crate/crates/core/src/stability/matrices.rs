use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::linalg::spectral_radius;
use crate::problem::RegularityConstants;

use super::jury::{jury_stable, JuryVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// Heavy-ball error system.
    PHb,
    /// Nesterov error system.
    QNes,
    /// Relaxed Nesterov majorant.
    RNesRelaxed,
    /// Quadratic case, full block matrices.
    PD3,
    PH3,
    PN3,
    /// Quadratic case, optimization part only.
    PH4,
    PN4,
    /// `I - alpha C`, the DAGT counterpart of `PH4`/`PN4`.
    PD4,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixInputs {
    Constants {
        constants: RegularityConstants,
        rho: f64,
        alpha: f64,
        momentum: f64,
    },
    Quadratic {
        c: Vec<f64>,
        h: Vec<f64>,
        weights: DMatrix<f64>,
        alpha: f64,
        momentum: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSystemMatrix {
    pub kind: MatrixKind,
    pub entries: DMatrix<f64>,
    pub inputs: MatrixInputs,
}

impl ErrorSystemMatrix {
    pub fn spectral_radius(&self) -> f64 {
        spectral_radius(&self.entries)
    }

    /// Coefficients `a_0 .. a_{n-1}` of the monic `det(lambda I - M)`.
    pub fn char_poly(&self) -> Vec<f64> {
        char_poly(&self.entries)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|v| *v >= 0.0)
    }
}

/// Coefficients `a_0 .. a_{n-1}` of the monic characteristic polynomial
/// `det(lambda I - M)` via the Faddeev-LeVerrier recursion.
pub fn char_poly(m: &DMatrix<f64>) -> Vec<f64> {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.nrows();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut mk = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        mk = m * &mk;
        for i in 0..n {
            mk[(i, i)] += coeffs[n - k + 1];
        }
        coeffs[n - k] = -(m * &mk).trace() / k as f64;
    }
    coeffs.truncate(n);
    coeffs
}

/// [`char_poly`] for a 4x4 matrix.
pub fn char_poly_4x4(m: &DMatrix<f64>) -> Result<[f64; 4]> {
    check_dim(4, m.nrows())?;
    check_dim(4, m.ncols())?;
    let c = char_poly(m);
    Ok([c[0], c[1], c[2], c[3]])
}

/// Jury verdict on the characteristic polynomial of a square matrix.
pub fn jury_of_matrix(m: &DMatrix<f64>) -> Result<JuryVerdict> {
    let mut c = char_poly(m);
    c.push(1.0);
    jury_stable(&c)
}

fn constants_inputs(c: &RegularityConstants, rho: f64, alpha: f64, momentum: f64) -> MatrixInputs {
    MatrixInputs::Constants { constants: *c, rho, alpha, momentum }
}

/// Heavy-ball error-system matrix, rows ordered as
/// `||x - x*||`, `||x_k - x_{k-1}||`, `||u - K u||`, `||s - K s||`.
pub fn build_p(c: &RegularityConstants, rho: f64, alpha: f64, beta: f64) -> ErrorSystemMatrix {
    let (mu, l1, l2, l3) = (c.mu, c.l1, c.l2, c.l3);
    let a = alpha;
    #[rustfmt::skip]
    let entries = DMatrix::from_row_slice(4, 4, &[
        1.0 - mu * a, beta, a * l1, a * l3,
        a * l1 * (1.0 + l3), beta, a * l1, a * l3,
        a * l1 * l3 * (1.0 + l3), beta * l3, rho + a * l1 * l3, a * l3 * l3,
        a * l1 * l2 * (1.0 + l3).powi(2), beta * l2 * (1.0 + l3),
            a * l1 * l2 * (1.0 + l3) + 2.0 * l2, rho + a * l2 * l3 * (1.0 + l3),
    ]);
    ErrorSystemMatrix { kind: MatrixKind::PHb, entries, inputs: constants_inputs(c, rho, alpha, beta) }
}

/// [`build_p`] with `p41`, `p43` carrying `L3` where the derivation of the
/// fourth row gives `L2`, as typeset in the original statement.
pub fn build_p_printed(c: &RegularityConstants, rho: f64, alpha: f64, beta: f64) -> ErrorSystemMatrix {
    let mut m = build_p(c, rho, alpha, beta);
    let (l1, l3) = (c.l1, c.l3);
    m.entries[(3, 0)] = alpha * l1 * l3 * (1.0 + l3).powi(2);
    m.entries[(3, 2)] = alpha * l1 * l3 * (1.0 + l3) + 2.0 * c.l2;
    m
}

/// Nesterov error-system matrix.
pub fn build_q(c: &RegularityConstants, rho: f64, alpha: f64, gamma: f64) -> ErrorSystemMatrix {
    let (mu, l1, l2, l3) = (c.mu, c.l1, c.l2, c.l3);
    let (a, g) = (alpha, gamma);
    let e = 1.0 + a * l1 + a * l1 * l3;
    let inner = (1.0 + g) * e + 1.0;
    #[rustfmt::skip]
    let entries = DMatrix::from_row_slice(4, 4, &[
        1.0 - mu * a, (1.0 - mu * a) * g, a * l1, a * l3,
        a * l1 * (1.0 + l3), g * e, a * l1, a * l3,
        a * l1 * l3 * (1.0 + l3) * (g + 1.0), g * l3 * inner,
            rho + a * l1 * l3 * (g + 1.0), a * l3 * l3 * (g + 1.0),
        a * l1 * l2 * (1.0 + l3).powi(2) * (g + 1.0), g * l2 * (l3 + 1.0) * inner,
            a * l1 * l2 * (1.0 + l3) * (g + 1.0) + 2.0 * l2, rho + a * l2 * l3 * (1.0 + l3) * (1.0 + g),
    ]);
    ErrorSystemMatrix { kind: MatrixKind::QNes, entries, inputs: constants_inputs(c, rho, alpha, gamma) }
}

/// Relaxed Nesterov matrix; only defined for `alpha <= 1/L1` and
/// `gamma <= min(1/L2, 1/L3)`.
pub fn build_r(c: &RegularityConstants, rho: f64, alpha: f64, gamma: f64) -> Result<ErrorSystemMatrix> {
    let (mu, l1, l2, l3) = (c.mu, c.l1, c.l2, c.l3);
    let gamma_cap = (1.0 / l2).min(1.0 / l3);
    if alpha > 1.0 / l1 || gamma > gamma_cap {
        return Err(Error::OutOfValidityRegion(format!(
            "need alpha <= 1/L1 = {} and gamma <= {gamma_cap}; got alpha = {alpha}, gamma = {gamma}",
            1.0 / l1
        )));
    }
    let (a, g) = (alpha, gamma);
    #[rustfmt::skip]
    let entries = DMatrix::from_row_slice(4, 4, &[
        1.0 - mu * a, (1.0 - mu * a) * g, a * l1, a * l3,
        a * l1 * (1.0 + l3), g * (2.0 + l3), a * l1, a * l3,
        a * l1 * l3 * (2.0 + l3), g * (l3 * l3 + 4.0 * l3 + 2.0), rho + a * l1 * (l3 + 1.0), a * l3 * (l3 + 1.0),
        a * l1 * (1.0 + l2) * (1.0 + l3).powi(2), g * (l3 + 1.0) * (l2 * l3 + 2.0 * l2 + l3 + 1.0),
            a * l1 * (l2 + 1.0) * (1.0 + l3) + 2.0 * l2, rho + a * l2 * (1.0 + l3).powi(2),
    ]);
    Ok(ErrorSystemMatrix { kind: MatrixKind::RNesRelaxed, entries, inputs: constants_inputs(c, rho, alpha, gamma) })
}

/// Closed-form coefficients `a_0 .. a_3` of `det(lambda I - P)` as
/// typeset in the analysis; kept for cross-checking [`char_poly`].
pub fn closed_form_coeffs_hb(c: &RegularityConstants, rho: f64, alpha: f64, beta: f64) -> [f64; 4] {
    let (mu, l1, l2, l3) = (c.mu, c.l1, c.l2, c.l3);
    let (a, b) = (alpha, beta);
    let d1 = 1.0 - mu * a - a * l1 * (1.0 + l3);
    let d2 = l3 * (1.0 + l3) * (l2 - l3);
    let d3 = -2.0 * a * l2 + rho * (1.0 + l3);
    let a0 = b * d1 * rho * (rho + 2.0 * a * d2);
    let a1 = b * (-d1 * rho + (d1 + rho) * (-rho + 2.0 * a * d2)) + (mu * a - 1.0) * rho * (rho + a * d2)
        - a * l3 * d1 * (a * l1 * (rho + a * l3 * d2) + a * l3 * d3);
    let a2 = b * (d1 + 2.0 * rho + a * d2)
        + (1.0 - mu * a) * (2.0 * rho + a * d2)
        + rho * (rho + a * d2)
        + a * l3 * d1 * (l1 + l3 * (1.0 + l3))
        + l3 * (a * l1 * (rho + a * d2) + a * l3 * d3);
    let a3 = -b + (mu - 2.0) * a - 1.0 - a * l3 * (l2 * (1.0 + l3) + l1);
    [a0, a1, a2, a3]
}

/// Closed-form coefficients of `det(lambda I - Q)` as typeset; the
/// unexplained symbol in the `a_1` term `(1 + r)` is read as `gamma`.
pub fn closed_form_coeffs_nes(c: &RegularityConstants, rho: f64, alpha: f64, gamma: f64) -> [f64; 4] {
    let (mu, l1, l2, l3) = (c.mu, c.l1, c.l2, c.l3);
    let (a, g) = (alpha, gamma);
    let e1 = a * (mu + l1 * (1.0 + l3));
    let e2 = a * l2 * (rho * (1.0 + l3) - 2.0 * l3);
    let e3 = g * (1.0 + a * l1 + a * l1 * l3);
    let e4 = a * l2 * l3 * (1.0 + l3);
    let a0 = (e1 - 1.0) * (a * l3 * (rho * a * l1 - e2) + rho * rho * e3) + rho * rho * a * g * e1 * l1 * (1.0 + l3);
    let a1 = (e1 - 1.0) * (l3 * e2 * (1.0 + g) - e4 * g + rho * (2.0 * e3 + rho - a * l3 * l3))
        + g * l3 * (e2 + a * l3 * (e1 + rho * e1 - 1.0 - 2.0 * rho))
        - rho * rho * e3
        - a * l1 * (1.0 + l3) * rho * (2.0 * g * e1 + rho);
    let a2 = (1.0 + g) * l3 * e2
        + (e1 - 1.0) * ((1.0 + g) * e4 + 2.0 * rho + e3)
        + a * l1 * ((1.0 + l3) * (2.0 * rho + g * e1) + l3 * g + l3 * (1.0 + g) * (e1 - 1.0 - rho))
        - g * e4
        + rho * (2.0 * e3 + rho);
    let a3 = e1 - e2 - 1.0 - 2.0 * rho - (1.0 + g) * e4 - a * l1 * (l3 * (2.0 + g) + 1.0);
    [a0, a1, a2, a3]
}

/// Exact heavy-ball region: `alpha, beta > 0` and the Jury conditions hold
/// for `det(lambda I - P)`.
pub fn region_member_hb(c: &RegularityConstants, rho: f64, alpha: f64, beta: f64) -> bool {
    alpha > 0.0
        && beta > 0.0
        && jury_of_matrix(&build_p(c, rho, alpha, beta).entries).is_ok_and(|v| v.stable)
}

/// Exact Nesterov region on `det(lambda I - Q)`.
pub fn region_member_nes(c: &RegularityConstants, rho: f64, alpha: f64, gamma: f64) -> bool {
    alpha > 0.0
        && gamma > 0.0
        && jury_of_matrix(&build_q(c, rho, alpha, gamma).entries).is_ok_and(|v| v.stable)
}
