//! Parameter analysis: Jury criterion, error-system matrices, conservative
//! bounds, and exact rates for the quadratic instance.

mod bounds;
mod jury;
mod matrices;
mod quadratic;

pub use bounds::{conservative_bounds_hb, conservative_bounds_nes, witness, ConservativeBounds};
pub use jury::{jury_stable, JuryCondition, JuryVerdict};
pub use matrices::{
    build_p, build_p_printed, build_q, build_r, char_poly, char_poly_4x4, closed_form_coeffs_hb,
    closed_form_coeffs_nes, jury_of_matrix, region_member_hb, region_member_nes, ErrorSystemMatrix,
    MatrixInputs, MatrixKind,
};
pub use quadratic::{
    claimed_optimal_rate, full_matrix, claimed_radius_bound, optimal_params, quadratic_rates, reduced_matrix,
    reduced_radius_extremes, OptimalParams, QuadraticRates, REDUCED_IDENTITY_TOL,
};

use crate::problem::RegularityConstants;

/// Everything the analysis says about one parameter pair.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub matrix: ErrorSystemMatrix,
    pub coefficients: Vec<f64>,
    pub verdict: JuryVerdict,
    pub spectral_radius: f64,
    pub bounds: ConservativeBounds,
}

/// Heavy-ball report at `(alpha, beta)` with the default witness.
pub fn report_hb(c: &RegularityConstants, rho: f64, alpha: f64, beta: f64) -> crate::Result<StabilityReport> {
    let matrix = build_p(c, rho, alpha, beta);
    let verdict = jury_of_matrix(&matrix.entries)?;
    Ok(StabilityReport {
        coefficients: matrix.char_poly(),
        spectral_radius: matrix.spectral_radius(),
        bounds: conservative_bounds_hb(c, rho, 1.0, 1.0, Some(alpha)),
        matrix,
        verdict,
    })
}

/// Nesterov report at `(alpha, gamma)` with the default witness.
pub fn report_nes(c: &RegularityConstants, rho: f64, alpha: f64, gamma: f64) -> crate::Result<StabilityReport> {
    let matrix = build_q(c, rho, alpha, gamma);
    let verdict = jury_of_matrix(&matrix.entries)?;
    Ok(StabilityReport {
        coefficients: matrix.char_poly(),
        spectral_radius: matrix.spectral_radius(),
        bounds: conservative_bounds_nes(c, rho, 1.0, 1.0, Some(alpha)),
        matrix,
        verdict,
    })
}
