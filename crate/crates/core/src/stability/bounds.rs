use crate::problem::RegularityConstants;

/// Conservative parameter box derived from `M z < z` for a positive witness.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservativeBounds {
    pub alpha_bar: f64,
    /// Momentum bound evaluated at [`Self::alpha`].
    pub momentum_bar: f64,
    /// Step size at which the momentum terms were evaluated.
    pub alpha: f64,
    /// `z_1 .. z_4` (heavy-ball) or `t_1 .. t_4` (Nesterov).
    pub witness: [f64; 4],
    /// `J_1 .. J_5` or `Theta_1 .. Theta_5`.
    pub alpha_terms: Vec<f64>,
    /// `M_1 .. M_4` or `Gamma_1 .. Gamma_4`.
    pub momentum_terms: Vec<f64>,
}

/// Completes `(w2, w3)` to a full witness: `w4 = 3 L2 w3 / (1 - rho)`,
/// `w1 = (2 L1 w3 + L3 w4) / mu`. With `L2 = 0` the fourth row only asks
/// for `w4 > 0`, so `w4 = w3` is used.
pub fn witness(c: &RegularityConstants, rho: f64, w2: f64, w3: f64) -> [f64; 4] {
    let w4 = if c.l2 > 0.0 { 3.0 * c.l2 * w3 / (1.0 - rho) } else { w3 };
    let w1 = (2.0 * c.l1 * w3 + c.l3 * w4) / c.mu;
    [w1, w2, w3, w4]
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn hb_alpha_terms(c: &RegularityConstants, rho: f64, z: &[f64; 4]) -> Vec<f64> {
    let (l1, l2, l3) = (c.l1, c.l2, c.l3);
    let [z1, z2, z3, z4] = *z;
    let row2 = l1 * (1.0 + l3) * z1 + l1 * z3 + l3 * z4;
    vec![
        z2 / row2,
        (1.0 - rho) / (l1 * l3),
        (1.0 - rho) * z3 / (l1 * l3 * (1.0 + l3) * z1 + l1 * l3 * z3 + l3 * l3 * z4),
        (1.0 - rho) / (l2 * l3 * (1.0 + l3)),
        ((1.0 - rho) * z4 - 2.0 * l2 * z3) / (l2 * (1.0 + l3) * row2),
    ]
}

fn hb_momentum_terms(c: &RegularityConstants, rho: f64, z: &[f64; 4], alpha: f64) -> Vec<f64> {
    let (mu, l1, l2, l3) = (c.mu, c.l1, c.l2, c.l3);
    let [z1, z2, z3, z4] = *z;
    let a = alpha;
    vec![
        a * (mu * z1 - l1 * z3 - l3 * z4) / z2,
        (z2 - a * l1 * (1.0 + l3) * z1 - a * l1 * z3 - a * l3 * z4) / z2,
        ((1.0 - rho - a * l1 * l3) * z3 - a * l1 * l3 * (1.0 + l3) * z1 - a * l3 * l3 * z4) / (l3 * z2),
        ((1.0 - rho - a * l2 * l3 * (1.0 + l3)) * z4
            - a * l1 * l2 * (1.0 + l3).powi(2) * z1
            - (a * l1 * l2 * (1.0 + l3) + 2.0 * l2) * z3)
            / (l2 * (1.0 + l3) * z2),
    ]
}

fn nes_alpha_terms(c: &RegularityConstants, rho: f64, t: &[f64; 4]) -> Vec<f64> {
    let (l1, l2, l3) = (c.l1, c.l2, c.l3);
    let [t1, t2, t3, t4] = *t;
    vec![
        t2 / (l1 * (1.0 + l3) * t1 + l1 * t3 + l3 * t4),
        (1.0 - rho) / (l1 * (l3 + 1.0)),
        (1.0 - rho) * t3 / (l1 * l3 * (2.0 + l3) * t1 + l1 * (l3 + 1.0) * t3 + (l3 * l3 + l3) * t4),
        (1.0 - rho) / (l2 * l3 * (1.0 + l3)),
        ((1.0 - rho) * t4 - 2.0 * l2 * t3)
            / (l1 * (l2 + 1.0) * (1.0 + l3) * ((1.0 + l3) * t1 + t3) + l2 * (1.0 + l3).powi(2) * t4),
    ]
}

fn nes_momentum_terms(c: &RegularityConstants, rho: f64, t: &[f64; 4], alpha: f64) -> Vec<f64> {
    let (mu, l1, l2, l3) = (c.mu, c.l1, c.l2, c.l3);
    let [t1, t2, t3, t4] = *t;
    let a = alpha;
    vec![
        a * (mu * t1 - l1 * t3 - l3 * t4) / ((1.0 - mu * a) * t2),
        (t2 - a * l1 * (1.0 + l3) * t1 - a * l1 * t3 - a * l3 * t4) / ((2.0 + l3) * t2),
        ((1.0 - rho - a * l1 * (l3 + 1.0)) * t3 - a * l1 * l3 * (2.0 + l3) * t1 - a * l3 * (l3 + 1.0) * t4)
            / ((l3 * l3 + 4.0 * l3 + 2.0) * t2),
        ((1.0 - rho - a * l2 * (1.0 + l3).powi(2)) * t4
            - a * l1 * (l2 + 1.0) * (1.0 + l3).powi(2) * t1
            - (a * l1 * (l2 + 1.0) * (1.0 + l3) + 2.0 * l2) * t3)
            / (l2 * (1.0 + l3) * t2),
    ]
}

/// Heavy-ball box: `alpha_bar = min(J_1..J_5, 1/L1)` and
/// `beta_bar = min(M_1..M_4)` at `alpha` (default `alpha_bar / 2`).
pub fn conservative_bounds_hb(
    c: &RegularityConstants,
    rho: f64,
    z2: f64,
    z3: f64,
    alpha: Option<f64>,
) -> ConservativeBounds {
    let z = witness(c, rho, z2, z3);
    let alpha_terms = hb_alpha_terms(c, rho, &z);
    let alpha_bar = min_of(&alpha_terms).min(1.0 / c.l1);
    let alpha = alpha.unwrap_or(alpha_bar / 2.0);
    let momentum_terms = hb_momentum_terms(c, rho, &z, alpha);
    ConservativeBounds {
        alpha_bar,
        momentum_bar: min_of(&momentum_terms),
        alpha,
        witness: z,
        alpha_terms,
        momentum_terms,
    }
}

/// Nesterov box: `alpha_bar = min(Theta_1..Theta_5, 1/L1)` and
/// `gamma_bar = min(Gamma_1..Gamma_4, 1/L2, 1/L3)` at `alpha`.
pub fn conservative_bounds_nes(
    c: &RegularityConstants,
    rho: f64,
    t2: f64,
    t3: f64,
    alpha: Option<f64>,
) -> ConservativeBounds {
    let t = witness(c, rho, t2, t3);
    let alpha_terms = nes_alpha_terms(c, rho, &t);
    let alpha_bar = min_of(&alpha_terms).min(1.0 / c.l1);
    let alpha = alpha.unwrap_or(alpha_bar / 2.0);
    let momentum_terms = nes_momentum_terms(c, rho, &t, alpha);
    let momentum_bar = min_of(&momentum_terms).min(1.0 / c.l2).min(1.0 / c.l3);
    ConservativeBounds { alpha_bar, momentum_bar, alpha, witness: t, alpha_terms, momentum_terms }
}

impl ConservativeBounds {
    /// Whether the box `0 < alpha < alpha_bar`, `0 < momentum < momentum_bar`
    /// is non-empty at the evaluated step size.
    pub fn is_nonempty(&self) -> bool {
        self.alpha_bar > 0.0 && self.momentum_bar > 0.0 && self.alpha < self.alpha_bar
    }
}
