use aggsim_core::linalg::spectral_radius;
use aggsim_core::problem::{make_quadratic, RegularityConstants};
use aggsim_core::solver::Algorithm;
use aggsim_core::stability::*;
use aggsim_core::Error;
use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

mod common;

/// Monic polynomial (ascending coefficients) with the given roots.
fn poly_from_roots(roots: &[Complex<f64>]) -> Vec<f64> {
    let mut c = vec![Complex::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex::new(0.0, 0.0); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * r;
        }
        c = next;
    }
    c.iter().map(|z| z.re).collect()
}

fn companion_radius(coeffs: &[f64]) -> f64 {
    let n = coeffs.len() - 1;
    let mut m = DMatrix::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / coeffs[n];
    }
    spectral_radius(&m)
}

fn random_modulus(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let r: f64 = rng.random_range(0.0..1.6);
        if (r - 1.0).abs() >= 1e-6 {
            return r;
        }
    }
}

/// Real polynomial of the given degree with roots in a disk/annulus.
fn random_real_poly(rng: &mut ChaCha8Rng, degree: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    while roots.len() < degree {
        if degree - roots.len() >= 2 && rng.random_bool(0.5) {
            let z = Complex::from_polar(random_modulus(rng), rng.random_range(0.0..std::f64::consts::PI));
            roots.push(z);
            roots.push(z.conj());
        } else {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            roots.push(Complex::new(sign * random_modulus(rng), 0.0));
        }
    }
    poly_from_roots(&roots)
}

fn random_constants(rng: &mut ChaCha8Rng) -> (RegularityConstants, f64) {
    let mu = rng.random_range(0.1..5.0);
    let l1 = mu * rng.random_range(1.0..20.0);
    let c = RegularityConstants::new(mu, l1, rng.random_range(0.0..3.0), rng.random_range(0.1..3.0)).unwrap();
    (c, rng.random_range(0.0..0.95))
}

#[test]
fn jury_agrees_with_companion_eigenvalues() {
    let mut rng = common::rng(10);
    for degree in [3, 4, 5, 6] {
        for _ in 0..400 {
            let a = random_real_poly(&mut rng, degree);
            let verdict = jury_stable(&a).unwrap();
            assert_eq!(verdict.stable, companion_radius(&a) < 1.0, "{a:?}");
            assert_eq!(verdict.stable, verdict.margin > 0.0);
        }
    }
}

#[test]
fn char_poly_roots_are_the_eigenvalues() {
    let mut rng = common::rng(11);
    for n in [3, 4, 6] {
        for _ in 0..50 {
            let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let mut coeffs = char_poly(&m);
            coeffs.push(1.0);
            let mut comp = DMatrix::zeros(n, n);
            for i in 1..n {
                comp[(i, i - 1)] = 1.0;
            }
            for i in 0..n {
                comp[(i, n - 1)] = -coeffs[i];
            }
            let key = |z: &Complex<f64>| (z.re, z.im);
            let mut ev: Vec<_> = m.complex_eigenvalues().iter().copied().collect();
            let mut roots: Vec<_> = comp.complex_eigenvalues().iter().copied().collect();
            ev.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
            roots.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
            for (a, b) in ev.iter().zip(&roots) {
                assert!((a - b).norm() < 1e-9, "{ev:?} vs {roots:?}");
            }
        }
    }
}

#[test]
fn error_matrices_match_retyped_entries() {
    let mut rng = common::rng(12);
    for _ in 0..100 {
        let (c, rho) = random_constants(&mut rng);
        let (mu, l1, l2, l3) = (c.mu, c.l1, c.l2, c.l3);
        let a = rng.random_range(0.0..1.0 / l1);
        let m = rng.random_range(0.0..1.0f64).min(1.0 / l3).min(if l2 > 0.0 { 1.0 / l2 } else { 1.0 });

        let p = build_p(&c, rho, a, m).entries;
        let s = 1.0 + l3;
        let expect_p = [
            [1.0 - mu * a, m, a * l1, a * l3],
            [a * l1 * s, m, a * l1, a * l3],
            [a * l1 * l3 * s, m * l3, rho + a * l1 * l3, a * l3 * l3],
            [a * l1 * l2 * s * s, m * l2 * s, a * l1 * l2 * s + 2.0 * l2, rho + a * l2 * l3 * s],
        ];
        let e = 1.0 + a * l1 + a * l1 * l3;
        let w = (1.0 + m) * e + 1.0;
        let q = build_q(&c, rho, a, m).entries;
        let expect_q = [
            [1.0 - mu * a, (1.0 - mu * a) * m, a * l1, a * l3],
            [a * l1 * s, m * e, a * l1, a * l3],
            [a * l1 * l3 * s * (m + 1.0), m * l3 * w, rho + a * l1 * l3 * (m + 1.0), a * l3 * l3 * (m + 1.0)],
            [
                a * l1 * l2 * s * s * (m + 1.0),
                m * l2 * s * w,
                a * l1 * l2 * s * (m + 1.0) + 2.0 * l2,
                rho + a * l2 * l3 * s * (1.0 + m),
            ],
        ];
        let r = build_r(&c, rho, a, m).unwrap().entries;
        let expect_r = [
            [1.0 - mu * a, (1.0 - mu * a) * m, a * l1, a * l3],
            [a * l1 * s, m * (2.0 + l3), a * l1, a * l3],
            [a * l1 * l3 * (2.0 + l3), m * (l3 * l3 + 4.0 * l3 + 2.0), rho + a * l1 * s, a * l3 * s],
            [
                a * l1 * (1.0 + l2) * s * s,
                m * s * (l2 * l3 + 2.0 * l2 + l3 + 1.0),
                a * l1 * (l2 + 1.0) * s + 2.0 * l2,
                rho + a * l2 * s * s,
            ],
        ];
        for (mat, expect) in [(&p, expect_p), (&q, expect_q), (&r, expect_r)] {
            for i in 0..4 {
                for j in 0..4 {
                    let x = expect[i][j];
                    assert!((mat[(i, j)] - x).abs() <= 1e-12 * x.abs().max(1.0), "({i},{j})");
                    assert!(mat[(i, j)] >= 0.0);
                }
            }
        }
    }
}

#[test]
fn relaxed_matrix_dominates_except_two_entries() {
    let mut rng = common::rng(13);
    for _ in 0..100 {
        let (c, rho) = random_constants(&mut rng);
        let cap = (1.0 / c.l3).min(if c.l2 > 0.0 { 1.0 / c.l2 } else { f64::INFINITY });
        let a = rng.random_range(0.0..1.0 / c.l1);
        let g = rng.random_range(0.0..cap);
        let q = build_q(&c, rho, a, g).entries;
        let r = build_r(&c, rho, a, g).unwrap().entries;
        for i in 0..4 {
            for j in 0..4 {
                if (i, j) == (2, 0) || (i, j) == (3, 1) {
                    continue;
                }
                assert!(r[(i, j)] >= q[(i, j)] * (1.0 - 1e-12), "({i},{j})");
            }
        }
    }
    // r31 < q31 as soon as gamma > 1/(1 + L3)
    let c = RegularityConstants::new(1.0, 2.0, 0.5, 1.0).unwrap();
    let q = build_q(&c, 0.3, 0.1, 0.8).entries;
    let r = build_r(&c, 0.3, 0.1, 0.8).unwrap().entries;
    assert!(r[(2, 0)] < q[(2, 0)]);
    // r42 < q42 for a large L2 and small L3
    let c = RegularityConstants::new(1.0, 2.0, 5.0, 0.1).unwrap();
    let q = build_q(&c, 0.3, 0.5, 0.2).entries;
    let r = build_r(&c, 0.3, 0.5, 0.2).unwrap().entries;
    assert!(r[(3, 1)] < q[(3, 1)]);
}

#[test]
fn region_membership_implies_contraction() {
    let mut rng = common::rng(14);
    let (mut hb, mut nes) = (0, 0);
    while hb < 500 || nes < 500 {
        let (c, rho) = random_constants(&mut rng);
        // log-uniform probes concentrate on the small region near the origin
        let a = 10f64.powf(rng.random_range(-4.0..0.3)) / c.l1;
        let m = 10f64.powf(rng.random_range(-4.0..0.0));
        if hb < 500 && region_member_hb(&c, rho, a, m) {
            assert!(build_p(&c, rho, a, m).spectral_radius() < 1.0);
            hb += 1;
        }
        if nes < 500 && region_member_nes(&c, rho, a, m) {
            assert!(build_q(&c, rho, a, m).spectral_radius() < 1.0);
            nes += 1;
        }
    }
}

#[test]
fn heavy_ball_box_points_contract_the_witness() {
    let mut rng = common::rng(15);
    for _ in 0..200 {
        let (c, rho) = random_constants(&mut rng);
        let b = conservative_bounds_hb(&c, rho, 1.0, 1.0, None);
        assert!(b.alpha_bar <= 1.0 / c.l1);
        assert!(b.alpha_bar > 0.0);
        let alpha = rng.random_range(0.0..1.0) * b.alpha_bar;
        let at = conservative_bounds_hb(&c, rho, 1.0, 1.0, Some(alpha));
        assert!(at.momentum_bar > 0.0);
        let beta = rng.random_range(0.0..1.0) * at.momentum_bar;
        let p = build_p(&c, rho, alpha, beta).entries;
        let z = DVector::from_row_slice(&at.witness);
        let pz = &p * &z;
        assert!(pz.iter().zip(z.iter()).all(|(l, r)| l < r));
        if alpha > 0.0 && beta > 0.0 {
            assert!(region_member_hb(&c, rho, alpha, beta));
        }
    }
}

#[test]
fn placement_constants_admit_the_preset_parameters() {
    let c = RegularityConstants::new(40.0, 42.0, 2.0, 1.0).unwrap();
    assert!(region_member_hb(&c, 0.0, 0.005, 0.009));
    assert!(region_member_nes(&c, 0.0, 0.005, 0.008));
    let b = conservative_bounds_hb(&c, 0.0, 1.0, 1.0, None);
    // same order of magnitude as alpha < 0.00639, beta < 0.00943
    assert!(b.alpha_bar > 0.000639 && b.alpha_bar < 0.0639);
}

#[test]
fn closed_form_coefficients_report() {
    // The typeset coefficient formulas are compared with the numeric
    // characteristic polynomial; the numeric one is authoritative.
    let mut rng = common::rng(16);
    let mut worst: [f64; 2] = [0.0; 2];
    for _ in 0..100 {
        let (c, rho) = random_constants(&mut rng);
        let a = rng.random_range(0.0..1.0 / c.l1);
        let m = rng.random_range(0.0..0.5);
        for (k, (closed, matrix)) in [
            (closed_form_coeffs_hb(&c, rho, a, m), build_p(&c, rho, a, m)),
            (closed_form_coeffs_nes(&c, rho, a, m), build_q(&c, rho, a, m)),
        ]
        .into_iter()
        .enumerate()
        {
            let numeric = char_poly_4x4(&matrix.entries).unwrap();
            // numeric coefficients reproduce the eigenvalues
            let mut full = numeric.to_vec();
            full.push(1.0);
            assert!((companion_radius(&full) - matrix.spectral_radius()).abs() < 1e-7);
            for (x, y) in closed.iter().zip(&numeric) {
                worst[k] = worst[k].max((x - y).abs());
            }
        }
    }
    println!("max |closed form - numeric| coefficient gap: P {:.3e}, Q {:.3e}", worst[0], worst[1]);
}

#[test]
fn trace_coefficient_of_p_is_minus_its_trace() {
    let c = RegularityConstants::new(40.0, 42.0, 2.0, 1.0).unwrap();
    let p = build_p(&c, 0.2, 0.005, 0.009);
    assert!((p.char_poly()[3] + p.entries.trace()).abs() < 1e-14);
}

#[test]
fn reduced_identity_on_random_instances() {
    let mut rng = common::rng(17);
    for _ in 0..20 {
        let n = rng.random_range(2..=20);
        let q = common::random_quadratic(&mut rng, n);
        let g = aggsim_core::graph::build_topology(
            aggsim_core::graph::TopologyKind::Random,
            n,
            Some(0.5),
            Some(rng.random()),
        )
        .unwrap();
        let l1 = q.c().iter().copied().fold(0.0, f64::max);
        let alpha = rng.random_range(0.1..1.9) / l1;
        let m = rng.random_range(0.0..0.9);
        for alg in Algorithm::ALL {
            let r = quadratic_rates(&q, &g, alpha, m, alg).unwrap();
            assert!(r.identity_gap <= REDUCED_IDENTITY_TOL, "{alg}: {}", r.identity_gap);
        }
    }
}

#[test]
fn claimed_rates_are_ordered_on_a_kappa_grid() {
    for i in 1..200 {
        let kappa = 4.0 / 3.0 + i as f64 * 0.5;
        let d = claimed_optimal_rate(Algorithm::Dagt, 1.0, kappa);
        let h = claimed_optimal_rate(Algorithm::DagtHb, 1.0, kappa);
        let n = claimed_optimal_rate(Algorithm::DagtNes, 1.0, kappa);
        assert!(n < h && h < d, "kappa {kappa}");
    }
}

#[test]
fn momentum_radii_at_optimal_tuning() {
    // The reduced radius at the closed-form tunings is sqrt(beta) for
    // heavy-ball and 1 - 2/sqrt(3k+1) for Nesterov.
    let mut rng = common::rng(18);
    for _ in 0..20 {
        let mu = rng.random_range(0.1..2.0);
        let l1 = mu * rng.random_range(1.5..100.0);
        let h = optimal_params(Algorithm::DagtHb, mu, l1).unwrap();
        let beta = h.momentum.unwrap();
        let rh = reduced_radius_extremes(Algorithm::DagtHb, mu, l1, h.alpha, beta);
        assert!((rh - beta.sqrt()).abs() < 1e-6);
        let n = optimal_params(Algorithm::DagtNes, mu, l1).unwrap();
        let rn = reduced_radius_extremes(Algorithm::DagtNes, mu, l1, n.alpha, n.momentum.unwrap());
        assert!((rn - (1.0 - 2.0 / (3.0 * l1 / mu + 1.0).sqrt())).abs() < 1e-6);
    }
}

#[test]
fn claimed_nesterov_radius_bound_counterexample() {
    // alpha = 0.2 lies in [1/L1, 1/mu] and gamma sits on its lower limit,
    // yet the reduced radius exceeds the claimed bound.
    let (mu, l1, alpha) = (1.0, 9.0, 0.2);
    let gamma = (1.0 - 0.2f64.sqrt()) / (1.0 + 0.2f64.sqrt());
    let bound = claimed_radius_bound(mu, l1, alpha, gamma, Algorithm::DagtNes).unwrap();
    let actual = reduced_radius_extremes(Algorithm::DagtNes, mu, l1, alpha, gamma);
    assert!((gamma - 0.38197).abs() < 1e-5);
    assert!((bound - (0.8 * gamma).sqrt()).abs() < 1e-15);
    assert!(actual > 1.3 && actual > bound);
    let q = make_quadratic(vec![mu, l1], vec![0.0; 2], vec![0.0; 2]).unwrap();
    let g = common::complete(2);
    let full = quadratic_rates(&q, &g, alpha, gamma, Algorithm::DagtNes).unwrap();
    assert!((full.reduced_radius - actual).abs() < 1e-12);
    assert!(matches!(
        claimed_radius_bound(mu, l1, 0.05, 0.5, Algorithm::DagtNes),
        Err(Error::OutOfValidityRegion(_))
    ));
}
