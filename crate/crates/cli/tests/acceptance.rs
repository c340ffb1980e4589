//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line (written
//! straight to stderr so it shows up even under output capture) and then
//! asserts the criterion.

use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aggsim::commands::{cmd_rates, cmd_robustness, cmd_run};
use aggsim::config::ExperimentConfig;
use aggsim::presets::{preset, PRESET_NAMES};
use aggsim::setup::Experiment;
use aggsim::summary::{OutDir, Summary};
use aggsim_core::problem::{aggregate, make_quadratic, AggregativeProblem, RegularityConstants};
use aggsim_core::solver::{run, run_observed, step_hb, step_nes, tracking_gaps, Algorithm, SolverConfig, SolverState};
use aggsim_core::stability::{
    build_p, build_q, conservative_bounds_hb, conservative_bounds_nes, jury_stable, claimed_radius_bound, optimal_params,
    quadratic_rates, reduced_radius_extremes, region_member_hb, region_member_nes,
};

fn report(n: u32, title: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    writeln!(err, "criterion {n:>2} {verdict}: {title} -- {detail}").unwrap();
    assert!(pass, "criterion {n} ({title}): {detail}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Spectral radius from nalgebra's general eigenvalues.
fn eig_radius(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn with_algorithm(cfg: &ExperimentConfig, algorithm: Algorithm) -> ExperimentConfig {
    let mut c = cfg.clone();
    c.solver.algorithm = algorithm.as_str().to_string();
    c
}

/// Preset solver settings for `algorithm`, momentum forced to `m` if given.
fn solver_for(cfg: &ExperimentConfig, algorithm: Algorithm, m: Option<f64>) -> SolverConfig {
    let mut sc = with_algorithm(cfg, algorithm).solver_config().unwrap();
    match (algorithm, m) {
        (Algorithm::DagtHb, Some(m)) => sc.beta = m,
        (Algorithm::DagtNes, Some(m)) => sc.gamma = m,
        _ => {}
    }
    sc
}

fn in_process(cfg: &ExperimentConfig, f: fn(&ExperimentConfig, &mut OutDir, &mut Summary) -> aggsim::CliResult<()>) -> (Summary, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let mut out = OutDir::create(dir.path()).unwrap();
    let mut summary = Summary::new("acceptance", "preset");
    f(cfg, &mut out, &mut summary).unwrap();
    (summary, dir)
}

#[test]
fn criterion_01_placement_reproduction() {
    const PRINTED: [[f64; 2]; 5] =
        [[9.7524, 4.1248], [1.810, 3.1714], [2.1333, 6.9810], [7.8416, 9.8381], [3.0857, 8.8857]];
    let start = Instant::now();
    let base = preset("placement-paper").unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for algorithm in [Algorithm::DagtHb, Algorithm::DagtNes] {
        let (summary, _dir) = in_process(&with_algorithm(&base, algorithm), cmd_run);
        let r = &summary.results;
        let converged = r["converged"].as_bool().unwrap();
        let x: Vec<f64> = serde_json::from_value(r["final_x"].clone()).unwrap();
        let u: Vec<f64> = serde_json::from_value(r["final_aggregate"].clone()).unwrap();
        let x_err = PRINTED
            .iter()
            .flatten()
            .zip(&x)
            .map(|(p, v)| (p - v).abs())
            .fold(0.0, f64::max);
        let u_err = (u[0] - 4.8).abs().max((u[1] - 6.6).abs());
        let tracker_gap = r["max_tracker_gap"].as_f64().unwrap();
        ok &= converged && x_err < 1e-3 && u_err + tracker_gap < 1e-6;
        detail.push(format!("{algorithm}: converged={converged} max|x-x_printed|={x_err:.3e} |u-u*|={u_err:.1e}"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(5);
    detail.push(format!("{:.2}s", elapsed.as_secs_f64()));
    report(1, "placement reproduction", ok, &detail.join("; "));
}

#[test]
fn criterion_02_tracking_conservation() {
    let mut worst = (0.0f64, 0.0f64);
    for name in PRESET_NAMES {
        let cfg = preset(name).unwrap();
        let exp = Experiment::build(&cfg).unwrap();
        for algorithm in Algorithm::ALL {
            let sc = solver_for(&cfg, algorithm, None);
            let p = exp.problem.as_ref();
            run_observed(p, &exp.graph, &sc, &exp.x0, exp.x_minus1(), None, &mut |st| {
                let (a, b) = tracking_gaps(st, p);
                worst = (worst.0.max(a), worst.1.max(b));
            })
            .unwrap();
        }
    }
    report(
        2,
        "tracking conservation",
        worst.0 <= 1e-9 && worst.1 <= 1e-9,
        &format!("max u gap {:.2e}, max s gap {:.2e}", worst.0, worst.1),
    );
}

#[test]
fn criterion_03_zero_momentum_equivalence() {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in PRESET_NAMES {
        let cfg = preset(name).unwrap();
        let exp = Experiment::build(&cfg).unwrap();
        let csv: Vec<String> = [(Algorithm::Dagt, None), (Algorithm::DagtHb, Some(0.0)), (Algorithm::DagtNes, Some(0.0))]
            .into_iter()
            .map(|(a, m)| {
                let sc = solver_for(&cfg, a, m);
                run(exp.problem.as_ref(), &exp.graph, &sc, &exp.x0, exp.x_minus1(), Some(&exp.oracle))
                    .unwrap()
                    .to_csv()
            })
            .collect();
        let same = csv[0] == csv[1] && csv[0] == csv[2];
        ok &= same;
        detail.push(format!("{name}: {}", if same { "identical" } else { "differs" }));
    }
    report(3, "zero-momentum equivalence", ok, &detail.join(", "));
}

/// Oracle point with every tracker at its consensus value.
fn consensus_state(p: &dyn AggregativeProblem, x_star: &[f64]) -> SolverState {
    let (n, d) = (p.n_agents(), p.agg_dim());
    let layout = p.layout();
    let u = aggregate(p, x_star).unwrap();
    let mut s = vec![0.0; d];
    let mut g = vec![0.0; d];
    for i in 0..n {
        p.grad_aggregate(i, &x_star[layout.range(i)], &u, &mut g);
        s.iter_mut().zip(&g).for_each(|(a, b)| *a += b / n as f64);
    }
    let tile = |v: &[f64]| v.iter().copied().cycle().take(n * d).collect::<Vec<_>>();
    SolverState::from_parts(p, x_star.to_vec(), x_star.to_vec(), tile(&u), tile(&s)).unwrap()
}

#[test]
fn criterion_04_fixed_point_stationarity() {
    let mut worst = 0.0f64;
    for name in PRESET_NAMES {
        let cfg = preset(name).unwrap();
        let exp = Experiment::build(&cfg).unwrap();
        let p = exp.problem.as_ref();
        for algorithm in Algorithm::ALL {
            let sc = solver_for(&cfg, algorithm, None);
            let mut st = consensus_state(p, &exp.oracle.x_star);
            let mut moved = 0.0;
            for _ in 0..1000 {
                let before = st.x.clone();
                match algorithm {
                    Algorithm::DagtNes => step_nes(&mut st, p, &exp.graph, sc.alpha, sc.gamma),
                    _ => step_hb(&mut st, p, &exp.graph, sc.alpha, sc.beta),
                }
                moved += st.x.iter().zip(&before).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            }
            worst = worst.max(moved);
        }
    }
    report(4, "fixed-point stationarity", worst <= 1e-9, &format!("max total movement {worst:.2e}"));
}

/// Ascending coefficients of the monic polynomial with the given roots.
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

fn companion(coeffs: &[f64]) -> DMatrix<f64> {
    let n = coeffs.len() - 1;
    DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -coeffs[i] / coeffs[n]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    })
}

#[test]
fn criterion_05_jury_correctness() {
    let mut r = rng(5);
    let modulus = |r: &mut ChaCha8Rng| loop {
        let m: f64 = r.random_range(0.0..1.6);
        if (m - 1.0).abs() >= 1e-6 {
            return m;
        }
    };
    let polys: Vec<Vec<f64>> = (0..1000)
        .map(|_| {
            let mut roots = Vec::new();
            while roots.len() < 4 {
                if roots.len() <= 2 && r.random_bool(0.5) {
                    let z = Complex::from_polar(modulus(&mut r), r.random_range(0.0..std::f64::consts::PI));
                    roots.extend([z, z.conj()]);
                } else {
                    let sign = if r.random_bool(0.5) { 1.0 } else { -1.0 };
                    roots.push(Complex::new(sign * modulus(&mut r), 0.0));
                }
            }
            poly_from_roots(&roots)
        })
        .collect();
    let start = Instant::now();
    let agree = polys
        .iter()
        .filter(|a| jury_stable(a).unwrap().stable == (eig_radius(&companion(a)) < 1.0))
        .count();
    let elapsed = start.elapsed();
    report(
        5,
        "Jury correctness",
        agree == 1000 && elapsed < Duration::from_secs(1),
        &format!("{agree}/1000 agree with companion eigenvalues in {:.3}s", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_06_quadratic_rate_formulas() {
    let mut r = rng(6);
    let (mut hb_err, mut nes_err) = (0.0f64, 0.0f64);
    let mut order_violations = Vec::new();
    for _ in 0..20 {
        let mu = r.random_range(0.1..2.0);
        let l1 = mu * r.random_range(1.5..100.0);
        let kappa = l1 / mu;
        let radius = |a: Algorithm| {
            let p = optimal_params(a, mu, l1).unwrap();
            reduced_radius_extremes(a, mu, l1, p.alpha, p.momentum.unwrap_or(0.0))
        };
        let (rd, rh, rn) = (radius(Algorithm::Dagt), radius(Algorithm::DagtHb), radius(Algorithm::DagtNes));
        let (sl, sm) = (l1.sqrt(), mu.sqrt());
        hb_err = hb_err.max((rh - (sl - sm) / (sl + sm)).abs());
        let q = (3.0 * kappa + 1.0).sqrt();
        nes_err = nes_err.max((rn - (q - 2.0) / (q + 2.0)).abs());
        if kappa > 2.0 && !(rn < rh && rh < rd) {
            order_violations.push(format!("{kappa:.2}"));
        }
    }
    report(
        6,
        "quadratic rate formulas",
        hb_err <= 1e-9 && nes_err <= 1e-9 && order_violations.is_empty(),
        &format!(
            "max |rho(P_H4) - formula| = {hb_err:.3e}, max |rho(P_N4) - formula| = {nes_err:.3e}, ordering fails at kappa {:?}",
            order_violations
        ),
    );
}

/// `||W - 11^T/N||_2` by SVD.
fn graph_rho(w: &DMatrix<f64>) -> f64 {
    let n = w.nrows();
    let centered = w - DMatrix::from_element(n, n, 1.0 / n as f64);
    centered.singular_values().max()
}

#[test]
fn criterion_07_reduced_matrix_identity() {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = r.random_range(2..=20);
        let c: Vec<f64> = (0..n).map(|_| r.random_range(0.5..10.0)).collect();
        let h: Vec<f64> = (0..n).map(|_| r.random_range(0.0..2.0)).collect();
        let l: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let l1 = c.iter().copied().fold(0.0, f64::max);
        let qp = make_quadratic(c, h, l).unwrap();
        let g = aggsim_core::graph::build_topology(
            aggsim_core::graph::TopologyKind::Random,
            n,
            Some(0.5),
            Some(r.random()),
        )
        .unwrap();
        let alpha = r.random_range(0.1..1.9) / l1;
        let m = r.random_range(0.0..0.9);
        let rho = graph_rho(g.weights());
        for algorithm in Algorithm::ALL {
            let rates = quadratic_rates(&qp, &g, alpha, m, algorithm).unwrap();
            let full = eig_radius(&rates.matrix.entries);
            let reduced = eig_radius(&aggsim_core::stability::reduced_matrix(&qp, &g, alpha, m, algorithm).entries);
            worst = worst.max((full - rho.max(reduced)).abs());
        }
    }
    report(7, "reduced-matrix identity", worst <= 1e-9, &format!("max gap {worst:.3e}"));
}

#[test]
fn criterion_08_measured_vs_predicted_rate() {
    let cfg = preset("quadratic-demo").unwrap();
    let exp = Experiment::build(&cfg).unwrap();
    let c = exp.constants;
    let threshold = (c.l1 - c.mu) / (c.l1 + c.mu);
    let start = Instant::now();
    let (summary, _dir) = in_process(&cfg, cmd_rates);
    let elapsed = start.elapsed();
    let mut ok = exp.graph.rho() <= threshold && elapsed < Duration::from_secs(10);
    let mut detail = vec![format!("rho_graph {:.4} <= {threshold:.4}", exp.graph.rho())];
    for row in summary.results["algorithms"].as_array().unwrap() {
        let rel = row["relative_error"].as_f64().unwrap_or(f64::INFINITY);
        ok &= rel < 0.05;
        detail.push(format!(
            "{}: measured {:.5} predicted {:.5} rel {rel:.2e}",
            row["algorithm"].as_str().unwrap(),
            row["measured_rate"].as_f64().unwrap_or(f64::NAN),
            row["predicted_rate"].as_f64().unwrap(),
        ));
    }
    detail.push(format!("{:.2}s", elapsed.as_secs_f64()));
    report(8, "measured vs predicted rate", ok, &detail.join("; "));
}

fn random_constants(r: &mut ChaCha8Rng) -> (RegularityConstants, f64) {
    let mu = r.random_range(0.1..5.0);
    let l1 = mu * r.random_range(1.0..20.0);
    let c = RegularityConstants::new(mu, l1, r.random_range(0.0..3.0), r.random_range(0.1..3.0)).unwrap();
    (c, r.random_range(0.0..0.95))
}

#[test]
fn criterion_09_region_soundness() {
    let mut r = rng(9);
    // members sampled log-uniformly, checked by eigenvalues
    let (mut hb, mut nes, mut hb_bad, mut nes_bad) = (0, 0, 0, 0);
    while hb < 500 || nes < 500 {
        let (c, rho) = random_constants(&mut r);
        let a = 10f64.powf(r.random_range(-4.0..0.3)) / c.l1;
        let m = 10f64.powf(r.random_range(-4.0..0.0));
        if hb < 500 && region_member_hb(&c, rho, a, m) {
            hb += 1;
            hb_bad += (eig_radius(&build_p(&c, rho, a, m).entries) >= 1.0) as usize;
        }
        if nes < 500 && region_member_nes(&c, rho, a, m) {
            nes += 1;
            nes_bad += (eig_radius(&build_q(&c, rho, a, m).entries) >= 1.0) as usize;
        }
    }
    // conservative box points
    let (mut hb_out, mut nes_out) = (0, 0);
    for _ in 0..500 {
        let (c, rho) = random_constants(&mut r);
        let bar = conservative_bounds_hb(&c, rho, 1.0, 1.0, None).alpha_bar;
        let a = r.random_range(0.0..1.0) * bar;
        let beta = r.random_range(0.0..1.0) * conservative_bounds_hb(&c, rho, 1.0, 1.0, Some(a)).momentum_bar;
        hb_out += (a > 0.0 && beta > 0.0 && !region_member_hb(&c, rho, a, beta)) as usize;

        let bar = conservative_bounds_nes(&c, rho, 1.0, 1.0, None).alpha_bar;
        let a = r.random_range(0.0..1.0) * bar;
        let gamma = r.random_range(0.0..1.0) * conservative_bounds_nes(&c, rho, 1.0, 1.0, Some(a)).momentum_bar;
        nes_out += (a > 0.0 && gamma > 0.0 && !region_member_nes(&c, rho, a, gamma)) as usize;
    }
    report(
        9,
        "region soundness",
        hb_bad + nes_bad + hb_out + nes_out == 0,
        &format!(
            "unstable members hb {hb_bad}/500 nes {nes_bad}/500; box points outside region hb {hb_out}/500 nes {nes_out}/500"
        ),
    );
}

#[test]
fn criterion_10_radius_bound_domination() {
    let mut r = rng(10);
    let (mut hb_n, mut nes_n, mut hb_viol, mut nes_viol) = (0, 0, 0, 0);
    while hb_n < 100 || nes_n < 100 {
        let mu = r.random_range(0.1..2.0);
        let l1 = mu * r.random_range(1.5..50.0);
        let alpha = r.random_range(0.01..1.0) / mu;
        let m = r.random_range(0.0..1.0);
        if hb_n < 100 {
            if let Ok(bound) = claimed_radius_bound(mu, l1, alpha, m, Algorithm::DagtHb) {
                hb_n += 1;
                hb_viol += (reduced_radius_extremes(Algorithm::DagtHb, mu, l1, alpha, m) > bound) as usize;
            }
        }
        if nes_n < 100 {
            if let Ok(bound) = claimed_radius_bound(mu, l1, alpha, m, Algorithm::DagtNes) {
                nes_n += 1;
                nes_viol += (reduced_radius_extremes(Algorithm::DagtNes, mu, l1, alpha, m) > bound) as usize;
            }
        }
    }
    report(
        10,
        "claimed radius-bound domination",
        hb_viol + nes_viol == 0,
        &format!("violations: rho(P_H4) > beta {hb_viol}/100, rho(P_N4) > sqrt((1-alpha mu) gamma) {nes_viol}/100"),
    );
}

#[test]
fn criterion_11_robustness() {
    let cfg = preset("cournot-paper").unwrap();
    let spec = cfg.robustness.clone().unwrap();
    let (summary, _dir) = in_process(&cfg, cmd_robustness);
    let runs = summary.results["runs"].as_array().unwrap();
    let find = |scenario: &str, algorithm: Algorithm| {
        runs.iter()
            .find(|r| r["scenario"] == scenario && r["algorithm"] == algorithm.as_str())
            .unwrap()
    };
    let iters = |a| find("delay", a)["iterations"].as_u64().unwrap();
    let delay_ok = Algorithm::ALL.iter().all(|&a| {
        let r = find("delay", a);
        r["converged"] == true && r["final_grad_norm"].as_f64().unwrap() < 1e-6
    });
    let faster = iters(Algorithm::DagtHb) < iters(Algorithm::Dagt) && iters(Algorithm::DagtNes) < iters(Algorithm::Dagt);
    let noise_ok = spec.noise_sigma > 0.0
        && spec.noise_iters >= 10_000
        && Algorithm::ALL.iter().all(|&a| {
            let r = find("noise", a);
            r["diverged"] == false && r["iterations"].as_u64() == Some(spec.noise_iters as u64)
                && r["max_residual"].as_f64().is_some_and(f64::is_finite)
        });
    let floors: Vec<String> = Algorithm::ALL
        .iter()
        .map(|&a| format!("{:.2e}", find("noise", a)["residual_floor"].as_f64().unwrap_or(f64::NAN)))
        .collect();
    report(
        11,
        "robustness",
        delay_ok && faster && noise_ok,
        &format!(
            "delay {} iterations dagt/hb/nes = {}/{}/{}; noise sigma {} floors {:?}",
            spec.delay_steps,
            iters(Algorithm::Dagt),
            iters(Algorithm::DagtHb),
            iters(Algorithm::DagtNes),
            spec.noise_sigma,
            floors
        ),
    );
}

#[test]
fn criterion_12_determinism() {
    let bin = env!("CARGO_BIN_EXE_aggsim");
    let invocations: [(&str, &str); 6] = [
        ("run", "placement-paper"),
        ("run", "cournot-paper"),
        ("run", "quadratic-demo"),
        ("rates", "quadratic-demo"),
        ("region", "placement-paper"),
        ("robustness", "cournot-paper"),
    ];
    let mut mismatches = Vec::new();
    let mut files = 0;
    for (cmd, name) in invocations {
        let dirs: Vec<_> = (0..2)
            .map(|_| {
                let d = tempfile::tempdir().unwrap();
                let status = std::process::Command::new(bin)
                    .args([cmd, "--preset", name, "--out"])
                    .arg(d.path())
                    .stdout(std::process::Stdio::null())
                    .status()
                    .unwrap();
                assert!(status.success(), "{cmd} {name}: {status}");
                d
            })
            .collect();
        let mut csvs: Vec<_> = std::fs::read_dir(dirs[0].path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .filter(|f| f.to_string_lossy().ends_with(".csv"))
            .collect();
        csvs.sort();
        for f in csvs {
            files += 1;
            let a = std::fs::read(dirs[0].path().join(&f)).unwrap();
            let b = std::fs::read(dirs[1].path().join(&f)).unwrap();
            if a != b {
                mismatches.push(format!("{cmd} {name} {}", f.to_string_lossy()));
            }
        }
    }
    report(
        12,
        "determinism",
        mismatches.is_empty() && files > 0,
        &format!("{files} CSV files compared, mismatches {mismatches:?}"),
    );
}
