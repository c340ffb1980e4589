use std::fmt::Write;

use serde_json::json;

use aggsim_core::solver::Algorithm;
use aggsim_core::stability::{build_p, build_q, region_member_hb, region_member_nes};

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::setup::Experiment;
use crate::summary::{OutDir, Summary};

pub const REGION_HEADER: &str = "alpha,momentum,member,spectral_radius";
pub const REGION_FILE: &str = "region.csv";

/// Rasterizes the stability region of the configured momentum variant
/// (DAGT is treated as heavy-ball) on a `grid_points^2` grid over
/// `(0, alpha_max] x (0, momentum_max]`. Writes `region.csv`.
pub fn cmd_region(cfg: &ExperimentConfig, out: &mut OutDir, summary: &mut Summary) -> CliResult<()> {
    let exp = Experiment::build(cfg)?;
    let st = cfg.stability();
    let c = exp.constants;
    let rho = st.rho.unwrap_or_else(|| exp.graph.rho());
    let nes = cfg.algorithm()? == Algorithm::DagtNes;
    let alpha_max = st.alpha_max.unwrap_or(1.0 / c.l1);
    let momentum_max = st.momentum_max.unwrap_or(1.0);
    let n = st.grid_points;

    let mut csv = format!("{REGION_HEADER}\n");
    let mut members = 0usize;
    let mut stable = 0usize;
    for i in 1..=n {
        let alpha = alpha_max * i as f64 / n as f64;
        for j in 1..=n {
            let m = momentum_max * j as f64 / n as f64;
            let (member, radius) = if nes {
                (region_member_nes(&c, rho, alpha, m), build_q(&c, rho, alpha, m).spectral_radius())
            } else {
                (region_member_hb(&c, rho, alpha, m), build_p(&c, rho, alpha, m).spectral_radius())
            };
            members += member as usize;
            stable += (radius < 1.0) as usize;
            writeln!(csv, "{alpha:e},{m:e},{member},{radius:e}").unwrap();
        }
    }
    out.write(REGION_FILE, &csv)?;
    summary.results = json!({
        "variant": if nes { "nes" } else { "hb" },
        "rho": rho,
        "alpha_max": alpha_max,
        "momentum_max": momentum_max,
        "grid_points": n,
        "members": members,
        "stable_points": stable,
    });
    Ok(())
}
