use serde_json::json;

use aggsim_core::stability::{
    build_p, build_q, conservative_bounds_hb, conservative_bounds_nes, region_member_hb, region_member_nes,
    ConservativeBounds,
};

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::setup::Experiment;
use crate::summary::{OutDir, Summary};

fn bounds_json(b: &ConservativeBounds) -> serde_json::Value {
    json!({
        "alpha_bar": b.alpha_bar,
        "momentum_bar": b.momentum_bar,
        "alpha": b.alpha,
        "witness": b.witness,
        "alpha_terms": b.alpha_terms,
        "momentum_terms": b.momentum_terms,
        "nonempty": b.is_nonempty(),
    })
}

/// Conservative step-size and momentum bounds for both momentum variants,
/// plus the stability verdict at the configured parameters. Summary only.
pub fn cmd_bounds(cfg: &ExperimentConfig, _out: &mut OutDir, summary: &mut Summary) -> CliResult<()> {
    let exp = Experiment::build(cfg)?;
    let st = cfg.stability();
    let c = exp.constants;
    let rho = st.rho.unwrap_or_else(|| exp.graph.rho());
    let hb = conservative_bounds_hb(&c, rho, st.z2, st.z3, st.alpha);
    let nes = conservative_bounds_nes(&c, rho, st.z2, st.z3, st.alpha);
    let s = &cfg.solver;
    summary.results = json!({
        "constants": { "mu": c.mu, "l1": c.l1, "l2": c.l2, "l3": c.l3 },
        "rho": rho,
        "hb": bounds_json(&hb),
        "nes": bounds_json(&nes),
        "configured": {
            "alpha": s.alpha,
            "beta": s.beta,
            "gamma": s.gamma,
            "hb_member": region_member_hb(&c, rho, s.alpha, s.beta),
            "hb_spectral_radius": build_p(&c, rho, s.alpha, s.beta).spectral_radius(),
            "nes_member": region_member_nes(&c, rho, s.alpha, s.gamma),
            "nes_spectral_radius": build_q(&c, rho, s.alpha, s.gamma).spectral_radius(),
        },
    });
    Ok(())
}
