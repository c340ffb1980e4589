use std::fmt::Write;

use serde_json::json;

use super::run_on;
use crate::config::{parse_topology, ExperimentConfig};
use crate::error::CliResult;
use crate::setup::{build_graph, Experiment};
use crate::summary::{OutDir, Summary};

pub const TOPOLOGY_HEADER: &str = "topology,iter,residual_msq";
pub const TOPOLOGY_FILE: &str = "topology.csv";

/// Same problem and solver over each graph in `compare.topologies`
/// (default star, ring, complete). Writes `topology.csv`.
pub fn cmd_topology(cfg: &ExperimentConfig, out: &mut OutDir, summary: &mut Summary) -> CliResult<()> {
    let kinds = match &cfg.compare {
        Some(c) => c.topologies.clone(),
        None => vec!["star".into(), "ring".into(), "complete".into()],
    };
    let exp = Experiment::build(cfg)?;
    let sc = cfg.solver_config()?;
    let mut csv = format!("{TOPOLOGY_HEADER}\n");
    let mut rows = Vec::new();
    for name in &kinds {
        let kind = parse_topology(name, "compare.topologies")?;
        let graph = build_graph(cfg, kind)?;
        let trace = run_on(&exp, &graph, &sc)?;
        for r in &trace.records {
            writeln!(csv, "{name},{},{:e}", r.k, r.residual_msq).unwrap();
        }
        rows.push(json!({
            "topology": name,
            "rho": graph.rho(),
            "iterations": trace.iterations(),
            "converged": trace.converged,
        }));
    }
    out.write(TOPOLOGY_FILE, &csv)?;
    summary.results = json!({ "algorithm": sc.algorithm.as_str(), "topologies": rows });
    Ok(())
}
