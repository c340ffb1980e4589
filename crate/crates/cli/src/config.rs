//! Experiment configuration.
//!
//! Configs are TOML documents with one table per concern:
//!
//! ```toml
//! [problem]
//! kind = "quadratic"
//! c = [1.0, 3.0, 5.0]
//! h = [0.5, 1.0, 0.0]
//! l = [0.0, 0.0, 0.0]
//!
//! [topology]
//! kind = "ring"
//! n_agents = 3
//!
//! [solver]
//! algorithm = "dagt_hb"
//! alpha = 0.25
//! beta = 0.5
//! ```
//!
//! Dotted keys (`solver.alpha = 0.1` at top level) are equivalent. Unknown
//! keys are rejected so that typos surface with their location.

use serde::{Deserialize, Serialize};

use aggsim_core::graph::TopologyKind;
use aggsim_core::solver::{Algorithm, SolverConfig};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Command the config is meant for; the CLI subcommand must agree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<RunMode>,
    pub problem: ProblemSpec,
    #[serde(default)]
    pub init: InitSpec,
    pub topology: TopologySpec,
    pub solver: SolverSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub robustness: Option<RobustnessSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    Single,
    Sweep,
    TopologyCompare,
    Robustness,
    Bounds,
    Region,
    Rates,
}

impl RunMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RunMode::Single => "single",
            RunMode::Sweep => "sweep",
            RunMode::TopologyCompare => "topology_compare",
            RunMode::Robustness => "robustness",
            RunMode::Bounds => "bounds",
            RunMode::Region => "region",
            RunMode::Rates => "rates",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Placement,
    Cournot,
    Quadratic,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub kind: Option<ProblemKind>,
    // placement
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<f64>>,
    // cournot
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_agents: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    // quadratic
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<f64>>,
    // regularity constant overrides
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l3: Option<f64>,
}

/// Initial iterates: explicit stacked vectors, or uniform draws.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_minus1: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0_range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySpec {
    pub kind: String,
    pub n_agents: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub algorithm: String,
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub delay_steps: usize,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_max_iter() -> usize {
    10_000
}

fn default_tol() -> f64 {
    1e-6
}

/// Momentum values for `sweep`; the algorithm comes from `solver`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSpec {
    pub topologies: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobustnessSpec {
    pub delay_steps: usize,
    pub noise_sigma: f64,
    /// Iteration budget of the noisy runs (they never meet the tolerance).
    pub noise_iters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilitySpec {
    #[serde(default = "one")]
    pub z2: f64,
    #[serde(default = "one")]
    pub z3: f64,
    /// Step size at which the momentum bound is evaluated (default `alpha_bar / 2`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Overrides the graph's contraction factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum_max: Option<f64>,
    #[serde(default = "default_grid")]
    pub grid_points: usize,
}

fn one() -> f64 {
    1.0
}

fn default_grid() -> usize {
    41
}

impl Default for StabilitySpec {
    fn default() -> Self {
        StabilitySpec {
            z2: 1.0,
            z3: 1.0,
            alpha: None,
            rho: None,
            alpha_max: None,
            momentum_max: None,
            grid_points: default_grid(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn topology_kind(&self) -> CliResult<TopologyKind> {
        parse_topology(&self.topology.kind, "topology.kind")
    }

    pub fn algorithm(&self) -> CliResult<Algorithm> {
        self.solver
            .algorithm
            .parse()
            .map_err(|e: aggsim_core::Error| CliError::key("solver.algorithm", e.to_string()))
    }

    /// Solver settings in core form. DAGT drops any configured momentum.
    pub fn solver_config(&self) -> CliResult<SolverConfig> {
        let algorithm = self.algorithm()?;
        let s = &self.solver;
        let cfg = SolverConfig {
            algorithm,
            alpha: s.alpha,
            beta: if algorithm == Algorithm::DagtHb { s.beta } else { 0.0 },
            gamma: if algorithm == Algorithm::DagtNes { s.gamma } else { 0.0 },
            max_iter: s.max_iter,
            tol: s.tol,
            delay_steps: s.delay_steps,
            noise_sigma: s.noise_sigma,
            seed: s.seed,
        };
        cfg.validate().map_err(|e| CliError::key("solver", e.to_string()))?;
        Ok(cfg)
    }

    pub fn stability(&self) -> StabilitySpec {
        self.stability.clone().unwrap_or_default()
    }

    pub fn validate(&self) -> CliResult<()> {
        let kind = self.problem.kind.ok_or_else(|| CliError::key("problem.kind", "missing"))?;
        let need = |v: bool, key: &str| if v { Ok(()) } else { Err(CliError::key(key, "missing")) };
        match kind {
            ProblemKind::Placement => {
                need(self.problem.r.is_some(), "problem.r")?;
                need(self.problem.omega.is_some(), "problem.omega")?;
            }
            ProblemKind::Cournot => {
                need(self.problem.n_agents.is_some(), "problem.n_agents")?;
                for (v, k) in [
                    (self.problem.kappa_range.is_some(), "problem.kappa_range"),
                    (self.problem.theta_range.is_some(), "problem.theta_range"),
                    (self.problem.sigma_range.is_some(), "problem.sigma_range"),
                    (self.problem.omega1.is_some(), "problem.omega1"),
                    (self.problem.omega2.is_some(), "problem.omega2"),
                ] {
                    need(v, k)?;
                }
            }
            ProblemKind::Quadratic => {
                need(self.problem.c.is_some(), "problem.c")?;
                need(self.problem.h.is_some(), "problem.h")?;
                need(self.problem.l.is_some(), "problem.l")?;
            }
        }
        self.topology_kind()?;
        if self.topology.n_agents < 2 {
            return Err(CliError::key("topology.n_agents", "need at least 2 agents"));
        }
        if let Some(p) = self.topology.edge_prob {
            if !(p > 0.0 && p <= 1.0) {
                return Err(CliError::key("topology.edge_prob", format!("must lie in (0, 1], got {p}")));
            }
        }
        self.solver_config()?;
        if let Some(c) = &self.compare {
            for t in &c.topologies {
                parse_topology(t, "compare.topologies")?;
            }
        }
        if let Some(r) = &self.robustness {
            if !(r.noise_sigma >= 0.0) {
                return Err(CliError::key("robustness.noise_sigma", "must be nonnegative"));
            }
        }
        if let Some(s) = &self.stability {
            if !(s.z2 > 0.0 && s.z3 > 0.0) {
                return Err(CliError::key("stability.z2", "witness entries must be positive"));
            }
            if s.grid_points < 2 {
                return Err(CliError::key("stability.grid_points", "need at least 2 points"));
            }
        }
        Ok(())
    }
}

pub fn parse_topology(s: &str, key: &str) -> CliResult<TopologyKind> {
    s.parse().map_err(|e: aggsim_core::Error| CliError::key(key, e.to_string()))
}
