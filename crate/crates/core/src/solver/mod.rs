//! Gradient-tracking iterations DAGT, DAGT-HB and DAGT-NES.
//!
//! Every agent `i` keeps its state `x_i`, a tracker `u_i` of the aggregate
//! and a tracker `s_i` of the mean aggregate gradient. One synchronous round
//! of the heavy-ball variant is
//!
//! ```text
//! x+ = x - alpha (grad1 f(x, u) + grad phi(x) s) + beta (x - x_prev)
//! u+ = A u + phi(x+) - phi(x)
//! s+ = A s + grad2 f(x+, u+) - grad2 f(x, u)
//! ```
//!
//! The Nesterov variant evaluates everything at the extrapolated point
//! `y = x + gamma (x - x_prev)`. DAGT is heavy-ball with `beta = 0`.

mod comm;
mod run;
mod state;
mod trace;

pub use comm::{apply_perturbation, Channel, Perturbation};
pub use run::{run, run_observed};
pub use state::{init_state, step_hb, step_hb_with, step_nes, step_nes_with, tracking_gaps, SolverState};
pub use trace::{tail_rate, IterRecord, IterTrace, TRACE_HEADER};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dagt,
    DagtHb,
    DagtNes,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Dagt, Algorithm::DagtHb, Algorithm::DagtNes];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Dagt => "dagt",
            Algorithm::DagtHb => "dagt_hb",
            Algorithm::DagtNes => "dagt_nes",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "dagt" => Ok(Algorithm::Dagt),
            "dagt_hb" | "hb" => Ok(Algorithm::DagtHb),
            "dagt_nes" | "nes" => Ok(Algorithm::DagtNes),
            _ => Err(Error::InvalidArgument(format!(
                "unknown algorithm '{s}' (expected dagt, dagt_hb or dagt_nes)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub alpha: f64,
    /// Heavy-ball momentum; ignored by the other algorithms.
    pub beta: f64,
    /// Nesterov extrapolation; ignored by the other algorithms.
    pub gamma: f64,
    pub max_iter: usize,
    /// Stop once `||grad F(x_k)|| < tol`.
    pub tol: f64,
    pub delay_steps: usize,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm, alpha: f64) -> Self {
        SolverConfig {
            algorithm,
            alpha,
            beta: 0.0,
            gamma: 0.0,
            max_iter: 10_000,
            tol: 1e-6,
            delay_steps: 0,
            noise_sigma: 0.0,
            seed: 0,
        }
    }

    pub fn hb(alpha: f64, beta: f64) -> Self {
        SolverConfig { beta, ..Self::new(Algorithm::DagtHb, alpha) }
    }

    pub fn nes(alpha: f64, gamma: f64) -> Self {
        SolverConfig { gamma, ..Self::new(Algorithm::DagtNes, alpha) }
    }

    /// The momentum parameter the configured algorithm actually uses.
    pub fn momentum(&self) -> f64 {
        match self.algorithm {
            Algorithm::Dagt => 0.0,
            Algorithm::DagtHb => self.beta,
            Algorithm::DagtNes => self.gamma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be nonnegative, got {}", self.beta));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad(format!("gamma must be nonnegative, got {}", self.gamma));
        }
        if self.algorithm == Algorithm::Dagt && (self.beta != 0.0 || self.gamma != 0.0) {
            return bad("dagt takes no momentum: beta and gamma must be 0".into());
        }
        if !(self.tol >= 0.0) {
            return bad(format!("tol must be nonnegative, got {}", self.tol));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!("noise_sigma must be nonnegative, got {}", self.noise_sigma));
        }
        Ok(())
    }

    pub(crate) fn is_perturbed(&self) -> bool {
        self.delay_steps > 0 || self.noise_sigma > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("HB".parse::<Algorithm>().unwrap(), Algorithm::DagtHb);
        assert!("adam".parse::<Algorithm>().is_err());
    }

    #[test]
    fn dagt_rejects_momentum() {
        let mut c = SolverConfig::new(Algorithm::Dagt, 0.1);
        assert!(c.validate().is_ok());
        c.beta = 0.1;
        assert!(c.validate().is_err());
        assert!(SolverConfig::hb(0.1, 0.2).validate().is_ok());
        assert!(SolverConfig::nes(0.0, 0.2).validate().is_err());
        assert_eq!(SolverConfig::nes(0.1, 0.3).momentum(), 0.3);
    }
}
