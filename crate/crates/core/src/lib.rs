//! Accelerated distributed aggregative optimization.
//!
//! Agents hold private states `x_i` and cooperate to minimize
//! `F(x) = sum_i f_i(x_i, u(x))` where `u(x) = (1/N) sum_i phi_i(x_i)` is an
//! aggregate no single agent can observe. The crate provides:
//!
//! - [`graph`]: symmetric doubly stochastic mixing matrices and their
//!   consensus contraction factor.
//! - [`problem`]: the aggregative problem interface plus the placement,
//!   Nash-Cournot and scalar quadratic instances.
//! - [`solver`]: the gradient-tracking iteration with heavy-ball or
//!   Nesterov momentum, optional delayed/noisy communication, and traces.
//! - [`stability`]: Jury criterion, error-system matrices, conservative
//!   parameter bounds and the quadratic-case spectral rates.
//! - [`oracle`]: centralized reference optimizer used for residuals.

pub mod error;
pub mod graph;
pub mod linalg;
pub mod oracle;
pub mod problem;
pub mod solver;
pub mod stability;

pub use error::{Error, Result};
pub use graph::{CommGraph, TopologyKind};
pub use problem::{AggregativeProblem, RegularityConstants};
pub use solver::{Algorithm, IterTrace, SolverConfig, SolverState};
