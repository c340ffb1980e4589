use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::graph::CommGraph;

use super::state::SolverState;

/// Imperfect communication applied to the tracker exchange.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Perturbation {
    /// Every message arrives `steps` rounds late.
    Delay { steps: usize },
    /// i.i.d. `N(0, sigma^2)` noise on every received entry.
    Noise { sigma: f64, seed: u64 },
}

pub fn apply_perturbation(p: Perturbation) -> Channel {
    match p {
        Perturbation::Delay { steps } => Channel::new(steps, 0.0, 0),
        Perturbation::Noise { sigma, seed } => Channel::new(0, sigma, seed),
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Snapshot {
    pub u: Vec<f64>,
    pub s: Vec<f64>,
    pub phi: Vec<f64>,
    pub g2: Vec<f64>,
}

/// Delayed and/or noisy tracker exchange.
///
/// A delay of `d` rounds is modelled as a consistent snapshot: round `k`
/// mixes the trackers of round `k - d` and subtracts that round's local
/// increments, `u+ = A u_{k-d} + phi(y+) - phi(y_{k-d})`, which keeps the
/// tracker mean exact. Before `d` rounds have elapsed the oldest available
/// snapshot is used. Noise is added only to values received from neighbours.
#[derive(Debug, Clone)]
pub struct Channel {
    delay: usize,
    noise: Option<Normal<f64>>,
    rng: ChaCha8Rng,
    history: VecDeque<Snapshot>,
}

impl Channel {
    pub fn new(delay_steps: usize, noise_sigma: f64, seed: u64) -> Self {
        let noise = (noise_sigma > 0.0).then(|| Normal::new(0.0, noise_sigma).expect("finite sigma"));
        Channel {
            delay: delay_steps,
            noise,
            rng: ChaCha8Rng::seed_from_u64(seed),
            history: VecDeque::with_capacity(delay_steps + 1),
        }
    }

    pub fn delay_steps(&self) -> usize {
        self.delay
    }

    pub(crate) fn prime(&mut self, state: &SolverState) {
        if self.history.is_empty() {
            self.record(state);
        }
    }

    pub(crate) fn record(&mut self, state: &SolverState) {
        self.history.push_back(Snapshot {
            u: state.u.clone(),
            s: state.s.clone(),
            phi: state.phi.clone(),
            g2: state.g2.clone(),
        });
        while self.history.len() > self.delay + 1 {
            self.history.pop_front();
        }
    }

    pub(crate) fn source(&self) -> &Snapshot {
        self.history.front().expect("channel primed before use")
    }

    pub(crate) fn mix(&mut self, graph: &CommGraph, v: &[f64], block: usize, out: &mut [f64]) {
        let Some(noise) = self.noise else {
            graph.mix_into(v, block, out);
            return;
        };
        let w = graph.weights();
        let n = graph.n_agents();
        for i in 0..n {
            let dst = &mut out[i * block..(i + 1) * block];
            dst.iter_mut().for_each(|o| *o = 0.0);
            for j in 0..n {
                let a = w[(i, j)];
                if a == 0.0 {
                    continue;
                }
                for c in 0..block {
                    let mut val = v[j * block + c];
                    if j != i {
                        val += noise.sample(&mut self.rng);
                    }
                    dst[c] += a * val;
                }
            }
        }
    }
}
