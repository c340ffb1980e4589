#![allow(dead_code)]

use aggsim_core::graph::{build_topology, CommGraph, TopologyKind};
use aggsim_core::problem::{make_placement, make_quadratic, CournotProblem, PlacementProblem, QuadraticProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ANCHORS: [[f64; 2]; 5] = [[10.0, 4.0], [1.0, 3.0], [2.0, 7.0], [8.0, 10.0], [3.0, 9.0]];
pub const PLACEMENT_X0: [f64; 10] = [2.0, 9.0, 8.0, 6.0, 7.0, 3.0, 4.0, 7.0, 8.0, 3.0];
pub const PLACEMENT_XM1: [f64; 10] = [0.0, 11.0, 9.0, 8.0, 9.0, 1.0, 1.0, 4.0, 3.0, 1.0];

pub fn placement() -> PlacementProblem {
    make_placement(ANCHORS.to_vec(), vec![20.0; 5]).unwrap()
}

pub fn cournot(n: usize, seed: u64) -> CournotProblem {
    CournotProblem::random(n, (0.5, 2.5), (10.0, 20.0), (5.0, 20.0), 200.0, 0.01, seed).unwrap()
}

pub fn random_quadratic(rng: &mut ChaCha8Rng, n: usize) -> QuadraticProblem {
    let c = (0..n).map(|_| rng.random_range(0.5..10.0)).collect();
    let h = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
    let l = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    make_quadratic(c, h, l).unwrap()
}

pub fn complete(n: usize) -> CommGraph {
    build_topology(TopologyKind::Complete, n, None, None).unwrap()
}

pub fn ring(n: usize) -> CommGraph {
    build_topology(TopologyKind::Ring, n, None, None).unwrap()
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
