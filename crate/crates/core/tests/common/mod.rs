#![allow(dead_code)]

use fgs_core::scan::{sample_rng, sample_set};
use fgs_core::{FiniteGapSet, PeriodicJacobi};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    sample_rng(seed, 0)
}

pub fn random_set(rng: &mut ChaCha8Rng, n: usize, delta: f64) -> FiniteGapSet {
    sample_set(n, rng, delta).expect("separation floor is attainable")
}

pub fn random_jacobi(rng: &mut ChaCha8Rng, p: usize) -> PeriodicJacobi {
    let a = (0..p).map(|_| rng.gen_range(0.5..1.5)).collect();
    let b = (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect();
    PeriodicJacobi::new(a, b).unwrap()
}

pub fn random_dso(rng: &mut ChaCha8Rng, p: usize) -> PeriodicJacobi {
    PeriodicJacobi::dso((0..p).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

pub fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}
