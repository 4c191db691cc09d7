//! Shared fixtures for the benchmarks.

use ennbo_core::functions::{evaluate, Distortion, Sphere};
use ennbo_core::optimizer::{Method, MethodSpec};
use ennbo_core::{Dataset, Design, Observation, Optimizer, RngStream};
use rand::Rng;

/// `n` uniform observations in `[0, 1]^dim` with uniform values.
pub fn random_dataset(n: usize, dim: usize, seed: u64) -> Dataset {
    let mut rng = RngStream::new(seed, 0);
    let mut ds = Dataset::new(dim).expect("dim > 0");
    for _ in 0..n {
        let x = Design::new((0..dim).map(|_| rng.random()).collect()).expect("unit cube");
        ds.push(Observation::new(x, rng.random()).expect("finite"))
            .expect("matching dimension");
    }
    ds
}

/// `n` row-major query points.
pub fn random_rows(n: usize, dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = RngStream::new(seed, 1);
    (0..n * dim).map(|_| rng.random()).collect()
}

/// Anti-correlated objectives, which produce wide fronts.
pub fn random_objectives(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = RngStream::new(seed, 2);
    let mus: Vec<f64> = (0..n).map(|_| rng.random()).collect();
    let sigmas = mus.iter().map(|m| 1.0 - m + 0.2 * rng.random::<f64>()).collect();
    (mus, sigmas)
}

/// An optimizer that has observed at least `n` points of a distorted sphere.
pub fn warmed_optimizer(method: &str, dim: usize, n: usize, seed: u64) -> Optimizer {
    let method: Method = method.parse().expect("known method");
    let spec = MethodSpec::new(method, 10, 2 * dim).expect("valid spec");
    let mut opt = Optimizer::new(spec, dim, RngStream::new(seed, 3)).expect("valid optimizer");
    let dist = Distortion::centered(dim);
    while opt.dataset().len() < n {
        let p = opt.ask().expect("proposal");
        let ys: Vec<f64> = p
            .arms
            .iter()
            .map(|x| evaluate(&Sphere, &dist, x).expect("in domain"))
            .collect();
        opt.tell(&p.arms, &ys).expect("tell");
    }
    opt
}
