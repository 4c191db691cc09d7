//! Single isotropic trust region around the incumbent.
//!
//! The box doubles after a run of successes, halves after a run of failures,
//! and signals a restart once it has shrunk below its minimum side.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::{Design, Observation};

pub const INITIAL_SIDE: f64 = 0.8;
pub const MAX_SIDE: f64 = 1.6;
/// `2^-7`.
pub const MIN_SIDE: f64 = 0.0078125;
pub const SUCCESS_TOLERANCE: usize = 3;

/// Consecutive failed batches before the side is halved:
/// `ceil(max(4, D) / arms_per_round)`.
pub fn failure_tolerance(dimension: usize, arms_per_round: usize) -> usize {
    dimension.max(4).div_ceil(arms_per_round.max(1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrustRegionState {
    side_length: f64,
    success_count: usize,
    failure_count: usize,
    failure_tolerance: usize,
    incumbent: Observation,
}

impl TrustRegionState {
    pub fn new(dimension: usize, arms_per_round: usize, incumbent: Observation) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        if arms_per_round == 0 {
            return Err(Error::invalid("arms_per_round", "must be at least 1"));
        }
        if incumbent.design.dim() != dimension {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: incumbent.design.dim(),
            });
        }
        Ok(TrustRegionState {
            side_length: INITIAL_SIDE,
            success_count: 0,
            failure_count: 0,
            failure_tolerance: failure_tolerance(dimension, arms_per_round),
            incumbent,
        })
    }

    pub fn side_length(&self) -> f64 {
        self.side_length
    }

    pub fn success_count(&self) -> usize {
        self.success_count
    }

    pub fn failure_count(&self) -> usize {
        self.failure_count
    }

    pub fn failure_tolerance(&self) -> usize {
        self.failure_tolerance
    }

    pub fn incumbent(&self) -> &Observation {
        &self.incumbent
    }

    pub fn incumbent_value(&self) -> f64 {
        self.incumbent.value
    }

    pub fn dimension(&self) -> usize {
        self.incumbent.design.dim()
    }

    /// Per-dimension `[center - L/2, center + L/2]` clipped to the unit cube.
    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let half = self.side_length / 2.0;
        self.incumbent
            .design
            .coords()
            .iter()
            .map(|&c| ((c - half).max(0.0), (c + half).min(1.0)))
            .unzip()
    }

    /// `n` designs drawn i.i.d. uniformly from [`bounds`](Self::bounds).
    pub fn sample_candidates(&self, n: usize, rng: &mut RngStream) -> Vec<Design> {
        let dim = self.dimension();
        self.sample_flat(n, rng)
            .chunks_exact(dim)
            .map(|row| Design::from_unchecked(row.to_vec()))
            .collect()
    }

    /// Same draws as [`sample_candidates`](Self::sample_candidates), row-major.
    pub fn sample_flat(&self, n: usize, rng: &mut RngStream) -> Vec<f64> {
        let (lower, upper) = self.bounds();
        let mut out = Vec::with_capacity(n * lower.len());
        for _ in 0..n {
            for (&lo, &hi) in lower.iter().zip(&upper) {
                let u: f64 = rng.random();
                out.push((lo + (hi - lo) * u).min(hi));
            }
        }
        out
    }

    /// Records the best observation of a batch.
    pub fn update(&mut self, batch_best: &Observation) -> Result<()> {
        if batch_best.design.dim() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: batch_best.design.dim(),
            });
        }
        if batch_best.value > self.incumbent.value {
            self.success_count += 1;
            self.failure_count = 0;
            self.incumbent = batch_best.clone();
        } else {
            self.failure_count += 1;
            self.success_count = 0;
        }
        if self.success_count >= SUCCESS_TOLERANCE {
            self.side_length = (2.0 * self.side_length).min(MAX_SIDE);
            self.success_count = 0;
        } else if self.failure_count >= self.failure_tolerance {
            self.side_length /= 2.0;
            self.failure_count = 0;
        }
        Ok(())
    }

    pub fn should_restart(&self) -> bool {
        self.side_length < MIN_SIDE
    }
}
