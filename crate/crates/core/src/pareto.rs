//! Bi-objective acquisition over `(mu, sigma)`.
//!
//! Candidates are ranked into non-dominated layers; arms are drawn uniformly
//! without replacement from the first layer, spilling into later layers only
//! when earlier ones are exhausted. Only comparisons between values are used,
//! so the result is unchanged by any strictly increasing rescaling of either
//! objective.

use std::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::Design;

/// `a` dominates `b` when it is at least as good in both objectives and
/// strictly better in one.
pub fn dominates(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 >= b.0 && a.1 >= b.1 && (a.0 > b.0 || a.1 > b.1)
}

/// Candidate designs with their surrogate mean and uncertainty.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePool {
    designs: Vec<Design>,
    mus: Vec<f64>,
    sigmas: Vec<f64>,
}

impl CandidatePool {
    pub fn new(designs: Vec<Design>, mus: Vec<f64>, sigmas: Vec<f64>) -> Result<Self> {
        if designs.len() != mus.len() || designs.len() != sigmas.len() {
            return Err(Error::RaggedPool);
        }
        if designs.is_empty() {
            return Err(Error::PoolTooSmall {
                requested: 1,
                available: 0,
            });
        }
        check_objectives(&mus, &sigmas)?;
        Ok(CandidatePool {
            designs,
            mus,
            sigmas,
        })
    }

    pub fn len(&self) -> usize {
        self.designs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.designs.is_empty()
    }

    pub fn designs(&self) -> &[Design] {
        &self.designs
    }

    pub fn mus(&self) -> &[f64] {
        &self.mus
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }
}

fn check_objectives(mus: &[f64], sigmas: &[f64]) -> Result<()> {
    if mus.len() != sigmas.len() {
        return Err(Error::RaggedPool);
    }
    if let Some(&bad) = mus.iter().chain(sigmas).find(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue(bad));
    }
    if let Some((index, &value)) = sigmas.iter().enumerate().find(|(_, s)| **s < 0.0) {
        return Err(Error::invalid(
            "sigmas",
            format!("entry {index} is negative ({value})"),
        ));
    }
    Ok(())
}

/// Successive non-dominated layers. Layer 0 is the Pareto front.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoPartition {
    layers: Vec<Vec<usize>>,
}

impl ParetoPartition {
    /// Each layer's indices in ascending order.
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn covered(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn into_layers(self) -> Vec<Vec<usize>> {
        self.layers
    }
}

/// Indices sorted by `mu` descending, then `sigma` descending, then index.
fn sorted_order(mus: &[f64], sigmas: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..mus.len()).collect();
    order.sort_by(|&a, &b| {
        desc(mus[a], mus[b])
            .then_with(|| desc(sigmas[a], sigmas[b]))
            .then(a.cmp(&b))
    });
    order
}

fn desc(a: f64, b: f64) -> Ordering {
    b.partial_cmp(&a).expect("objectives are finite")
}

/// Splits `remaining` (in sorted order) into its front and the rest, both in
/// sorted order.
///
/// Within a run of equal `mu`, only the entries at the run's largest `sigma`
/// can survive, and they do unless some strictly larger `mu` already reached
/// that `sigma`.
fn peel(remaining: &[usize], mus: &[f64], sigmas: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut front = Vec::new();
    let mut rest = Vec::new();
    let mut best_sigma = f64::NEG_INFINITY;
    let mut start = 0;
    while start < remaining.len() {
        let mu = mus[remaining[start]];
        let mut end = start + 1;
        while end < remaining.len() && mus[remaining[end]] == mu {
            end += 1;
        }
        // Sorted by sigma descending within the run.
        let top = sigmas[remaining[start]];
        let survives = top > best_sigma;
        for &i in &remaining[start..end] {
            if survives && sigmas[i] == top {
                front.push(i);
            } else {
                rest.push(i);
            }
        }
        best_sigma = best_sigma.max(top);
        start = end;
    }
    (front, rest)
}

/// Indices not dominated by any other point, ascending.
pub fn first_front(mus: &[f64], sigmas: &[f64]) -> Result<Vec<usize>> {
    check_objectives(mus, sigmas)?;
    let (mut front, _) = peel(&sorted_order(mus, sigmas), mus, sigmas);
    front.sort_unstable();
    Ok(front)
}

/// Peels fronts until at least `needed` points are covered.
pub fn pareto_partition(mus: &[f64], sigmas: &[f64], needed: usize) -> Result<ParetoPartition> {
    check_objectives(mus, sigmas)?;
    if needed > mus.len() {
        return Err(Error::PoolTooSmall {
            requested: needed,
            available: mus.len(),
        });
    }
    let mut remaining = sorted_order(mus, sigmas);
    let mut layers = Vec::new();
    let mut covered = 0;
    while covered < needed {
        let (front, rest) = peel(&remaining, mus, sigmas);
        covered += front.len();
        let mut layer = front;
        layer.sort_unstable();
        layers.push(layer);
        remaining = rest;
    }
    Ok(ParetoPartition { layers })
}

/// Draws `n_arms` distinct indices, uniformly without replacement within each
/// layer, exhausting layer `j` before touching layer `j + 1`. Returned in draw
/// order.
pub fn select_arm_indices(
    mus: &[f64],
    sigmas: &[f64],
    n_arms: usize,
    rng: &mut RngStream,
) -> Result<Vec<usize>> {
    let partition = pareto_partition(mus, sigmas, n_arms)?;
    let mut picked = Vec::with_capacity(n_arms);
    for mut layer in partition.into_layers() {
        let take = (n_arms - picked.len()).min(layer.len());
        // Partial Fisher-Yates: the first `take` slots become the draws.
        for slot in 0..take {
            let j = rng.random_range(slot..layer.len());
            layer.swap(slot, j);
        }
        picked.extend_from_slice(&layer[..take]);
        if picked.len() == n_arms {
            break;
        }
    }
    Ok(picked)
}

/// [`select_arm_indices`] over a pool, returning the chosen designs.
pub fn select_arms(pool: &CandidatePool, n_arms: usize, rng: &mut RngStream) -> Result<Vec<Design>> {
    let picked = select_arm_indices(&pool.mus, &pool.sigmas, n_arms, rng)?;
    Ok(picked.into_iter().map(|i| pool.designs[i].clone()).collect())
}

impl CandidatePool {
    pub fn first_front(&self) -> Vec<usize> {
        first_front(&self.mus, &self.sigmas).expect("pool objectives validated at construction")
    }

    pub fn partition(&self, needed: usize) -> Result<ParetoPartition> {
        pareto_partition(&self.mus, &self.sigmas, needed)
    }
}
