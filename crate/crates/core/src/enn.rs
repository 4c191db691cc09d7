//! Epistemic nearest neighbors.
//!
//! Each observation is treated as an independent estimate of the objective at
//! the query: its value is the mean and its squared distance to the query is
//! the variance. The `K` nearest estimates are combined by precision weighting:
//!
//! ```text
//! mu(x)     = sum_i y_i / d_i^2  /  sum_i 1 / d_i^2
//! sigma2(x) = 1 / sum_i 1 / d_i^2
//! ```
//!
//! Neighbors are found by an exact linear scan, so a query costs `O(N D)`
//! distance work plus `O(N log K)` bookkeeping and nothing is ever fitted.

use crate::error::{Error, Result};
use crate::types::{sq_dist, Dataset, Design, Estimate};

/// Neighbor count used by the reference configuration.
pub const DEFAULT_K: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    /// Position of the observation in its dataset.
    pub index: usize,
    pub sq_dist: f64,
    pub value: f64,
}

/// Nearest neighbors of a query, sorted by squared distance; ties keep the lower
/// dataset index first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NeighborSet {
    entries: Vec<Neighbor>,
    scanned: usize,
}

impl NeighborSet {
    pub fn entries(&self) -> &[Neighbor] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of dataset rows visited by the scan that built this set.
    pub fn scanned(&self) -> usize {
        self.scanned
    }

    pub fn indices(&self) -> Vec<usize> {
        self.entries.iter().map(|n| n.index).collect()
    }

    /// Builds a set from arbitrary neighbors, sorting them into canonical order.
    pub fn from_neighbors(mut entries: Vec<Neighbor>) -> Self {
        entries.sort_by(|a, b| a.sq_dist.total_cmp(&b.sq_dist).then(a.index.cmp(&b.index)));
        NeighborSet {
            scanned: entries.len(),
            entries,
        }
    }
}

fn check_query(ds: &Dataset, query: &[f64], k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("k", "neighbor count must be at least 1"));
    }
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if query.len() != ds.dimension() {
        return Err(Error::DimensionMismatch {
            expected: ds.dimension(),
            found: query.len(),
        });
    }
    Ok(())
}

/// The `min(k, N)` observations closest to `query`.
pub fn knn(ds: &Dataset, query: &Design, k: usize) -> Result<NeighborSet> {
    check_query(ds, query.coords(), k)?;
    let mut out = NeighborSet::default();
    scan(ds, query.coords(), k, &mut out);
    Ok(out)
}

/// One pass over the dataset keeping the best `k` in a sorted buffer.
fn scan(ds: &Dataset, query: &[f64], k: usize, out: &mut NeighborSet) {
    out.entries.clear();
    out.scanned = 0;
    let k = k.min(ds.len());
    for (index, (x, value)) in ds.iter().enumerate() {
        out.scanned += 1;
        let bound = if out.entries.len() == k {
            out.entries[k - 1].sq_dist
        } else {
            f64::INFINITY
        };
        let Some(sq_dist) = bounded_sq_dist(query, x, bound) else {
            continue;
        };
        // Insert after any equal distances so earlier rows win ties.
        let pos = out.entries.partition_point(|n| n.sq_dist <= sq_dist);
        if out.entries.len() == k {
            out.entries.pop();
        }
        out.entries.insert(
            pos,
            Neighbor {
                index,
                sq_dist,
                value,
            },
        );
    }
}

/// Squared distance if it is strictly below `bound`.
///
/// Partial sums only grow, so a row is dropped as soon as one clearly exceeds
/// the bound. The screening sum uses four accumulators for speed; rows that
/// survive get the sequential sum, so stored distances agree bit for bit with
/// [`crate::types::squared_distance`].
#[inline]
fn bounded_sq_dist(a: &[f64], b: &[f64], bound: f64) -> Option<f64> {
    // Far above the rounding gap between the two summation orders.
    let screen = bound * (1.0 + 1e-9);
    let mut acc = [0.0f64; 4];
    let mut ca = a.chunks_exact(8);
    let mut cb = b.chunks_exact(8);
    for (xa, xb) in (&mut ca).zip(&mut cb) {
        for j in 0..8 {
            let d = xa[j] - xb[j];
            acc[j % 4] += d * d;
        }
        if (acc[0] + acc[1]) + (acc[2] + acc[3]) > screen {
            return None;
        }
    }
    let mut fast = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (p, q) in ca.remainder().iter().zip(cb.remainder()) {
        let d = p - q;
        fast += d * d;
    }
    if fast > screen {
        return None;
    }
    let exact = sq_dist(a, b);
    (exact < bound).then_some(exact)
}

/// Precision-weighted combination of a neighbor set.
///
/// Neighbors at distance zero make the weights singular; when any are present
/// the estimate is their mean value with zero variance.
pub fn enn_estimate(nbrs: &NeighborSet) -> Result<Estimate> {
    let entries = nbrs.entries();
    let first = entries.first().ok_or(Error::EmptyNeighborSet)?;
    if first.sq_dist == 0.0 {
        return Ok(coincident_mean(entries, |n| n.sq_dist == 0.0));
    }
    let mut weight_sum = 0.0;
    let mut weighted = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for n in entries {
        let w = 1.0 / n.sq_dist;
        weight_sum += w;
        weighted += w * n.value;
        lo = lo.min(n.value);
        hi = hi.max(n.value);
    }
    if !weight_sum.is_finite() || !weighted.is_finite() {
        // Subnormal distances overflow the weights; fall back to the same limit
        // the exact-duplicate rule takes.
        return Ok(coincident_mean(entries, |n| (1.0 / n.sq_dist).is_infinite()));
    }
    // Rounding can carry either quotient one ulp past its exact bound.
    let mu = (weighted / weight_sum).clamp(lo, hi);
    let sigma2 = (1.0 / weight_sum).min(first.sq_dist);
    Ok(Estimate { mu, sigma2 })
}

fn coincident_mean(entries: &[Neighbor], pick: impl Fn(&Neighbor) -> bool) -> Estimate {
    let (sum, count) = entries
        .iter()
        .filter(|n| pick(n))
        .fold((0.0, 0usize), |(s, c), n| (s + n.value, c + 1));
    let values = entries.iter().filter(|n| pick(n)).map(|n| n.value);
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    Estimate {
        mu: (sum / count as f64).clamp(lo, hi),
        sigma2: 0.0,
    }
}

/// `enn_estimate(knn(ds, query, k))`.
pub fn query(ds: &Dataset, query: &Design, k: usize) -> Result<Estimate> {
    enn_estimate(&knn(ds, query, k)?)
}

/// Read-only view of a dataset answering many queries with one scratch buffer.
#[derive(Debug)]
pub struct EnnSurrogate<'a> {
    dataset: &'a Dataset,
    k: usize,
}

impl<'a> EnnSurrogate<'a> {
    pub fn new(dataset: &'a Dataset, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k", "neighbor count must be at least 1"));
        }
        if dataset.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(EnnSurrogate { dataset, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn estimate(&self, query: &[f64]) -> Result<Estimate> {
        check_query(self.dataset, query, self.k)?;
        let mut buf = NeighborSet::default();
        scan(self.dataset, query, self.k, &mut buf);
        enn_estimate(&buf)
    }

    /// Estimates for consecutive `dimension`-length rows of `flat`.
    pub fn estimate_rows(&self, flat: &[f64]) -> Result<Vec<Estimate>> {
        let dim = self.dataset.dimension();
        if flat.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: flat.len() % dim,
            });
        }
        let mut buf = NeighborSet {
            entries: Vec::with_capacity(self.k + 1),
            scanned: 0,
        };
        flat.chunks_exact(dim)
            .map(|row| {
                scan(self.dataset, row, self.k, &mut buf);
                enn_estimate(&buf)
            })
            .collect()
    }
}
