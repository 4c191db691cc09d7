//! Proposal-time summaries.

use std::collections::BTreeMap;

use super::{RoundRecord, RunTrace};

#[derive(Debug, Clone, PartialEq)]
pub struct MethodTiming {
    pub method: String,
    pub replications: usize,
    /// Rounds across all replications.
    pub rounds: usize,
    pub mean_round_ns: f64,
    /// Sum over every round of every replication.
    pub cumulative_ns: u128,
    /// Mean over replications of each run's total.
    pub mean_run_total_ns: f64,
    /// Least-squares slope of `ln(mean time)` against `ln(N)`, over
    /// surrogate-phase rounds. `None` when undefined.
    pub loglog_slope: Option<f64>,
}

/// Mean proposal time for each dataset size seen outside initialization.
pub fn mean_time_by_size<'a>(rounds: impl IntoIterator<Item = &'a RoundRecord>) -> Vec<(usize, f64)> {
    let mut acc: BTreeMap<usize, (u128, usize)> = BTreeMap::new();
    for r in rounds.into_iter().filter(|r| !r.initialization) {
        let e = acc.entry(r.dataset_size).or_default();
        e.0 += u128::from(r.proposal_time_ns);
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(n, (sum, count))| (n, sum as f64 / count as f64))
        .collect()
}

/// Ordinary least-squares slope of `ln y` on `ln x`, ignoring points where
/// either is non-positive. `None` with fewer than two distinct `x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// One summary per method, in the order methods first appear.
pub fn timing_summary(traces: &[RunTrace]) -> Vec<MethodTiming> {
    let mut order: Vec<&str> = Vec::new();
    for t in traces {
        if !order.contains(&t.method.as_str()) {
            order.push(&t.method);
        }
    }
    order
        .into_iter()
        .map(|method| {
            let runs: Vec<&RunTrace> = traces.iter().filter(|t| t.method == method).collect();
            let rounds: usize = runs.iter().map(|t| t.rounds().len()).sum();
            let cumulative_ns: u128 = runs.iter().map(|t| t.total_proposal_ns()).sum();
            let by_size = mean_time_by_size(runs.iter().flat_map(|t| t.rounds()));
            let points: Vec<(f64, f64)> = by_size.iter().map(|&(n, t)| (n as f64, t)).collect();
            MethodTiming {
                method: method.to_string(),
                replications: runs.len(),
                rounds,
                mean_round_ns: if rounds == 0 { 0.0 } else { cumulative_ns as f64 / rounds as f64 },
                cumulative_ns,
                mean_run_total_ns: cumulative_ns as f64 / runs.len() as f64,
                loglog_slope: loglog_slope(&points),
            }
        })
        .collect()
}
