//! Rank-based cross-method score.
//!
//! At every round the methods' `y_max` values are ranked (1 = worst, ties get
//! their mean rank) and rescaled to `[0, 1]` by `(rank - 1) / (M - 1)`; a
//! method's score is the mean of its rescaled ranks over all rounds.

use std::collections::BTreeSet;

use super::RunTrace;
use crate::error::{Error, Result};

/// How replications are combined before ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    /// Average `y_max` across replications per round, then rank the means.
    #[default]
    MeanThenRank,
    /// Rank within each replication, then average the rescaled ranks.
    RankThenMean,
}

impl Aggregation {
    pub fn as_str(self) -> &'static str {
        match self {
            Aggregation::MeanThenRank => "mean-then-rank",
            Aggregation::RankThenMean => "rank-then-mean",
        }
    }
}

impl std::str::FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "mean-then-rank" | "mean" => Ok(Aggregation::MeanThenRank),
            "rank-then-mean" | "rank" => Ok(Aggregation::RankThenMean),
            other => Err(Error::invalid(
                "aggregation_mode",
                format!("`{other}` is not one of: mean-then-rank, rank-then-mean"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub methods: Vec<String>,
    pub scores: Vec<f64>,
    pub rounds: usize,
}

impl ScoreTable {
    pub fn score(&self, method: &str) -> Option<f64> {
        self.methods
            .iter()
            .position(|m| m == method)
            .map(|i| self.scores[i])
    }

    pub fn method_count(&self) -> usize {
        self.methods.len()
    }
}

/// 1-based ascending ranks; tied values share the mean of their positions.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start+1 ..= end share their mean.
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

/// Scores per-round `y_max` series, one per method.
pub fn rank_scores(series: &[(String, Vec<f64>)]) -> Result<ScoreTable> {
    let m = series.len();
    if m < 2 {
        return Err(Error::TooFewMethods(m));
    }
    let rounds = series[0].1.len();
    for (method, ys) in series {
        if ys.len() != rounds {
            return Err(Error::RoundCountMismatch {
                method: method.clone(),
                expected: rounds,
                found: ys.len(),
            });
        }
    }
    if rounds == 0 {
        return Err(Error::invalid("rounds", "series are empty"));
    }
    let mut totals = vec![0.0; m];
    let mut column = vec![0.0; m];
    for n in 0..rounds {
        for (slot, (_, ys)) in column.iter_mut().zip(series) {
            *slot = ys[n];
        }
        // Ranks are half-integers, so these sums stay exact.
        for (t, r) in totals.iter_mut().zip(fractional_ranks(&column)) {
            *t += r;
        }
    }
    let spread = (m - 1) as f64;
    Ok(ScoreTable {
        methods: series.iter().map(|(name, _)| name.clone()).collect(),
        scores: totals
            .into_iter()
            .map(|t| (t / rounds as f64 - 1.0) / spread)
            .collect(),
        rounds,
    })
}

fn method_order(traces: &[RunTrace]) -> Vec<String> {
    let mut seen = Vec::new();
    for t in traces {
        if !seen.contains(&t.method) {
            seen.push(t.method.clone());
        }
    }
    seen
}

/// Per-method mean `y_max` at each round across replications, in the order
/// methods first appear.
pub fn mean_y_max_by_method(traces: &[RunTrace]) -> Result<Vec<(String, Vec<f64>)>> {
    method_order(traces)
        .into_iter()
        .map(|method| {
            let runs: Vec<&RunTrace> = traces.iter().filter(|t| t.method == method).collect();
            let rounds = runs[0].rounds().len();
            if let Some(bad) = runs.iter().find(|t| t.rounds().len() != rounds) {
                return Err(Error::RoundCountMismatch {
                    method: method.clone(),
                    expected: rounds,
                    found: bad.rounds().len(),
                });
            }
            let mean = (0..rounds)
                .map(|n| runs.iter().map(|t| t.rounds()[n].y_max).sum::<f64>() / runs.len() as f64)
                .collect();
            Ok((method, mean))
        })
        .collect()
}

/// Scores traces grouped by method.
pub fn score_traces(traces: &[RunTrace], aggregation: Aggregation) -> Result<ScoreTable> {
    match aggregation {
        Aggregation::MeanThenRank => rank_scores(&mean_y_max_by_method(traces)?),
        Aggregation::RankThenMean => {
            let methods = method_order(traces);
            let reps: BTreeSet<usize> = traces.iter().map(|t| t.replication).collect();
            let mut totals = vec![0.0; methods.len()];
            let mut rounds = 0;
            for &r in &reps {
                let series = methods
                    .iter()
                    .map(|m| {
                        traces
                            .iter()
                            .find(|t| &t.method == m && t.replication == r)
                            .map(|t| (m.clone(), t.y_max_series()))
                            .ok_or_else(|| Error::invalid(
                                "replications",
                                format!("method `{m}` has no replication {r}"),
                            ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let table = rank_scores(&series)?;
                rounds = table.rounds;
                for (t, s) in totals.iter_mut().zip(&table.scores) {
                    *t += s;
                }
            }
            Ok(ScoreTable {
                methods,
                scores: totals.into_iter().map(|t| t / reps.len() as f64).collect(),
                rounds,
            })
        }
    }
}
