//! Turns trace rows into per-method curves and the two standard charts.

use ennbo_core::harness::TraceRow;

use crate::error::CliError;
use crate::svg::{Chart, Series};

/// Aggregated view of one method across its replications.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodCurve {
    pub method: String,
    pub replications: usize,
    /// Mean `y_max` per round.
    pub mean: Vec<f64>,
    /// Sample standard deviation over replications divided by `sqrt(reps)`;
    /// zero with a single replication.
    pub std_err: Vec<f64>,
    /// Total proposal time over every round of every replication.
    pub cumulative_seconds: f64,
    /// `(observations before the proposal, mean proposal seconds)` per round.
    pub timing: Vec<(f64, f64)>,
}

struct Round {
    y_max: f64,
    time_ns: u64,
    arms: usize,
}

struct Run {
    method: String,
    replication: usize,
    first_row: usize,
    rounds: Vec<Round>,
}

fn data(row: usize, message: impl Into<String>) -> CliError {
    CliError::Data {
        row,
        message: message.into(),
    }
}

/// Rows must come grouped by run, rounds in order and arms numbered from 0.
/// Row numbers in errors count the header as row 1.
pub fn curves(rows: &[TraceRow]) -> Result<Vec<MethodCurve>, CliError> {
    let mut runs: Vec<Run> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let line = i + 2;
        let idx = match runs
            .iter()
            .position(|run| run.method == r.method && run.replication == r.replication)
        {
            Some(idx) => idx,
            None => {
                runs.push(Run {
                    method: r.method.clone(),
                    replication: r.replication,
                    first_row: line,
                    rounds: Vec::new(),
                });
                runs.len() - 1
            }
        };
        let run = &mut runs[idx];
        let seen = run.rounds.len();
        if r.round == seen + 1 && r.arm_index == 0 {
            if let Some(prev) = run.rounds.last() {
                if r.y_max < prev.y_max {
                    return Err(data(line, "y_max decreased"));
                }
            }
            run.rounds.push(Round {
                y_max: r.y_max,
                time_ns: r.proposal_time_ns,
                arms: 1,
            });
        } else if r.round == seen && seen > 0 && r.arm_index == run.rounds[seen - 1].arms {
            let last = &mut run.rounds[seen - 1];
            if r.y_max != last.y_max || r.proposal_time_ns != last.time_ns {
                return Err(data(line, "y_max and proposal_time_ns must agree within a round"));
            }
            last.arms += 1;
        } else {
            return Err(data(
                line,
                format!(
                    "round {} arm {} is out of sequence for {} replication {}",
                    r.round, r.arm_index, r.method, r.replication
                ),
            ));
        }
    }

    let mut methods: Vec<&str> = Vec::new();
    for run in &runs {
        if !methods.contains(&run.method.as_str()) {
            methods.push(&run.method);
        }
    }
    methods
        .into_iter()
        .map(|method| {
            let group: Vec<&Run> = runs.iter().filter(|r| r.method == method).collect();
            let n_rounds = group[0].rounds.len();
            if let Some(bad) = group.iter().find(|r| r.rounds.len() != n_rounds) {
                return Err(data(
                    bad.first_row,
                    format!(
                        "{method} replication {} has {} rounds, expected {n_rounds}",
                        bad.replication,
                        bad.rounds.len()
                    ),
                ));
            }
            let reps = group.len() as f64;
            let mut mean = Vec::with_capacity(n_rounds);
            let mut std_err = Vec::with_capacity(n_rounds);
            let mut timing = Vec::with_capacity(n_rounds);
            let mut observed = vec![0usize; group.len()];
            for n in 0..n_rounds {
                let ys: Vec<f64> = group.iter().map(|r| r.rounds[n].y_max).collect();
                let m = ys.iter().sum::<f64>() / reps;
                let se = if group.len() > 1 {
                    let var = ys.iter().map(|y| (y - m).powi(2)).sum::<f64>() / (reps - 1.0);
                    (var / reps).sqrt()
                } else {
                    0.0
                };
                mean.push(m);
                std_err.push(se);
                let x = observed.iter().sum::<usize>() as f64 / reps;
                let t = group.iter().map(|r| r.rounds[n].time_ns as f64).sum::<f64>() / reps;
                timing.push((x, t / 1e9));
                for (o, r) in observed.iter_mut().zip(&group) {
                    *o += r.rounds[n].arms;
                }
            }
            let total_ns: u128 = group
                .iter()
                .flat_map(|r| &r.rounds)
                .map(|r| u128::from(r.time_ns))
                .sum();
            Ok(MethodCurve {
                method: method.to_string(),
                replications: group.len(),
                mean,
                std_err,
                cumulative_seconds: total_ns as f64 / 1e9,
                timing,
            })
        })
        .collect()
}

/// Mean max-so-far with a ±1 standard-error band per method.
pub fn max_so_far_chart(title: &str, curves: &[MethodCurve]) -> Chart {
    Chart {
        title: title.to_string(),
        x_label: "round".into(),
        y_label: "max so far".into(),
        log_x: false,
        log_y: false,
        series: curves
            .iter()
            .map(|c| {
                let xs = (1..=c.mean.len()).map(|n| n as f64);
                Series {
                    label: format!("{} ({:.3} s)", c.method, c.cumulative_seconds),
                    points: xs.clone().zip(c.mean.iter().copied()).collect(),
                    band: Some(
                        xs.zip(c.mean.iter().zip(&c.std_err))
                            .map(|(x, (m, se))| (x, m - se, m + se))
                            .collect(),
                    ),
                }
            })
            .collect(),
    }
}

/// Mean proposal time against observations seen, log-log.
pub fn proposal_time_chart(title: &str, curves: &[MethodCurve]) -> Chart {
    Chart {
        title: title.to_string(),
        x_label: "observations N".into(),
        y_label: "proposal time (s)".into(),
        log_x: true,
        log_y: true,
        series: curves
            .iter()
            .map(|c| Series {
                label: c.method.clone(),
                points: c.timing.clone(),
                band: None,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(method: &str, rep: usize, round: usize, arm: usize, y: f64, y_max: f64, ns: u64) -> TraceRow {
        TraceRow {
            run_id: format!("{method}-{rep}"),
            method: method.into(),
            function: "f".into(),
            dimension: 1,
            replication: rep,
            round,
            arm_index: arm,
            y,
            y_max,
            proposal_time_ns: ns,
            distortion_seed: 0,
        }
    }

    #[test]
    fn multi_arm_rounds_are_grouped() {
        let rows = vec![
            row("a", 0, 1, 0, 1.0, 2.0, 10),
            row("a", 0, 1, 1, 2.0, 2.0, 10),
            row("a", 0, 2, 0, 3.0, 3.0, 30),
            row("a", 0, 2, 1, 0.0, 3.0, 30),
        ];
        let c = curves(&rows).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].mean, vec![2.0, 3.0]);
        assert_eq!(c[0].std_err, vec![0.0, 0.0]);
        assert_eq!(c[0].timing, vec![(0.0, 10e-9), (2.0, 30e-9)]);
        assert_eq!(c[0].cumulative_seconds, 40e-9);
    }

    #[test]
    fn sequence_errors_report_rows() {
        let rows = vec![row("a", 0, 1, 0, 1.0, 1.0, 0), row("a", 0, 3, 0, 1.0, 1.0, 0)];
        assert!(matches!(curves(&rows), Err(CliError::Data { row: 3, .. })));
        let rows = vec![row("a", 0, 1, 0, 1.0, 1.0, 0), row("a", 0, 1, 1, 1.0, 2.0, 0)];
        assert!(matches!(curves(&rows), Err(CliError::Data { row: 3, .. })));
        let rows = vec![row("a", 0, 1, 0, 5.0, 5.0, 0), row("a", 0, 2, 0, 1.0, 1.0, 0)];
        assert!(matches!(curves(&rows), Err(CliError::Data { row: 3, .. })));
        let rows = vec![
            row("a", 0, 1, 0, 1.0, 1.0, 0),
            row("a", 0, 2, 0, 1.0, 1.0, 0),
            row("a", 1, 1, 0, 1.0, 1.0, 0),
        ];
        assert!(matches!(curves(&rows), Err(CliError::Data { row: 4, .. })));
    }

    #[test]
    fn band_matches_mean_and_error() {
        let rows = vec![
            row("a", 0, 1, 0, 1.0, 1.0, 5),
            row("a", 1, 1, 0, 3.0, 3.0, 7),
        ];
        let c = curves(&rows).unwrap();
        let chart = max_so_far_chart("t", &c);
        let band = chart.series[0].band.as_ref().unwrap();
        assert_eq!(band[0], (1.0, 1.0, 3.0));
        assert!(chart.series[0].label.contains("0.000 s"));
    }
}
