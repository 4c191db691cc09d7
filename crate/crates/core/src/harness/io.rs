//! CSV persistence for traces and summaries.

use std::io::{Read, Write};

use super::{Aggregation, MethodTiming, RunTrace, ScoreTable};
use crate::error::{Error, Result};

pub const TRACE_HEADER: [&str; 11] = [
    "run_id",
    "method",
    "function",
    "dimension",
    "replication",
    "round",
    "arm_index",
    "y",
    "y_max",
    "proposal_time_ns",
    "distortion_seed",
];

pub const SCORE_HEADER_PREFIX: [&str; 3] = ["function", "dimension", "aggregation"];

pub const TIMING_HEADER: [&str; 7] = [
    "method",
    "replications",
    "rounds",
    "mean_proposal_time_s",
    "cumulative_proposal_time_s",
    "mean_cumulative_proposal_time_s",
    "loglog_slope",
];

/// One line of `traces.csv`: a single evaluated arm.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub run_id: String,
    pub method: String,
    pub function: String,
    pub dimension: usize,
    pub replication: usize,
    pub round: usize,
    pub arm_index: usize,
    pub y: f64,
    pub y_max: f64,
    pub proposal_time_ns: u64,
    pub distortion_seed: u64,
}

fn csv_err(err: csv::Error) -> Error {
    let row = err.position().map(|p| p.line() as usize).unwrap_or(0);
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e.to_string()),
        other => Error::MalformedTrace {
            row,
            reason: format!("{other:?}"),
        },
    }
}

fn flush_err(err: csv::IntoInnerError<csv::Writer<impl Write>>) -> Error {
    Error::Io(err.error().to_string())
}

/// `Debug` formatting of `f64` is shortest round-trip.
fn float(v: f64) -> String {
    format!("{v:?}")
}

/// Writes one row per evaluated arm, in trace order.
pub fn write_traces<W: Write>(out: W, traces: &[RunTrace]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER).map_err(csv_err)?;
    for t in traces {
        let run_id = t.run_id();
        for r in t.rounds() {
            for (arm, &y) in r.values.iter().enumerate() {
                w.write_record([
                    run_id.as_str(),
                    &t.method,
                    &t.function,
                    &t.dimension.to_string(),
                    &t.replication.to_string(),
                    &r.round.to_string(),
                    &arm.to_string(),
                    &float(y),
                    &float(r.y_max),
                    &r.proposal_time_ns.to_string(),
                    &t.distortion_seed.to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.into_inner().map_err(flush_err)?.flush()?;
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, row: usize) -> Result<T> {
    let raw = &rec[i];
    raw.trim().parse().map_err(|_| Error::MalformedTrace {
        row,
        reason: format!("column `{}` has unparseable value `{raw}`", TRACE_HEADER[i]),
    })
}

/// Parses `traces.csv`. Rows are numbered by file line, the header being 1.
pub fn read_traces<R: Read>(input: R) -> Result<Vec<TraceRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = reader.records();
    let header = match records.next() {
        None => {
            return Err(Error::MalformedTrace {
                row: 1,
                reason: "file is empty".into(),
            })
        }
        Some(h) => h.map_err(csv_err)?,
    };
    if header.iter().ne(TRACE_HEADER) {
        return Err(Error::MalformedTrace {
            row: 1,
            reason: format!("expected header `{}`", TRACE_HEADER.join(",")),
        });
    }
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_err)?;
        let row = rec.position().map(|p| p.line() as usize).unwrap_or(rows.len() + 2);
        if rec.len() != TRACE_HEADER.len() {
            return Err(Error::MalformedTrace {
                row,
                reason: format!("expected {} fields, found {}", TRACE_HEADER.len(), rec.len()),
            });
        }
        let parsed = TraceRow {
            run_id: rec[0].to_string(),
            method: rec[1].to_string(),
            function: rec[2].to_string(),
            dimension: field(&rec, 3, row)?,
            replication: field(&rec, 4, row)?,
            round: field(&rec, 5, row)?,
            arm_index: field(&rec, 6, row)?,
            y: field(&rec, 7, row)?,
            y_max: field(&rec, 8, row)?,
            proposal_time_ns: field(&rec, 9, row)?,
            distortion_seed: field(&rec, 10, row)?,
        };
        if parsed.method.is_empty() {
            return Err(Error::MalformedTrace {
                row,
                reason: "method is empty".into(),
            });
        }
        if !parsed.y.is_finite() || !parsed.y_max.is_finite() {
            return Err(Error::MalformedTrace {
                row,
                reason: "y and y_max must be finite".into(),
            });
        }
        if parsed.y > parsed.y_max {
            return Err(Error::MalformedTrace {
                row,
                reason: format!("y {} exceeds y_max {}", parsed.y, parsed.y_max),
            });
        }
        if parsed.round == 0 {
            return Err(Error::MalformedTrace {
                row,
                reason: "rounds are 1-based".into(),
            });
        }
        rows.push(parsed);
    }
    if rows.is_empty() {
        return Err(Error::MalformedTrace {
            row: 2,
            reason: "no data rows".into(),
        });
    }
    Ok(rows)
}

/// Writes the wide score table: one column per method. Cells are left empty
/// when `table` is `None`.
pub fn write_scores<W: Write>(
    out: W,
    function: &str,
    dimension: usize,
    aggregation: Aggregation,
    methods: &[String],
    table: Option<&ScoreTable>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<&str> = SCORE_HEADER_PREFIX
        .iter()
        .copied()
        .chain(methods.iter().map(String::as_str))
        .collect();
    w.write_record(&header).map_err(csv_err)?;
    let mut row = vec![
        function.to_string(),
        dimension.to_string(),
        aggregation.as_str().to_string(),
    ];
    for m in methods {
        row.push(
            table
                .and_then(|t| t.score(m))
                .map(float)
                .unwrap_or_default(),
        );
    }
    w.write_record(&row).map_err(csv_err)?;
    w.into_inner().map_err(flush_err)?.flush()?;
    Ok(())
}

pub fn write_timing<W: Write>(out: W, timings: &[MethodTiming]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TIMING_HEADER).map_err(csv_err)?;
    for t in timings {
        w.write_record([
            t.method.clone(),
            t.replications.to_string(),
            t.rounds.to_string(),
            float(t.mean_round_ns * 1e-9),
            float(t.cumulative_ns as f64 * 1e-9),
            float(t.mean_run_total_ns * 1e-9),
            t.loglog_slope.map(float).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.into_inner().map_err(flush_err)?.flush()?;
    Ok(())
}
