//! Replicated experiments, rank scoring and proposal-time summaries.

mod io;
mod score;
mod timing;

pub use io::{
    read_traces, write_scores, write_timing, write_traces, TraceRow, SCORE_HEADER_PREFIX,
    TIMING_HEADER, TRACE_HEADER,
};
pub use score::{fractional_ranks, mean_y_max_by_method, rank_scores, score_traces, Aggregation, ScoreTable};
pub use timing::{loglog_slope, mean_time_by_size, timing_summary, MethodTiming};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functions::{evaluate, function_by_name, Distortion, DistortionMode};
use crate::optimizer::{default_init_count, Method, MethodSpec, Optimizer};
use crate::rng::{derive_stream, label_id, RngStream};
use crate::types::Design;

/// One proposal/evaluation round of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// 1-based.
    pub round: usize,
    pub arms: Vec<Design>,
    pub values: Vec<f64>,
    /// Best value observed through the end of this round.
    pub y_max: f64,
    pub proposal_time_ns: u64,
    /// Observations the proposer could see.
    pub dataset_size: usize,
    pub initialization: bool,
}

/// The full history of one method on one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub method: String,
    pub function: String,
    pub dimension: usize,
    pub replication: usize,
    /// Stream id that generated this replication's distortion center.
    pub distortion_seed: u64,
    pub x0: Vec<f64>,
    rounds: Vec<RoundRecord>,
}

impl RunTrace {
    pub fn new(
        method: impl Into<String>,
        function: impl Into<String>,
        dimension: usize,
        replication: usize,
        distortion_seed: u64,
        x0: Vec<f64>,
    ) -> Self {
        RunTrace {
            method: method.into(),
            function: function.into(),
            dimension,
            replication,
            distortion_seed,
            x0,
            rounds: Vec::new(),
        }
    }

    pub fn run_id(&self) -> String {
        format!(
            "{}-d{}-{}-r{}",
            self.function, self.dimension, self.method, self.replication
        )
    }

    /// Appends a round; `y_max` is derived so it can never decrease.
    pub fn push_round(
        &mut self,
        arms: Vec<Design>,
        values: Vec<f64>,
        proposal_time_ns: u64,
        dataset_size: usize,
        initialization: bool,
    ) -> Result<()> {
        if arms.len() != values.len() {
            return Err(Error::LengthMismatch {
                what: "values",
                left: values.len(),
                right: arms.len(),
            });
        }
        if values.is_empty() {
            return Err(Error::invalid("values", "a round needs at least one arm"));
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(bad));
        }
        let prev = self.final_y_max().unwrap_or(f64::NEG_INFINITY);
        let y_max = values.iter().copied().fold(prev, f64::max);
        self.rounds.push(RoundRecord {
            round: self.rounds.len() + 1,
            arms,
            values,
            y_max,
            proposal_time_ns,
            dataset_size,
            initialization,
        });
        Ok(())
    }

    pub fn rounds(&self) -> &[RoundRecord] {
        &self.rounds
    }

    pub fn y_max_series(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.y_max).collect()
    }

    pub fn final_y_max(&self) -> Option<f64> {
        self.rounds.last().map(|r| r.y_max)
    }

    pub fn total_proposal_ns(&self) -> u128 {
        self.rounds.iter().map(|r| u128::from(r.proposal_time_ns)).sum()
    }
}

/// Everything needed to reproduce a batch of runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub methods: Vec<String>,
    pub function: String,
    pub dimension: usize,
    pub rounds: usize,
    pub arms_per_round: usize,
    pub replications: usize,
    pub base_seed: u64,
    pub distortion_mode: DistortionMode,
    /// Defaults to `max(2, 2D)`.
    pub init_count: Option<usize>,
    /// When false every proposal time is recorded as zero, making traces
    /// byte-reproducible.
    pub record_timing: bool,
    /// Run replications on the rayon pool. Timings then include contention.
    pub parallel: bool,
}

impl Experiment {
    pub fn new(methods: &[&str], function: &str, dimension: usize) -> Self {
        Experiment {
            methods: methods.iter().map(|m| m.to_string()).collect(),
            function: function.to_string(),
            dimension,
            rounds: 30.max(dimension),
            arms_per_round: 1,
            replications: 1,
            base_seed: 0,
            distortion_mode: DistortionMode::Corrected,
            init_count: None,
            record_timing: true,
            parallel: false,
        }
    }

    /// Parses and validates the method labels.
    pub fn parsed_methods(&self) -> Result<Vec<Method>> {
        if self.methods.is_empty() {
            return Err(Error::invalid("methods", "at least one method is required"));
        }
        let mut out: Vec<Method> = Vec::with_capacity(self.methods.len());
        for label in &self.methods {
            let m: Method = label.parse()?;
            if out.contains(&m) {
                return Err(Error::invalid("methods", format!("`{m}` is listed twice")));
            }
            out.push(m);
        }
        Ok(out)
    }

    /// Checks every field and returns the per-method specs a run would use.
    pub fn validate(&self) -> Result<Vec<MethodSpec>> {
        if self.dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        if self.rounds == 0 {
            return Err(Error::invalid("rounds", "must be at least 1"));
        }
        if self.replications == 0 {
            return Err(Error::invalid("replications", "must be at least 1"));
        }
        function_by_name(&self.function)?;
        let init = self
            .init_count
            .unwrap_or_else(|| default_init_count(self.dimension));
        self.parsed_methods()?
            .into_iter()
            .map(|m| MethodSpec::new(m, self.arms_per_round, init))
            .collect()
    }
}

/// Stream id behind the distortion of replication `r`; shared by all methods.
pub fn distortion_stream(replication: usize) -> u64 {
    derive_stream(&[label_id("distortion"), replication as u64])
}

/// Stream id driving `method` on replication `r`.
pub fn method_stream(method: &Method, replication: usize) -> u64 {
    derive_stream(&[label_id(&method.to_string()), replication as u64])
}

/// Runs every method on every replication. Traces come back ordered by method
/// (as listed) and then replication.
pub fn run_experiment(exp: &Experiment) -> Result<Vec<RunTrace>> {
    let specs = exp.validate()?;
    let jobs: Vec<(MethodSpec, usize)> = specs
        .iter()
        .flat_map(|s| (0..exp.replications).map(move |r| (*s, r)))
        .collect();
    if exp.parallel {
        jobs.par_iter().map(|&(s, r)| run_one(exp, s, r)).collect()
    } else {
        jobs.iter().map(|&(s, r)| run_one(exp, s, r)).collect()
    }
}

fn run_one(exp: &Experiment, spec: MethodSpec, replication: usize) -> Result<RunTrace> {
    let function = function_by_name(&exp.function)?;
    let dist_stream = distortion_stream(replication);
    let mut dist_rng = RngStream::new(exp.base_seed, dist_stream);
    let distortion = Distortion::random(exp.dimension, exp.distortion_mode, &mut dist_rng)?;

    let method = spec.method();
    let rng = RngStream::new(exp.base_seed, method_stream(&method, replication));
    let mut opt = Optimizer::new(spec, exp.dimension, rng)?;
    let mut trace = RunTrace::new(
        method.to_string(),
        function.name(),
        exp.dimension,
        replication,
        dist_stream,
        distortion.x0().to_vec(),
    );
    for _ in 0..exp.rounds {
        let proposal = opt.ask()?;
        let values = proposal
            .arms
            .iter()
            .map(|x| evaluate(function.as_ref(), &distortion, x))
            .collect::<Result<Vec<f64>>>()?;
        opt.tell(&proposal.arms, &values)?;
        let ns = if exp.record_timing {
            u64::try_from(proposal.elapsed.as_nanos()).unwrap_or(u64::MAX)
        } else {
            0
        };
        trace.push_round(
            proposal.arms,
            values,
            ns,
            proposal.dataset_size,
            proposal.initialization,
        )?;
    }
    Ok(trace)
}
