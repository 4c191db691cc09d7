//! Run configuration: defaults, a TOML file, the output-directory environment
//! variable and command-line flags, merged in that order of increasing
//! precedence.

use std::path::{Path, PathBuf};

use clap::{ArgAction, Args};
use ennbo_core::harness::Aggregation;
use ennbo_core::{DistortionMode, Experiment};
use serde::Deserialize;

use crate::error::{from_core, CliError};

/// Overrides `output_dir` from the config file, but not the flag.
pub const OUTPUT_DIR_ENV: &str = "ENNBO_OUTPUT_DIR";

pub const DEFAULT_METHODS: [&str; 3] = ["turbo-enn-10", "turbo-0", "random"];

/// Flags shared by `run` and `sweep-k`. Every field is optional so unset flags
/// fall through to the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// TOML file with any of the fields below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Benchmark function name, e.g. ackley.
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long)]
    pub dimension: Option<usize>,
    /// Comma-separated method labels, e.g. turbo-enn-10,turbo-0,random.
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<String>>,
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long = "arms-per-round", alias = "arms_per_round")]
    pub arms_per_round: Option<usize>,
    #[arg(long)]
    pub replications: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "output-dir", alias = "output_dir")]
    pub output_dir: Option<PathBuf>,
    /// corrected or paper-literal.
    #[arg(long = "distortion-mode", alias = "distortion_mode")]
    pub distortion_mode: Option<String>,
    /// mean-then-rank or rank-then-mean.
    #[arg(long = "aggregation-mode", alias = "aggregation_mode")]
    pub aggregation_mode: Option<String>,
    /// Latin-hypercube points per restart; defaults to max(2, 2D).
    #[arg(long = "init-count", alias = "init_count")]
    pub init_count: Option<usize>,
    /// Record wall-clock proposal times. When false they are written as 0 and
    /// traces.csv becomes byte-reproducible.
    #[arg(long = "record-timing", alias = "record_timing", action = ArgAction::Set)]
    pub record_timing: Option<bool>,
    /// Run replications in parallel.
    #[arg(long, action = ArgAction::Set)]
    pub parallel: Option<bool>,
}

/// The config file schema.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub function: Option<String>,
    pub dimension: Option<usize>,
    pub methods: Option<Vec<String>>,
    pub rounds: Option<usize>,
    pub arms_per_round: Option<usize>,
    pub replications: Option<usize>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub distortion_mode: Option<String>,
    pub aggregation_mode: Option<String>,
    pub init_count: Option<usize>,
    pub record_timing: Option<bool>,
    pub parallel: Option<bool>,
    /// Neighbor counts for `sweep-k`.
    pub k: Option<Vec<usize>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| {
            let field = e
                .span()
                .and_then(|span| key_at(text, span.start))
                .unwrap_or_else(|| "config".to_string());
            CliError::config(field, e.message())
        })
    }
}

/// The key on the line containing byte `offset`, if that line is `key = ...`.
fn key_at(text: &str, offset: usize) -> Option<String> {
    let start = text[..offset.min(text.len())].rfind('\n').map_or(0, |i| i + 1);
    let line = text[start..].lines().next()?;
    let key = line.split_once('=')?.0.trim();
    (!key.is_empty() && !key.starts_with('[')).then(|| key.to_string())
}

/// A fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub function: String,
    pub dimension: usize,
    pub methods: Vec<String>,
    pub rounds: usize,
    pub arms_per_round: usize,
    pub replications: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub distortion_mode: DistortionMode,
    pub aggregation: Aggregation,
    pub init_count: Option<usize>,
    pub record_timing: bool,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            function: "ackley".into(),
            dimension: 10,
            methods: DEFAULT_METHODS.iter().map(|m| m.to_string()).collect(),
            rounds: 30,
            arms_per_round: 4,
            replications: 1,
            seed: 0,
            output_dir: PathBuf::from("ennbo-out"),
            distortion_mode: DistortionMode::Corrected,
            aggregation: Aggregation::MeanThenRank,
            init_count: None,
            record_timing: true,
            parallel: false,
        }
    }
}

impl RunConfig {
    /// Merges flags over the environment over the file over the defaults, then
    /// validates. `env_output_dir` is the value of [`OUTPUT_DIR_ENV`].
    pub fn resolve(
        flags: &ConfigArgs,
        file: &FileConfig,
        env_output_dir: Option<&str>,
    ) -> Result<Self, CliError> {
        let d = RunConfig::default();
        let distortion_mode = match flags.distortion_mode.as_ref().or(file.distortion_mode.as_ref()) {
            Some(s) => s.parse().map_err(|e| CliError::config("distortion_mode", e))?,
            None => d.distortion_mode,
        };
        let aggregation = match flags.aggregation_mode.as_ref().or(file.aggregation_mode.as_ref()) {
            Some(s) => s.parse().map_err(|e| CliError::config("aggregation_mode", e))?,
            None => d.aggregation,
        };
        let output_dir = flags
            .output_dir
            .clone()
            .or_else(|| env_output_dir.filter(|s| !s.is_empty()).map(PathBuf::from))
            .or_else(|| file.output_dir.clone())
            .unwrap_or(d.output_dir);
        let cfg = RunConfig {
            function: flags.function.clone().or_else(|| file.function.clone()).unwrap_or(d.function),
            dimension: flags.dimension.or(file.dimension).unwrap_or(d.dimension),
            methods: flags.methods.clone().or_else(|| file.methods.clone()).unwrap_or(d.methods),
            rounds: flags.rounds.or(file.rounds).unwrap_or(d.rounds),
            arms_per_round: flags.arms_per_round.or(file.arms_per_round).unwrap_or(d.arms_per_round),
            replications: flags.replications.or(file.replications).unwrap_or(d.replications),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            output_dir,
            distortion_mode,
            aggregation,
            init_count: flags.init_count.or(file.init_count),
            record_timing: flags.record_timing.or(file.record_timing).unwrap_or(d.record_timing),
            parallel: flags.parallel.or(file.parallel).unwrap_or(d.parallel),
        };
        cfg.experiment()?;
        Ok(cfg)
    }

    /// The harness experiment this config describes, validated.
    pub fn experiment(&self) -> Result<Experiment, CliError> {
        for (field, value) in [
            ("dimension", self.dimension),
            ("rounds", self.rounds),
            ("arms_per_round", self.arms_per_round),
            ("replications", self.replications),
        ] {
            if value == 0 {
                return Err(CliError::config(field, "must be at least 1"));
            }
        }
        if self.init_count == Some(0) {
            return Err(CliError::config("init_count", "must be at least 1"));
        }
        let exp = Experiment {
            methods: self.methods.iter().map(|m| m.trim().to_string()).collect(),
            function: self.function.clone(),
            dimension: self.dimension,
            rounds: self.rounds,
            arms_per_round: self.arms_per_round,
            replications: self.replications,
            base_seed: self.seed,
            distortion_mode: self.distortion_mode,
            init_count: self.init_count,
            record_timing: self.record_timing,
            parallel: self.parallel,
        };
        exp.validate().map_err(from_core)?;
        Ok(exp)
    }

    /// Canonical method labels, as they appear in the output files.
    pub fn method_labels(&self) -> Result<Vec<String>, CliError> {
        Ok(self
            .experiment()?
            .parsed_methods()
            .map_err(from_core)?
            .iter()
            .map(|m| m.to_string())
            .collect())
    }
}
