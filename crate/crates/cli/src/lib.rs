//! Command-line driver: runs experiments and writes traces, summaries and
//! plots.
//!
//! Exit codes: 0 on success, 2 for an invalid configuration or malformed trace
//! file, 3 for I/O failures.

pub mod config;
pub mod error;
pub mod plot;
pub mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ennbo_core::harness::{
    read_traces, run_experiment, score_traces, timing_summary, write_scores, write_timing,
    write_traces, RunTrace, ScoreTable, TraceRow,
};

pub use config::{ConfigArgs, FileConfig, RunConfig, OUTPUT_DIR_ENV};
pub use error::CliError;
use error::from_core;

pub const TRACES_FILE: &str = "traces.csv";
pub const SCORES_FILE: &str = "scores.csv";
pub const TIMING_FILE: &str = "timing.csv";
pub const MAX_SO_FAR_SVG: &str = "max_so_far.svg";
pub const PROPOSAL_TIME_SVG: &str = "proposal_time.svg";
pub const SCORE_VS_K_FILE: &str = "score_vs_k.csv";
pub const SCORE_VS_K_SVG: &str = "score_vs_k.svg";

#[derive(Debug, Parser)]
#[command(name = "ennbo", version, about = "Trust-region Bayesian optimization with an epistemic nearest-neighbor surrogate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every configured method and write traces, scores, timings and plots.
    Run(ConfigArgs),
    /// Run turbo-enn for several neighbor counts and compare their scores.
    SweepK(SweepArgs),
    /// Redraw the plots from an existing traces.csv.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Comma-separated neighbor counts, e.g. 1,3,10,30.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    pub traces: PathBuf,
    /// Defaults to the directory holding the traces file.
    #[arg(long = "output-dir", alias = "output_dir")]
    pub output_dir: Option<PathBuf>,
}

/// Runs a parsed command line, reading the output-directory override from the
/// process environment.
pub fn execute(cli: Cli) -> Result<(), CliError> {
    let env = std::env::var(OUTPUT_DIR_ENV).ok();
    match cli.command {
        Command::Run(args) => cmd_run(&resolve(&args, env.as_deref())?.0).map(|_| ()),
        Command::SweepK(args) => cmd_sweep_k(&args, env.as_deref()).map(|_| ()),
        Command::Plot(args) => {
            let out = args
                .output_dir
                .clone()
                .or_else(|| env.filter(|s| !s.is_empty()).map(PathBuf::from))
                .unwrap_or_else(|| {
                    args.traces
                        .parent()
                        .map(Path::to_path_buf)
                        .unwrap_or_default()
                });
            cmd_plot(&args.traces, &out).map(|_| ())
        }
    }
}

fn resolve(args: &ConfigArgs, env: Option<&str>) -> Result<(RunConfig, FileConfig), CliError> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    Ok((RunConfig::resolve(args, &file, env)?, file))
}

/// What a run produced, for callers that want to inspect it.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub traces: Vec<RunTrace>,
    pub scores: Option<ScoreTable>,
    pub files: Vec<PathBuf>,
}

pub fn cmd_run(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let exp = cfg.experiment()?;
    let labels = cfg.method_labels()?;
    let traces = run_experiment(&exp).map_err(from_core)?;
    write_outputs(cfg, &labels, traces)
}

/// Writes everything once, after all runs have finished.
fn write_outputs(cfg: &RunConfig, labels: &[String], traces: Vec<RunTrace>) -> Result<RunOutput, CliError> {
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;

    let mut trace_csv = Vec::new();
    write_traces(&mut trace_csv, &traces).map_err(from_core)?;

    let scores = if labels.len() >= 2 {
        Some(score_traces(&traces, cfg.aggregation).map_err(from_core)?)
    } else {
        eprintln!(
            "warning: rank scores need at least two methods; {} is left empty",
            SCORES_FILE
        );
        None
    };
    let mut score_csv = Vec::new();
    write_scores(
        &mut score_csv,
        &cfg.function,
        cfg.dimension,
        cfg.aggregation,
        labels,
        scores.as_ref(),
    )
    .map_err(from_core)?;

    let mut timing_csv = Vec::new();
    write_timing(&mut timing_csv, &timing_summary(&traces)).map_err(from_core)?;

    // Plots are drawn from the serialized rows so `plot` on the written file
    // reproduces them exactly.
    let rows = read_traces(&trace_csv[..]).map_err(from_core)?;
    let title = format!("{} (D={})", cfg.function, cfg.dimension);
    let (max_svg, time_svg) = render_plots(&title, &rows)?;

    let mut files = Vec::new();
    for (name, bytes) in [
        (TRACES_FILE, trace_csv),
        (SCORES_FILE, score_csv),
        (TIMING_FILE, timing_csv),
        (MAX_SO_FAR_SVG, max_svg.into_bytes()),
        (PROPOSAL_TIME_SVG, time_svg.into_bytes()),
    ] {
        files.push(write_file(dir, name, &bytes)?);
    }
    Ok(RunOutput {
        traces,
        scores,
        files,
    })
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
    Ok(path)
}

fn render_plots(title: &str, rows: &[TraceRow]) -> Result<(String, String), CliError> {
    let curves = plot::curves(rows)?;
    Ok((
        svg::render(&plot::max_so_far_chart(&format!("Max so far: {title}"), &curves)),
        svg::render(&plot::proposal_time_chart(&format!("Proposal time: {title}"), &curves)),
    ))
}

/// Result of a K sweep: one `(K, score)` per distinct K, in the order given.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub run: RunOutput,
    pub score_vs_k: Vec<(usize, f64)>,
}

/// Distinct values in first-seen order, plus whether anything was dropped.
pub fn dedupe_ks(ks: &[usize]) -> (Vec<usize>, bool) {
    let mut out = Vec::new();
    for &k in ks {
        if !out.contains(&k) {
            out.push(k);
        }
    }
    let dropped = out.len() != ks.len();
    (out, dropped)
}

pub fn cmd_sweep_k(args: &SweepArgs, env: Option<&str>) -> Result<SweepOutput, CliError> {
    if args.config.methods.is_some() {
        return Err(CliError::config("methods", "sweep-k derives methods from --k"));
    }
    let file = match &args.config.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let raw = args
        .k
        .clone()
        .or_else(|| file.k.clone())
        .ok_or_else(|| CliError::config("k", "give at least two neighbor counts"))?;
    if raw.contains(&0) {
        return Err(CliError::config("k", "neighbor counts must be at least 1"));
    }
    let (ks, dropped) = dedupe_ks(&raw);
    if dropped {
        eprintln!("warning: duplicate K values removed; sweeping {ks:?}");
    }
    if ks.len() < 2 {
        return Err(CliError::config("k", "need at least two distinct neighbor counts"));
    }
    let methods: Vec<String> = ks.iter().map(|k| format!("turbo-enn-{k}")).collect();
    let flags = ConfigArgs {
        methods: Some(methods.clone()),
        ..args.config.clone()
    };
    let cfg = RunConfig::resolve(&flags, &FileConfig { methods: None, ..file }, env)?;
    let run = cmd_run(&cfg)?;
    let table = run.scores.as_ref().expect("two or more methods are always scored");
    let score_vs_k: Vec<(usize, f64)> = ks
        .iter()
        .zip(&methods)
        .map(|(&k, m)| (k, table.score(m).expect("every method is scored")))
        .collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["k", "method", "score"]).map_err(csv_err)?;
    for ((k, s), m) in score_vs_k.iter().zip(&methods) {
        w.write_record([k.to_string(), m.clone(), format!("{s:?}")])
            .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    let chart = svg::Chart {
        title: format!("Score vs K: {} (D={})", cfg.function, cfg.dimension),
        x_label: "K".into(),
        y_label: "rank score".into(),
        log_x: true,
        log_y: false,
        series: vec![svg::Series {
            label: "turbo-enn".into(),
            points: score_vs_k.iter().map(|&(k, s)| (k as f64, s)).collect(),
            band: None,
        }],
    };
    let mut run = run;
    run.files.push(write_file(&cfg.output_dir, SCORE_VS_K_FILE, &bytes)?);
    run.files
        .push(write_file(&cfg.output_dir, SCORE_VS_K_SVG, svg::render(&chart).as_bytes())?);
    Ok(SweepOutput { run, score_vs_k })
}

/// Reads a traces file and writes both plots into `output_dir`.
pub fn cmd_plot(traces: &Path, output_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let file = fs::File::open(traces)
        .map_err(|e| CliError::io(format!("reading {}", traces.display()), e))?;
    let rows = read_traces(std::io::BufReader::new(file)).map_err(from_core)?;
    let first = &rows[0];
    let title = format!("{} (D={})", first.function, first.dimension);
    let (max_svg, time_svg) = render_plots(&title, &rows)?;
    fs::create_dir_all(output_dir)
        .map_err(|e| CliError::io(format!("creating {}", output_dir.display()), e))?;
    Ok(vec![
        write_file(output_dir, MAX_SO_FAR_SVG, max_svg.as_bytes())?,
        write_file(output_dir, PROPOSAL_TIME_SVG, time_svg.as_bytes())?,
    ])
}
