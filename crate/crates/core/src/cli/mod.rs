//! The `flavorsim` command line: one subcommand per experiment, parameter
//! sweeps, and the figure bundles.
//!
//! Every run is computed in full before anything is written, so a bad
//! parameter never leaves a half-filled output directory behind.

mod config;
mod experiments;
mod figures;
mod output;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

pub use config::{ConfigFile, Experiment, Overrides, ParamValue, Parameters, RunConfig, Sweep};
pub use experiments::PointOutput;
pub use figures::{build_figure, figure_bundle, Figure, FigureBundle};
pub use output::{parse_csv, read_csv, trajectory_csv, write_csv, CsvTable};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "flavorsim", version, about = "Coherent graviton/photon flavor conversion experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Seeded classical beams (two mixing angles).
    Seeded(RunArgs),
    /// Exact quantum evolution on the collective ladder.
    Quantum(RunArgs),
    /// Single-mode mean-field evolution.
    Meanfield(RunArgs),
    /// Clashing beams against isotropic clouds.
    IsotropicCompare(RunArgs),
    /// Linear stability and measured growth rate for a given lambda.
    Stability(RunArgs),
    /// Feasibility numbers for a merger.
    Estimate(RunArgs),
    /// Write the CSVs and summary for one of the standard figures.
    Figures(FigureArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with parameters and settings; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Worker threads for sweeps.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write every k-th sample to the CSVs.
    #[arg(long)]
    pub stride: Option<usize>,
    /// Experiment parameter, repeatable.
    #[arg(long = "param", short = 'p', value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Sweep one numeric parameter over a list of values.
    #[arg(long, value_name = "NAME=V1,V2,...")]
    pub sweep: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    /// Output directory, defaults to the figure name.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
}

pub(crate) fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::param("--workers must be at least 1"));
        }
        builder = builder.num_threads(w);
    }
    builder
        .build()
        .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))
}

/// Files written by [`run`] and the summary document.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub summary: Value,
}

fn point_label(config: &RunConfig, p: &Parameters) -> String {
    match &config.sweep {
        None => config.experiment.name().to_string(),
        Some(s) => {
            let v = p.opt_f64(&s.name).unwrap_or(f64::NAN);
            format!("{}_{}={}", config.experiment.name(), s.name, v)
        }
    }
}

/// Execute a validated configuration and write its CSVs and `summary.json`.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    let points = config.points();
    let outputs: Vec<PointOutput> = thread_pool(config.workers)?.install(|| {
        points
            .par_iter()
            .map(|p| experiments::run_point(config, p))
            .collect::<Result<_>>()
    })?;

    fs::create_dir_all(&config.output_path)?;
    let mut files = Vec::new();
    let mut runs = Vec::new();
    for (p, out) in points.iter().zip(&outputs) {
        let label = point_label(config, p);
        let mut names = Vec::new();
        for (suffix, traj) in &out.trajectories {
            let name = if suffix.is_empty() {
                format!("{label}.csv")
            } else {
                format!("{label}_{suffix}.csv")
            };
            let path = config.output_path.join(&name);
            output::write_csv(&path, &traj.decimated(config.stride))?;
            files.push(path);
            names.push(name);
        }
        runs.push(json!({
            "label": label,
            "parameters": p,
            "files": names,
            "results": out.results,
        }));
    }
    let summary = json!({
        "tool": "flavorsim",
        "version": env!("CARGO_PKG_VERSION"),
        "experiment": config.experiment,
        "config": config,
        "runs": runs,
        "aggregate": experiments::aggregate(config, &points, &outputs),
    });
    let path = config.output_path.join("summary.json");
    output::write_json(&path, &summary)?;
    files.push(path);
    Ok(RunReport { files, summary })
}

fn experiment_of(cmd: &Command) -> Option<(Experiment, &RunArgs)> {
    Some(match cmd {
        Command::Seeded(a) => (Experiment::Seeded, a),
        Command::Quantum(a) => (Experiment::Quantum, a),
        Command::Meanfield(a) => (Experiment::Meanfield, a),
        Command::IsotropicCompare(a) => (Experiment::IsotropicCompare, a),
        Command::Stability(a) => (Experiment::Stability, a),
        Command::Estimate(a) => (Experiment::Estimate, a),
        Command::Figures(_) => return None,
    })
}

/// Resolve flags and config file into a [`RunConfig`].
pub fn resolve(experiment: Experiment, args: &RunArgs) -> Result<RunConfig> {
    let file = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    RunConfig::resolve(
        experiment,
        file,
        Overrides {
            params: args.params.clone(),
            out: args.out.clone(),
            dt: args.dt,
            horizon: args.horizon,
            workers: args.workers,
            stride: args.stride,
            sweep: args.sweep.clone(),
        },
    )
}

fn execute(cli: &Cli) -> Result<()> {
    match experiment_of(&cli.command) {
        Some((experiment, args)) => {
            let config = resolve(experiment, args)?;
            let report = run(&config)?;
            for run in report.summary["runs"].as_array().into_iter().flatten() {
                if let Some(v) = run["results"]["verdict"].as_str() {
                    println!("{v}");
                }
            }
            println!("wrote {} files to {}", report.files.len(), config.output_path.display());
        }
        None => {
            let Command::Figures(args) = &cli.command else {
                unreachable!()
            };
            let dir = args
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from(args.figure.name()));
            let bundle = figure_bundle(args.figure, &dir, args.workers)?;
            println!(
                "wrote {} files to {}",
                bundle.files.len() + 1,
                dir.display()
            );
        }
    }
    Ok(())
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParameter(_) | Error::Json(_) => EXIT_CONFIG,
        e if e.is_solver_failure() => EXIT_SOLVER,
        _ => EXIT_IO,
    }
}

/// Parse arguments, run, and return the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let code = exit_code(&e);
            let kind = if code == EXIT_SOLVER { "solver failure" } else { "error" };
            eprintln!("{kind}: {e}");
            code
        }
    }
}
