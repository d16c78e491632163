use std::fs;
use std::path::Path;

use clap::ValueEnum;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::output::{write_csv, write_json};
use super::thread_pool;
use crate::error::Result;
use crate::meanfield::{beam_vs_isotropic_report, run_single_mode, Sampling};
use crate::numerics::{compare_tracking, first_zero_crossing, fit_linear, fit_log_scaling, TimeGrid, Trajectory};
use crate::quantum::{build_ladder, LadderPropagator};
use crate::seeded::{run_seeded, seed_angle_from_fraction, BeamPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }
}

pub const FIG1_SEED_FRACTIONS: [f64; 4] = [1e-4, 1e-6, 1e-8, 1e-10];
pub const FIG2_SIZES: [usize; 4] = [16, 64, 256, 1024];
pub const FIG3_SIZE: usize = 512;
pub const FIG4_MODES: usize = 64;

/// Trajectories and summary of one figure, not yet on disk.
#[derive(Debug, Clone)]
pub struct FigureBundle {
    pub figure: Figure,
    pub files: Vec<(String, Trajectory)>,
    pub summary: Value,
}

pub fn build_figure(figure: Figure, workers: Option<usize>) -> Result<FigureBundle> {
    thread_pool(workers)?.install(|| match figure {
        Figure::Fig1 => fig1(),
        Figure::Fig2 => fig2(),
        Figure::Fig3 => fig3(),
        Figure::Fig4 => fig4(),
    })
}

/// Compute a figure and write its CSVs plus `summary.json` into `dir`.
pub fn figure_bundle(figure: Figure, dir: &Path, workers: Option<usize>) -> Result<FigureBundle> {
    let bundle = build_figure(figure, workers)?;
    fs::create_dir_all(dir)?;
    for (name, traj) in &bundle.files {
        write_csv(&dir.join(name), traj)?;
    }
    write_json(&dir.join("summary.json"), &bundle.summary)?;
    Ok(bundle)
}

fn header(figure: Figure) -> Value {
    json!({
        "tool": "flavorsim",
        "version": env!("CARGO_PKG_VERSION"),
        "figure": figure,
    })
}

fn fig1() -> Result<FigureBundle> {
    let grid = TimeGrid::horizon(crate::seeded::DEFAULT_HORIZON, 1e-3)?;
    let runs: Vec<(f64, f64, Trajectory)> = FIG1_SEED_FRACTIONS
        .par_iter()
        .map(|&f| {
            let eps = seed_angle_from_fraction(f)?;
            Ok((f, eps, run_seeded(&BeamPair::symmetric(eps)?, &grid)?))
        })
        .collect::<Result<_>>()?;
    let mut seeds = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (f, eps, traj) in &runs {
        let t = first_zero_crossing(traj);
        let closed = 0.5 * (1.0 / eps.tan()).ln();
        if let Some(t) = t {
            xs.push((1.0 / f).ln());
            ys.push(t);
        }
        seeds.push(json!({
            "seed_fraction": f,
            "seed_angle": eps,
            "break_time": t,
            "closed_form_break_time": closed,
            "relative_error": t.map(|t| (t - closed).abs() / closed),
        }));
    }
    let mut summary = header(Figure::Fig1);
    summary["runs"] = json!(seeds);
    summary["fit_vs_log_inverse_fraction"] = json!(fit_linear(&xs, &ys).ok());
    Ok(FigureBundle {
        figure: Figure::Fig1,
        files: runs
            .into_iter()
            .map(|(f, _, traj)| (format!("seed_fraction_{f:e}.csv"), traj.decimated(20)))
            .collect(),
        summary,
    })
}

fn fig2() -> Result<FigureBundle> {
    let grid = TimeGrid::horizon(8.0, 1e-2)?;
    let runs: Vec<(usize, Trajectory)> = FIG2_SIZES
        .par_iter()
        .map(|&n| Ok((n, LadderPropagator::new(&build_ladder(n, 0.0)?)?.evolve(&grid)?)))
        .collect::<Result<_>>()?;
    let pairs: Vec<(f64, f64)> = runs
        .iter()
        .filter_map(|(n, t)| first_zero_crossing(t).map(|c| (*n as f64, c)))
        .collect();
    let (sxy, sxx) = pairs
        .iter()
        .fold((0.0, 0.0), |(a, b), &(n, t)| (a + n.ln() * t, b + n.ln() * n.ln()));
    let mut summary = header(Figure::Fig2);
    summary["break_times"] = json!(pairs);
    summary["log_fit"] = json!(fit_log_scaling(&pairs).ok());
    summary["through_origin_coefficient"] = json!(sxy / sxx);
    Ok(FigureBundle {
        figure: Figure::Fig2,
        files: runs
            .into_iter()
            .map(|(n, traj)| (format!("quantum_n{n}.csv"), traj))
            .collect(),
        summary,
    })
}

fn fig3() -> Result<FigureBundle> {
    let n = FIG3_SIZE;
    let horizon = 24.0;
    let (quantum, meanfield) = rayon::join(
        || -> Result<Trajectory> {
            LadderPropagator::new(&build_ladder(n, 0.0)?)?.evolve(&TimeGrid::horizon(horizon, 1e-2)?)
        },
        || run_single_mode(n as f64, Complex64::new(1.0, 0.0), 0.0, &TimeGrid::horizon(horizon, 1e-3)?),
    );
    let (quantum, meanfield) = (quantum?, meanfield?);
    let mut summary = header(Figure::Fig3);
    summary["n"] = json!(n);
    summary["meanfield_seed"] = json!(1.0);
    summary["tracking"] = json!(compare_tracking(&quantum, &meanfield));
    Ok(FigureBundle {
        figure: Figure::Fig3,
        files: vec![
            (format!("quantum_n{n}.csv"), quantum),
            (format!("meanfield_n{n}.csv"), meanfield.decimated(10)),
        ],
        summary,
    })
}

fn fig4() -> Result<FigureBundle> {
    let grid = TimeGrid::horizon(60.0, 5e-3)?;
    let report = beam_vs_isotropic_report(
        FIG3_SIZE as f64,
        FIG4_MODES,
        Complex64::new(1.0, 0.0),
        &grid,
        Sampling::Fibonacci,
        0,
    )?;
    let mut summary = header(Figure::Fig4);
    summary["n"] = json!(FIG3_SIZE);
    summary["modes_per_cloud"] = json!(FIG4_MODES);
    summary["report"] = serde_json::to_value(&report)?;
    Ok(FigureBundle {
        figure: Figure::Fig4,
        files: vec![
            ("beams.csv".to_string(), report.beams.decimated(10)),
            ("isotropic.csv".to_string(), report.isotropic.decimated(10)),
        ],
        summary,
    })
}
