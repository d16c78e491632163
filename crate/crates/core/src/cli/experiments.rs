use num_complex::Complex64;
use serde_json::{json, Value};

use super::config::{Experiment, Parameters, RunConfig};
use crate::astro::{
    blocking_threshold, diameter_crossing_time, feasibility_report, graviton_energy,
    xi_figure_of_merit, MergerScenario, NaturalUnitContext, Quantity, Unit,
};
use crate::error::{Error, Result};
use crate::meanfield::{beam_vs_isotropic_report, run_single_mode, Sampling};
use crate::numerics::{first_zero_crossing, fit_linear, fit_log_scaling, TimeGrid, Trajectory};
use crate::quantum::{build_ladder, evolve_ladder_stepping, LadderPropagator};
use crate::seeded::{run_seeded, BeamPair};
use crate::stability::{analyze_lambda, growth_rate_empirical, turnover_predictions};

/// Results of one run before anything is written.
#[derive(Debug, Clone)]
pub struct PointOutput {
    pub results: Value,
    /// `(suffix, trajectory)`; an empty suffix names the run's only CSV.
    pub trajectories: Vec<(String, Trajectory)>,
}

fn audit_maxima(traj: &Trajectory) -> Value {
    Value::Object(
        traj.audits()
            .iter()
            .map(|a| (a.name.clone(), json!(a.max_abs())))
            .collect(),
    )
}

pub fn run_point(config: &RunConfig, p: &Parameters) -> Result<PointOutput> {
    match config.experiment {
        Experiment::Seeded => seeded(p, &config.grid()?),
        Experiment::Quantum => quantum(p, &config.grid()?),
        Experiment::Meanfield => meanfield(p, &config.grid()?),
        Experiment::IsotropicCompare => isotropic(p, &config.grid()?),
        Experiment::Stability => stability(p, &config.grid()?),
        Experiment::Estimate => estimate(p),
    }
}

fn seeded(p: &Parameters, grid: &TimeGrid) -> Result<PointOutput> {
    let seed = p.f64("seed");
    let seed_b = p.opt_f64("seed_b").unwrap_or(seed);
    let beams = BeamPair::new(p.f64("n_a"), p.f64("n_b"), seed, seed_b)?;
    let traj = run_seeded(&beams, grid)?;
    let symmetric = seed == seed_b && beams.n_a == beams.n_b;
    let closed_form = symmetric.then(|| 0.5 * (1.0 / seed.tan()).ln());
    Ok(PointOutput {
        results: json!({
            "break_time": first_zero_crossing(&traj),
            "closed_form_break_time": closed_form,
            "audit_max_abs": audit_maxima(&traj),
        }),
        trajectories: vec![(String::new(), traj)],
    })
}

fn quantum(p: &Parameters, grid: &TimeGrid) -> Result<PointOutput> {
    let n = p.count("n")?;
    let lambda = p.f64("lambda");
    let h = build_ladder(n, lambda)?;
    let traj = match p.text("method") {
        "stepping" => evolve_ladder_stepping(&h, grid)?,
        _ => LadderPropagator::new(&h)?.evolve(grid)?,
    };
    let mut results = json!({
        "break_time": first_zero_crossing(&traj),
        "min_zeta": traj.min_zeta(),
        "audit_max_abs": audit_maxima(&traj),
    });
    if lambda != 0.0 {
        let reference = LadderPropagator::new(&build_ladder(n, 0.0)?)?;
        let search = TimeGrid::horizon(4.0 + 2.0 * (n as f64).ln(), grid.dt())?;
        let t0 = reference.first_crossing(&search);
        results["lambda_zero_break_time"] = json!(t0);
        results["predicted_break_time"] = json!(t0.map(|t| turnover_predictions(lambda, t)));
    }
    Ok(PointOutput {
        results,
        trajectories: vec![(String::new(), traj)],
    })
}

fn meanfield(p: &Parameters, grid: &TimeGrid) -> Result<PointOutput> {
    let seed = Complex64::from_polar(p.f64("seed"), p.f64("seed_phase"));
    let traj = run_single_mode(p.f64("n"), seed, p.f64("lambda"), grid)?;
    Ok(PointOutput {
        results: json!({
            "break_time": first_zero_crossing(&traj),
            "min_zeta": traj.min_zeta(),
            "audit_max_abs": audit_maxima(&traj),
        }),
        trajectories: vec![(String::new(), traj)],
    })
}

fn isotropic(p: &Parameters, grid: &TimeGrid) -> Result<PointOutput> {
    let sampling = match p.text("sampling") {
        "random" => Sampling::Random,
        _ => Sampling::Fibonacci,
    };
    let rng_seed = u64::try_from(p.int("rng_seed"))
        .map_err(|_| Error::param("rng_seed must be non-negative"))?;
    let report = beam_vs_isotropic_report(
        p.f64("n"),
        p.count("m")?,
        Complex64::new(p.f64("seed"), 0.0),
        grid,
        sampling,
        rng_seed,
    )?;
    let mut results = serde_json::to_value(&report)?;
    results["audit_max_abs"] = json!({
        "beams": audit_maxima(&report.beams),
        "isotropic": audit_maxima(&report.isotropic),
    });
    Ok(PointOutput {
        results,
        trajectories: vec![
            ("beams".to_string(), report.beams),
            ("isotropic".to_string(), report.isotropic),
        ],
    })
}

fn stability(p: &Parameters, grid: &TimeGrid) -> Result<PointOutput> {
    let lambda = p.f64("lambda");
    let report = analyze_lambda(lambda)?;
    let measured = growth_rate_empirical(
        lambda,
        Complex64::new(p.f64("growth_seed"), 0.0),
        grid.t_end(),
        grid.dt(),
    )?;
    Ok(PointOutput {
        results: json!({
            "report": report,
            "classification": report.classification,
            "empirical": measured,
        }),
        trajectories: Vec::new(),
    })
}

fn estimate(p: &Parameters) -> Result<PointOutput> {
    let ctx = NaturalUnitContext::default();
    let scenario = MergerScenario::new(p.f64("luminosity_erg_per_s"), p.f64("frequency_hz"))?;
    let report = feasibility_report(&scenario, &ctx)?;
    let mut results = json!({
        "report": report,
        "verdict": report.verdict(),
    });
    let density = p.opt_f64("density_mev3");
    let duration = p.opt_f64("duration_inv_mev");
    let energy = p.opt_f64("photon_energy_mev");
    if density.is_some() || duration.is_some() || energy.is_some() {
        let n = density.map_or(report.density.value, |v| Quantity::new(v, Unit::DENSITY));
        let t = match duration {
            Some(v) => Quantity::new(v, Unit::INV_MEV),
            None => diameter_crossing_time(scenario.frequency, &ctx)?,
        };
        let e = match energy {
            Some(v) => Quantity::new(v, Unit::MEV),
            None => graviton_energy(scenario.frequency, &ctx)?,
        };
        results["overrides"] = json!({
            "xi": xi_figure_of_merit(n, t, &ctx)?,
            "blocking": blocking_threshold(n, e, &ctx)?,
        });
    }
    Ok(PointOutput {
        results,
        trajectories: Vec::new(),
    })
}

/// Cross-run summary for sweeps: fits and classifications.
pub fn aggregate(config: &RunConfig, points: &[Parameters], outputs: &[PointOutput]) -> Value {
    let Some(sweep) = &config.sweep else {
        return Value::Null;
    };
    let axis: Vec<f64> = points
        .iter()
        .map(|p| p.opt_f64(&sweep.name).unwrap_or(f64::NAN))
        .collect();
    match config.experiment {
        Experiment::Stability => json!({
            "lambda": axis,
            "classifications": outputs.iter().map(|o| o.results["classification"].clone()).collect::<Vec<_>>(),
        }),
        Experiment::Quantum if sweep.name == "n" => {
            let pairs = crossings(&axis, outputs);
            let fit = fit_log_scaling(&pairs).ok();
            let through_origin = {
                let (sxy, sxx) = pairs.iter().fold((0.0, 0.0), |(a, b), &(n, t)| {
                    (a + n.ln() * t, b + n.ln() * n.ln())
                });
                (sxx > 0.0).then(|| sxy / sxx)
            };
            json!({
                "break_times": pairs,
                "log_fit": fit,
                "through_origin_coefficient": through_origin,
            })
        }
        Experiment::Seeded if sweep.name == "seed" => {
            let pairs = crossings(&axis, outputs);
            let xs: Vec<f64> = pairs.iter().map(|(s, _)| (1.0 / (s * s)).ln()).collect();
            let ys: Vec<f64> = pairs.iter().map(|&(_, t)| t).collect();
            json!({
                "break_times": pairs,
                "fit_vs_log_inverse_seed_squared": fit_linear(&xs, &ys).ok(),
            })
        }
        _ => json!({
            "axis": sweep.name,
            "break_times": outputs.iter().map(|o| o.results.get("break_time").cloned().unwrap_or(Value::Null)).collect::<Vec<_>>(),
        }),
    }
}

fn crossings(axis: &[f64], outputs: &[PointOutput]) -> Vec<(f64, f64)> {
    axis.iter()
        .zip(outputs)
        .filter_map(|(&x, o)| o.results["break_time"].as_f64().map(|t| (x, t)))
        .collect()
}
