use rayon::prelude::*;
use serde::Serialize;

use super::ladder::{build_ladder, LadderPropagator};
use crate::error::{Error, Result};
use crate::numerics::{first_zero_crossing, fit_log_scaling, ScalingFit, TimeGrid};

/// Probe horizon in multiples of the λ = 0 break time.
pub const TURNOVER_HORIZON_FACTOR: f64 = 5.0;

impl LadderPropagator {
    /// First ζ = 0 crossing on `grid`, stopping as soon as it is found.
    pub fn first_crossing(&self, grid: &TimeGrid) -> Option<f64> {
        let mut prev: Option<(f64, f64)> = None;
        for t in grid.times() {
            let z = self.state_at(t).zeta();
            if z == 0.0 {
                return Some(t);
            }
            if let Some((t0, z0)) = prev {
                if z0.signum() != z.signum() {
                    return Some(t0 + (t - t0) * z0 / (z0 - z));
                }
            }
            prev = Some((t, z));
        }
        None
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BreakTimeScan {
    pub lambda: f64,
    /// `(N, first crossing)` in input order.
    pub points: Vec<(usize, Option<f64>)>,
    /// Counts whose run never crossed within the grid.
    pub excluded: Vec<usize>,
    /// `None` when fewer than three distinct counts crossed.
    pub fit: Option<ScalingFit>,
}

/// Break time against `ln N` for each pair count.
pub fn break_time_scan(ns: &[usize], lambda: f64, grid: &TimeGrid) -> Result<BreakTimeScan> {
    if let Some(n) = ns.iter().find(|&&n| n < 2) {
        return Err(Error::param(format!("break-time scan needs N >= 2, got {n}")));
    }
    let points: Vec<(usize, Option<f64>)> = ns
        .par_iter()
        .map(|&n| {
            let prop = LadderPropagator::new(&build_ladder(n, lambda)?)?;
            Ok((n, prop.first_crossing(grid)))
        })
        .collect::<Result<_>>()?;
    let excluded = points
        .iter()
        .filter(|(_, t)| t.is_none())
        .map(|(n, _)| *n)
        .collect();
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|(n, t)| t.map(|t| (*n as f64, t)))
        .collect();
    let fit = fit_log_scaling(&usable).ok();
    Ok(BreakTimeScan {
        lambda,
        points,
        excluded,
        fit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Turnover {
    Turnover { time: f64 },
    None,
}

impl Turnover {
    pub fn time(&self) -> Option<f64> {
        match self {
            Turnover::Turnover { time } => Some(*time),
            Turnover::None => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TurnoverProbe {
    pub lambda: f64,
    pub outcome: Turnover,
    pub min_zeta: f64,
    pub horizon: f64,
}

/// Classify each λ by whether ζ crosses zero within
/// [`TURNOVER_HORIZON_FACTOR`] times the λ = 0 break time.
pub fn lambda_turnover_probe(n: usize, lambdas: &[f64], dt: f64) -> Result<Vec<TurnoverProbe>> {
    if n < 2 {
        return Err(Error::param(format!("turnover probe needs N >= 2, got {n}")));
    }
    let reference = LadderPropagator::new(&build_ladder(n, 0.0)?)?;
    // the λ = 0 crossing always lies well inside 4 + 2 ln N
    let search = TimeGrid::horizon(4.0 + 2.0 * (n as f64).ln(), dt)?;
    let t0 = reference.first_crossing(&search).ok_or_else(|| {
        Error::param(format!("no lambda = 0 crossing found for N = {n}"))
    })?;
    let grid = TimeGrid::horizon(TURNOVER_HORIZON_FACTOR * t0, dt)?;
    lambdas
        .par_iter()
        .map(|&lambda| {
            let traj = super::evolve_ladder(&build_ladder(n, lambda)?, &grid)?;
            let outcome = match first_zero_crossing(&traj) {
                Some(time) => Turnover::Turnover { time },
                None => Turnover::None,
            };
            Ok(TurnoverProbe {
                lambda,
                outcome,
                min_zeta: traj.min_zeta(),
                horizon: grid.t_end(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_counts_are_deterministic() {
        let grid = TimeGrid::horizon(10.0, 0.01).unwrap();
        let scan = break_time_scan(&[16, 16], 0.0, &grid).unwrap();
        assert_eq!(scan.points[0].1, scan.points[1].1);
        assert!(scan.points[0].1.is_some());
        assert!(scan.fit.is_none());
    }

    #[test]
    fn early_stop_matches_full_trajectory() {
        let h = build_ladder(64, 0.0).unwrap();
        let grid = TimeGrid::horizon(8.0, 0.01).unwrap();
        let full = super::super::evolve_ladder(&h, &grid).unwrap();
        let early = LadderPropagator::new(&h).unwrap().first_crossing(&grid);
        assert_eq!(first_zero_crossing(&full), early);
    }

    #[test]
    fn rejects_single_pair() {
        let grid = TimeGrid::horizon(1.0, 0.1).unwrap();
        assert!(break_time_scan(&[1, 16], 0.0, &grid).is_err());
        assert!(lambda_turnover_probe(1, &[0.0], 0.01).is_err());
    }
}
