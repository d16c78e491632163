use serde::Serialize;

use super::trajectory::{first_zero_crossing, Trajectory};

/// How closely an approximate ζ(t) follows an exact one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrackingComparison {
    pub exact_crossing: Option<f64>,
    pub approx_crossing: Option<f64>,
    /// max |ζ_exact − ζ_approx| over exact samples up to the exact crossing.
    pub max_abs_diff: f64,
    /// First trough of the approximate curve.
    pub half_period_end: Option<f64>,
    /// Half the peak-to-peak swing of each curve after `half_period_end`.
    pub exact_amplitude_after: Option<f64>,
    pub approx_amplitude_after: Option<f64>,
}

fn interpolate(traj: &Trajectory, t: f64) -> f64 {
    let (ts, zs) = (traj.times(), traj.zeta());
    match ts.partition_point(|&x| x < t) {
        0 => zs[0],
        k if k >= ts.len() => zs[ts.len() - 1],
        k => {
            let (t0, t1) = (ts[k - 1], ts[k]);
            zs[k - 1] + (zs[k] - zs[k - 1]) * (t - t0) / (t1 - t0)
        }
    }
}

fn first_trough(traj: &Trajectory) -> Option<f64> {
    let z = traj.zeta();
    (1..z.len().saturating_sub(1))
        .find(|&k| z[k] <= z[k - 1] && z[k] < z[k + 1])
        .map(|k| traj.times()[k])
}

fn amplitude_after(traj: &Trajectory, t: f64) -> Option<f64> {
    let tail: Vec<f64> = traj
        .times()
        .iter()
        .zip(traj.zeta())
        .filter(|(&s, _)| s >= t)
        .map(|(_, &z)| z)
        .collect();
    if tail.len() < 2 {
        return None;
    }
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    Some(0.5 * (hi - lo))
}

/// Compare an approximate trajectory against an exact one.
///
/// The approximate curve is linearly interpolated onto the exact samples.
/// Both amplitudes are measured over the same window, which ends at the
/// shorter of the two horizons.
pub fn compare_tracking(exact: &Trajectory, approx: &Trajectory) -> TrackingComparison {
    let exact_crossing = first_zero_crossing(exact);
    let approx_crossing = first_zero_crossing(approx);
    let until = exact_crossing.unwrap_or(f64::INFINITY);
    let max_abs_diff = exact
        .times()
        .iter()
        .zip(exact.zeta())
        .take_while(|(&t, _)| t <= until)
        .map(|(&t, &z)| (z - interpolate(approx, t)).abs())
        .fold(0.0, f64::max);
    let half_period_end = first_trough(approx);
    let horizon = exact
        .times()
        .last()
        .copied()
        .unwrap_or(0.0)
        .min(approx.times().last().copied().unwrap_or(0.0));
    let clip = |traj: &Trajectory, t: f64| {
        let times: Vec<f64> = traj.times().iter().copied().take_while(|&s| s <= horizon).collect();
        let zeta = traj.zeta()[..times.len()].to_vec();
        Trajectory::new(times, zeta).ok().and_then(|c| amplitude_after(&c, t))
    };
    TrackingComparison {
        exact_crossing,
        approx_crossing,
        max_abs_diff,
        half_period_end,
        exact_amplitude_after: half_period_end.and_then(|t| clip(exact, t)),
        approx_amplitude_after: half_period_end.and_then(|t| clip(approx, t)),
    }
}
