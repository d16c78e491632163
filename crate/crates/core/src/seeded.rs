//! Seeded classical model: two clashing beams whose mixing angles evolve under
//!
//! ```text
//! dθ_A/dτ = r_B sin 2θ_B,    dθ_B/dτ = r_A sin 2θ_A
//! ```
//!
//! with `r_X = n_X / n̄` and `n̄` the mean occupation, so equal beams have unit
//! rates. ζ = cos 2θ_A is the graviton minus photon probability on beam A.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{first_zero_crossing, integrate_with, TimeGrid, Trajectory};

/// Horizon that covers every seed of the standard ladder.
pub const DEFAULT_HORIZON: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingAngles {
    pub theta_a: f64,
    pub theta_b: f64,
}

impl MixingAngles {
    pub fn new(theta_a: f64, theta_b: f64) -> Self {
        Self { theta_a, theta_b }
    }
}

/// Occupations and initial angles of the two beams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamPair {
    pub n_a: f64,
    pub n_b: f64,
    pub seed_a: f64,
    pub seed_b: f64,
}

impl BeamPair {
    pub fn new(n_a: f64, n_b: f64, seed_a: f64, seed_b: f64) -> Result<Self> {
        let beams = Self {
            n_a,
            n_b,
            seed_a,
            seed_b,
        };
        beams.validate()?;
        Ok(beams)
    }

    /// Equal beams sharing one seed angle.
    pub fn symmetric(seed: f64) -> Result<Self> {
        Self::new(1.0, 1.0, seed, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_a > 0.0 && self.n_b > 0.0) || !self.n_a.is_finite() || !self.n_b.is_finite() {
            return Err(Error::param(format!(
                "beam occupations must be positive, got ({}, {})",
                self.n_a, self.n_b
            )));
        }
        if !(self.seed_a >= 0.0 && self.seed_b >= 0.0)
            || !self.seed_a.is_finite()
            || !self.seed_b.is_finite()
        {
            return Err(Error::param(format!(
                "seed angles must be finite and non-negative, got ({}, {})",
                self.seed_a, self.seed_b
            )));
        }
        Ok(())
    }

    /// Normalized rates `(r_A, r_B)`.
    pub fn rates(&self) -> (f64, f64) {
        let mean = 0.5 * (self.n_a + self.n_b);
        (self.n_a / mean, self.n_b / mean)
    }

    pub fn initial_angles(&self) -> MixingAngles {
        MixingAngles::new(self.seed_a, self.seed_b)
    }
}

/// Initial angle whose photon fraction sin²ε equals `fraction`.
pub fn seed_angle_from_fraction(fraction: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction <= 0.5) {
        return Err(Error::param(format!(
            "seed photon fraction must lie in (0, 1/2], got {fraction}"
        )));
    }
    Ok(fraction.sqrt().asin())
}

/// Angle velocities `(dθ_A/dτ, dθ_B/dτ)`.
pub fn seeded_derivs(state: &MixingAngles, beams: &BeamPair) -> MixingAngles {
    let (r_a, r_b) = beams.rates();
    MixingAngles {
        theta_a: r_b * (2.0 * state.theta_b).sin(),
        theta_b: r_a * (2.0 * state.theta_a).sin(),
    }
}

/// Evolve the angles and report ζ_A with ζ_B and the conserved balance
/// `r_A cos 2θ_A − r_B cos 2θ_B` (as drift from its initial value) as audits.
pub fn run_seeded(beams: &BeamPair, grid: &TimeGrid) -> Result<Trajectory> {
    beams.validate()?;
    let (r_a, r_b) = beams.rates();
    let y0 = [beams.seed_a, beams.seed_b];
    let deriv = |_: f64, y: &[f64; 2]| {
        let v = seeded_derivs(&MixingAngles::new(y[0], y[1]), beams);
        [v.theta_a, v.theta_b]
    };
    let balance = |y: &[f64; 2]| r_a * (2.0 * y[0]).cos() - r_b * (2.0 * y[1]).cos();
    let balance0 = balance(&y0);

    let n = grid.len();
    let mut times = Vec::with_capacity(n);
    let mut zeta_a = Vec::with_capacity(n);
    let mut zeta_b = Vec::with_capacity(n);
    let mut drift = Vec::with_capacity(n);
    integrate_with(deriv, y0, grid, |_, t, y| {
        times.push(t);
        zeta_a.push((2.0 * y[0]).cos());
        zeta_b.push((2.0 * y[1]).cos());
        drift.push(balance(y) - balance0);
    })?;
    Trajectory::new(times, zeta_a)?
        .with_audit("zeta_b", zeta_b)?
        .with_audit("balance_drift", drift)
}

/// Angles sampled on the grid, for callers that need θ rather than ζ.
pub fn seeded_angles(beams: &BeamPair, grid: &TimeGrid) -> Result<Vec<MixingAngles>> {
    beams.validate()?;
    let mut out = Vec::with_capacity(grid.len());
    integrate_with(
        |_, y: &[f64; 2]| {
            let v = seeded_derivs(&MixingAngles::new(y[0], y[1]), beams);
            [v.theta_a, v.theta_b]
        },
        [beams.seed_a, beams.seed_b],
        grid,
        |_, _, y| out.push(MixingAngles::new(y[0], y[1])),
    )?;
    Ok(out)
}

/// First ζ crossing for each seed angle (applied to both beams of `template`).
pub fn break_time_vs_seed(
    template: &BeamPair,
    seeds: &[f64],
    grid: &TimeGrid,
) -> Result<Vec<(f64, Option<f64>)>> {
    if let Some(s) = seeds.iter().find(|&&s| !(s > 0.0 && s <= FRAC_PI_4)) {
        return Err(Error::param(format!("seed {s} is outside (0, pi/4]")));
    }
    seeds
        .iter()
        .map(|&seed| {
            let beams = BeamPair {
                seed_a: seed,
                seed_b: seed,
                ..*template
            };
            let traj = run_seeded(&beams, grid)?;
            Ok((seed, first_zero_crossing(&traj)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::DEFAULT_DT;

    #[test]
    fn derivs_examples() {
        let eq = BeamPair::symmetric(0.0).unwrap();
        let v = seeded_derivs(&MixingAngles::new(0.0, 0.0), &eq);
        assert_eq!((v.theta_a, v.theta_b), (0.0, 0.0));

        let v = seeded_derivs(&MixingAngles::new(FRAC_PI_4, FRAC_PI_4), &eq);
        assert!((v.theta_a - 1.0).abs() < 1e-15 && (v.theta_b - 1.0).abs() < 1e-15);

        let v = seeded_derivs(&MixingAngles::new(0.1, 0.2), &eq);
        assert!((v.theta_a - 0.389418).abs() < 1e-6);
        assert!((v.theta_b - 0.198669).abs() < 1e-6);
    }

    #[test]
    fn unseeded_is_static() {
        let grid = TimeGrid::horizon(DEFAULT_HORIZON, 0.01).unwrap();
        let traj = run_seeded(&BeamPair::symmetric(0.0).unwrap(), &grid).unwrap();
        assert!(traj.zeta().iter().all(|&z| z == 1.0));
        assert_eq!(first_zero_crossing(&traj), None);
    }

    #[test]
    fn quarter_pi_seed_starts_at_parity() {
        let grid = TimeGrid::horizon(1.0, DEFAULT_DT).unwrap();
        let out = break_time_vs_seed(&BeamPair::symmetric(0.0).unwrap(), &[FRAC_PI_4], &grid).unwrap();
        assert!(out[0].1.unwrap() < 1e-3);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(BeamPair::new(0.0, 1.0, 0.1, 0.1).is_err());
        assert!(BeamPair::new(1.0, 1.0, -0.1, 0.1).is_err());
        let grid = TimeGrid::horizon(1.0, 0.1).unwrap();
        let t = BeamPair::symmetric(0.0).unwrap();
        assert!(break_time_vs_seed(&t, &[0.0], &grid).is_err());
        assert!(break_time_vs_seed(&t, &[1.0], &grid).is_err());
        assert!(seed_angle_from_fraction(0.0).is_err());
    }

    #[test]
    fn fraction_maps_to_angle() {
        let e = seed_angle_from_fraction(1e-4).unwrap();
        assert!((e.sin().powi(2) - 1e-4).abs() < 1e-18);
    }

    #[test]
    fn balance_is_conserved() {
        let beams = BeamPair::new(2.0, 1.0, 1e-2, 3e-3).unwrap();
        let grid = TimeGrid::horizon(10.0, DEFAULT_DT).unwrap();
        let traj = run_seeded(&beams, &grid).unwrap();
        assert!(traj.audit("balance_drift").unwrap().max_abs() < 1e-9);
    }
}
