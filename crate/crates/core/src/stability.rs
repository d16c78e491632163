//! Linear stability of the single-mode equilibrium σ³ = n, τ³ = −n.
//!
//! Linearizing the mean-field equations about the unconverted state gives
//! `i d/dτ (σ⁺, τ⁺) = W (σ⁺, τ⁺)` with `W = [[λ, 1], [−1, −λ]]` up to a
//! similarity transform. Its eigenvalues satisfy `μ² = λ² − 1`, so
//! perturbations grow like `exp(√(1−λ²) τ)` when |λ| < 1.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::meanfield::{run_single_mode_raw, SingleModeState};
use crate::numerics::{fit_linear, TimeGrid};

/// Window of amplification used to fit the exponential rate.
pub const GROWTH_WINDOW: (f64, f64) = (10.0, 1000.0);
pub const DEFAULT_GROWTH_SEED: f64 = 1e-7;
pub const DEFAULT_GROWTH_HORIZON: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Unstable,
    Marginal,
    Stable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    pub lambda: f64,
    pub eigenvalues: [Complex64; 2],
    /// Exponential rate in units of `g n`.
    pub growth_rate: f64,
    pub classification: Classification,
}

pub fn analyze_lambda(lambda: f64) -> Result<StabilityReport> {
    if !lambda.is_finite() {
        return Err(Error::param("lambda must be finite"));
    }
    let disc = lambda * lambda - 1.0;
    let (eigenvalues, growth_rate, classification) = if lambda.abs() < 1.0 {
        let w = (-disc).sqrt();
        (
            [Complex64::new(0.0, w), Complex64::new(0.0, -w)],
            w,
            Classification::Unstable,
        )
    } else if lambda.abs() == 1.0 {
        ([Complex64::new(0.0, 0.0); 2], 0.0, Classification::Marginal)
    } else {
        let w = disc.sqrt();
        (
            [Complex64::new(w, 0.0), Complex64::new(-w, 0.0)],
            0.0,
            Classification::Stable,
        )
    };
    Ok(StabilityReport {
        lambda,
        eigenvalues,
        growth_rate,
        classification,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthMeasurement {
    pub lambda: f64,
    /// Fitted slope of `ln|σ⁺|`; `None` when the seed never grew through the window.
    pub rate: Option<f64>,
    pub window: Option<(f64, f64)>,
    /// Largest `|σ⁺(τ)| / |σ⁺(0)|` seen over the horizon.
    pub max_amplification: f64,
}

impl GrowthMeasurement {
    pub fn is_growing(&self) -> bool {
        self.rate.is_some()
    }
}

/// Measure the linear growth rate from a nonlinear single-mode run.
///
/// `seed` is σ⁺(0) = τ⁺(0) as a fraction of the occupation; `|seed| ≤ 1e-6`
/// keeps the fit window inside the linear regime.
pub fn growth_rate_empirical(
    lambda: f64,
    seed: Complex64,
    horizon: f64,
    dt: f64,
) -> Result<GrowthMeasurement> {
    let a0 = seed.norm();
    if !(a0 > 0.0 && a0 <= 1e-6) {
        return Err(Error::param(format!(
            "growth seed magnitude must lie in (0, 1e-6], got {a0}"
        )));
    }
    let grid = TimeGrid::horizon(horizon, dt)?;
    let y0 = SingleModeState::seeded(1.0, seed, seed)?;
    let (traj, amp) = run_single_mode_raw(y0, 1.0, lambda, &grid)?;
    let max_amplification = amp.iter().fold(0.0f64, |m, a| m.max(a / a0));

    let (lo, hi) = (GROWTH_WINDOW.0 * a0, GROWTH_WINDOW.1 * a0);
    let start = amp.iter().position(|&a| a >= lo);
    let end = amp.iter().position(|&a| a >= hi);
    let (rate, window) = match (start, end) {
        (Some(s), Some(e)) if e > s + 2 => {
            let ts = &traj.times()[s..=e];
            let logs: Vec<f64> = amp[s..=e].iter().map(|a| a.ln()).collect();
            let fit = fit_linear(ts, &logs)?;
            (Some(fit.slope), Some((ts[0], ts[ts.len() - 1])))
        }
        _ => (None, None),
    };
    Ok(GrowthMeasurement {
        lambda,
        rate,
        window,
        max_amplification,
    })
}

/// The two competing forms for how λ stretches the λ = 0 turnover time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurnoverPredictions {
    /// `T₀ / (1 − λ)`
    pub inverse_linear: Option<f64>,
    /// `T₀ / √(1 − λ²)`, from the linear growth rate.
    pub inverse_growth_rate: Option<f64>,
}

pub fn turnover_predictions(lambda: f64, t0: f64) -> TurnoverPredictions {
    let inverse_linear = (lambda < 1.0).then(|| t0 / (1.0 - lambda));
    let inverse_growth_rate = (lambda.abs() < 1.0).then(|| t0 / (1.0 - lambda * lambda).sqrt());
    TurnoverPredictions {
        inverse_linear,
        inverse_growth_rate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_zero() {
        let r = analyze_lambda(0.0).unwrap();
        assert_eq!(r.classification, Classification::Unstable);
        assert_eq!(r.growth_rate, 1.0);
        assert_eq!(r.eigenvalues[0], Complex64::new(0.0, 1.0));
        assert_eq!(r.eigenvalues[1], Complex64::new(0.0, -1.0));
    }

    #[test]
    fn lambda_one_is_marginal() {
        let r = analyze_lambda(1.0).unwrap();
        assert_eq!(r.classification, Classification::Marginal);
        assert_eq!(r.growth_rate, 0.0);
        assert_eq!(r.eigenvalues, [Complex64::new(0.0, 0.0); 2]);
    }

    #[test]
    fn lambda_two_is_stable() {
        let r = analyze_lambda(2.0).unwrap();
        assert_eq!(r.classification, Classification::Stable);
        assert!((r.eigenvalues[0].re - 3f64.sqrt()).abs() < 1e-15);
        assert!((r.eigenvalues[1].re + 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.growth_rate, 0.0);
    }

    #[test]
    fn eigenvalues_solve_characteristic_polynomial() {
        for lambda in [-3.0, -1.0, -0.4, 0.0, 0.3, 0.999, 1.0, 1.7] {
            let r = analyze_lambda(lambda).unwrap();
            for mu in r.eigenvalues {
                // det(W − μ) = μ² − λ² + 1
                let p = mu * mu - Complex64::new(lambda * lambda - 1.0, 0.0);
                assert!(p.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn empirical_rate_lambda_zero() {
        let m = growth_rate_empirical(0.0, Complex64::new(1e-7, 0.0), 40.0, 1e-3).unwrap();
        assert!((m.rate.unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn stable_seed_stays_small() {
        let m = growth_rate_empirical(1.5, Complex64::new(1e-7, 0.0), 40.0, 1e-3).unwrap();
        assert!(!m.is_growing());
        assert!(m.max_amplification < 3.0, "{}", m.max_amplification);
    }

    #[test]
    fn seed_bounds() {
        assert!(growth_rate_empirical(0.0, Complex64::new(1e-3, 0.0), 10.0, 1e-3).is_err());
        assert!(growth_rate_empirical(0.0, Complex64::new(0.0, 0.0), 10.0, 1e-3).is_err());
    }

    #[test]
    fn predictions() {
        let p = turnover_predictions(0.5, 2.0);
        assert_eq!(p.inverse_linear, Some(4.0));
        assert!((p.inverse_growth_rate.unwrap() - 2.0 / 0.75f64.sqrt()).abs() < 1e-15);
        let p = turnover_predictions(1.0, 2.0);
        assert_eq!(p.inverse_linear, None);
        assert_eq!(p.inverse_growth_rate, None);
    }
}
