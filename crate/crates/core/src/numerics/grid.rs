use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default fixed step for the ODE solvers.
pub const DEFAULT_DT: f64 = 1e-3;

/// Uniform sampling of `[t_start, t_end]` with step `dt`.
///
/// When the span is not a whole number of steps the final step is shortened
/// so that the last sample lands exactly on `t_end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    dt: f64,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, dt: f64) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite() && dt.is_finite()) {
            return Err(Error::param("time grid bounds must be finite"));
        }
        if t_end <= t_start {
            return Err(Error::param(format!(
                "t_end ({t_end}) must exceed t_start ({t_start})"
            )));
        }
        if dt <= 0.0 || dt > t_end - t_start {
            return Err(Error::param(format!(
                "dt ({dt}) must be positive and no larger than the span {}",
                t_end - t_start
            )));
        }
        Ok(Self { t_start, t_end, dt })
    }

    /// Grid on `[0, horizon]`.
    pub fn horizon(horizon: f64, dt: f64) -> Result<Self> {
        Self::new(0.0, horizon, dt)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of steps between the first and last sample.
    pub fn steps(&self) -> usize {
        let ratio = (self.t_end - self.t_start) / self.dt;
        // absorb roundoff so that e.g. 1.0 / 1e-3 gives exactly 1000 steps
        let nearest = ratio.round();
        if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
            nearest as usize
        } else {
            ratio.ceil() as usize
        }
    }

    pub fn len(&self) -> usize {
        self.steps() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, k: usize) -> f64 {
        if k >= self.steps() {
            self.t_end
        } else {
            self.t_start + k as f64 * self.dt
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.time(k)).collect()
    }

    /// Same span with the step divided by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            dt: self.dt / factor.max(1) as f64,
            ..*self
        }
    }
}
