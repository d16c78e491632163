use serde::Serialize;

use crate::error::{Error, Result};

/// Allowed excursion of |ζ| above 1 from roundoff.
pub const ZETA_TOLERANCE: f64 = 1e-6;

/// A named conserved-quantity series sampled alongside ζ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditChannel {
    pub name: String,
    pub values: Vec<f64>,
}

impl AuditChannel {
    /// Largest absolute value in the channel.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Time series of the flavor diagnostic ζ(t) with audit channels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    times: Vec<f64>,
    zeta: Vec<f64>,
    audits: Vec<AuditChannel>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, zeta: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::param("trajectory must have at least one sample"));
        }
        if times.len() != zeta.len() {
            return Err(Error::param(format!(
                "trajectory has {} times but {} zeta samples",
                times.len(),
                zeta.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("trajectory times must be strictly increasing"));
        }
        if let Some((k, z)) = zeta
            .iter()
            .enumerate()
            .find(|(_, z)| !z.is_finite() || z.abs() > 1.0 + ZETA_TOLERANCE)
        {
            return Err(Error::param(format!("zeta[{k}] = {z} is outside [-1, 1]")));
        }
        Ok(Self {
            times,
            zeta,
            audits: Vec::new(),
        })
    }

    pub fn with_audit(mut self, name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.len() != self.times.len() {
            return Err(Error::param(format!(
                "audit channel {name} has {} samples, expected {}",
                values.len(),
                self.times.len()
            )));
        }
        self.audits.push(AuditChannel { name, values });
        Ok(self)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn zeta(&self) -> &[f64] {
        &self.zeta
    }

    pub fn audits(&self) -> &[AuditChannel] {
        &self.audits
    }

    pub fn audit(&self, name: &str) -> Option<&AuditChannel> {
        self.audits.iter().find(|a| a.name == name)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn min_zeta(&self) -> f64 {
        self.zeta.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Keep every `stride`-th sample (and always the last one).
    pub fn decimated(&self, stride: usize) -> Self {
        if stride <= 1 {
            return self.clone();
        }
        let n = self.len();
        let keep: Vec<usize> = (0..n)
            .filter(|k| k % stride == 0 || *k == n - 1)
            .collect();
        let pick = |v: &[f64]| keep.iter().map(|&k| v[k]).collect::<Vec<_>>();
        Self {
            times: pick(&self.times),
            zeta: pick(&self.zeta),
            audits: self
                .audits
                .iter()
                .map(|a| AuditChannel {
                    name: a.name.clone(),
                    values: pick(&a.values),
                })
                .collect(),
        }
    }
}

/// First time a sampled series crosses zero.
///
/// A sample that is exactly zero is returned as is; otherwise the crossing
/// is linearly interpolated between the two bracketing samples.
pub fn zero_crossing(times: &[f64], values: &[f64]) -> Option<f64> {
    for k in 0..values.len().min(times.len()) {
        if values[k] == 0.0 {
            return Some(times[k]);
        }
        if k > 0 && values[k - 1].signum() != values[k].signum() {
            let (t0, t1) = (times[k - 1], times[k]);
            let (v0, v1) = (values[k - 1], values[k]);
            return Some(t0 + (t1 - t0) * v0 / (v0 - v1));
        }
    }
    None
}

/// First time ζ changes sign, if it does.
pub fn first_zero_crossing(traj: &Trajectory) -> Option<f64> {
    zero_crossing(traj.times(), traj.zeta())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sampled(f: impl Fn(f64) -> f64, t_end: f64, dt: f64) -> Trajectory {
        let n = (t_end / dt).round() as usize;
        let times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
        let zeta = times.iter().map(|&t| f(t)).collect();
        Trajectory::new(times, zeta).unwrap()
    }

    #[test]
    fn cosine_root() {
        let traj = sampled(f64::cos, 2.0, 1e-3);
        let t = first_zero_crossing(&traj).unwrap();
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-3);
    }

    #[test]
    fn constant_has_no_crossing() {
        let traj = sampled(|_| 1.0, 2.0, 1e-2);
        assert_eq!(first_zero_crossing(&traj), None);
    }

    #[test]
    fn exact_zero_takes_that_sample() {
        let traj = Trajectory::new(vec![0.0, 1.0, 2.0, 3.0], vec![1.0, 0.0, -1.0, -1.0]).unwrap();
        assert_eq!(first_zero_crossing(&traj), Some(1.0));
    }

    #[test]
    fn rejects_invalid() {
        assert!(Trajectory::new(vec![], vec![]).is_err());
        assert!(Trajectory::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(Trajectory::new(vec![0.0], vec![1.1]).is_err());
        assert!(Trajectory::new(vec![0.0, 1.0], vec![1.0]).is_err());
        let t = Trajectory::new(vec![0.0, 1.0], vec![1.0, 0.5]).unwrap();
        assert!(t.with_audit("x", vec![1.0]).is_err());
    }

    #[test]
    fn decimation_keeps_endpoints() {
        let traj = sampled(f64::cos, 1.0, 0.1);
        let d = traj.decimated(3);
        assert_eq!(d.times().first(), Some(&0.0));
        assert_eq!(d.times().last(), traj.times().last());
        assert_eq!(d.len(), 5);
    }
}
