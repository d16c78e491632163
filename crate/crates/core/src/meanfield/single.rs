use num_complex::Complex64;

use super::BlochMode;
use crate::error::{Error, Result};
use crate::numerics::{integrate_with, OdeState, TimeGrid, Trajectory};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Time derivatives of the single-mode variables, in units of `g/V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeVelocities {
    pub sigma_plus: Complex64,
    pub tau_plus: Complex64,
    pub sigma3: f64,
    pub tau3: f64,
}

/// Right-hand side of the single-mode equations:
///
/// ```text
/// i σ̇⁺ = σ³ τ⁺ − λ τ³ σ⁺
/// i τ̇⁺ = τ³ σ⁺ − λ σ³ τ⁺
/// i σ̇³ = 2 (σ⁺ τ⁻ − σ⁻ τ⁺),   τ̇³ = −σ̇³
/// ```
pub fn single_mode_derivs(sigma: &BlochMode, tau: &BlochMode, lambda: f64) -> ModeVelocities {
    let (sp, tp) = (sigma.s_plus, tau.s_plus);
    let (s3, t3) = (sigma.s3, tau.s3);
    let d_sigma3 = 4.0 * (sp * tp.conj()).im;
    ModeVelocities {
        sigma_plus: -I * (tp * s3 - sp * (lambda * t3)),
        tau_plus: -I * (sp * t3 - tp * (lambda * s3)),
        sigma3: d_sigma3,
        tau3: -d_sigma3,
    }
}

/// Packed single-mode state for the integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleModeState {
    pub sigma_plus: Complex64,
    pub tau_plus: Complex64,
    pub sigma3: f64,
    pub tau3: f64,
}

impl OdeState for SingleModeState {
    fn axpy(&mut self, h: f64, o: &Self) {
        self.sigma_plus += o.sigma_plus * h;
        self.tau_plus += o.tau_plus * h;
        self.sigma3 += h * o.sigma3;
        self.tau3 += h * o.tau3;
    }

    fn all_finite(&self) -> bool {
        self.sigma_plus.all_finite()
            && self.tau_plus.all_finite()
            && self.sigma3.is_finite()
            && self.tau3.is_finite()
    }
}

impl SingleModeState {
    fn modes(&self) -> (BlochMode, BlochMode) {
        (
            BlochMode {
                s_plus: self.sigma_plus,
                s3: self.sigma3,
                direction: [0.0, 0.0, 1.0],
                cloud: super::Cloud::A,
            },
            BlochMode {
                s_plus: self.tau_plus,
                s3: self.tau3,
                direction: [0.0, 0.0, -1.0],
                cloud: super::Cloud::B,
            },
        )
    }

    /// Initial state with spin length `n` on each side and the given
    /// transverse components.
    pub fn seeded(n: f64, sigma_plus: Complex64, tau_plus: Complex64) -> Result<Self> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::param(format!("occupation must be positive, got {n}")));
        }
        let longitudinal = |sp: Complex64| {
            let rest = n * n - 4.0 * sp.norm_sqr();
            if rest < 0.0 || !rest.is_finite() {
                Err(Error::param(format!(
                    "seed |{sp}| exceeds the spin length {n}/2"
                )))
            } else {
                Ok(rest.sqrt())
            }
        };
        Ok(Self {
            sigma_plus,
            tau_plus,
            sigma3: longitudinal(sigma_plus)?,
            tau3: -longitudinal(tau_plus)?,
        })
    }

    /// `2 Re(σ⁺ τ̄⁺) + ½ λ σ³ τ³`
    pub fn energy(&self, lambda: f64) -> f64 {
        2.0 * (self.sigma_plus * self.tau_plus.conj()).re + 0.5 * lambda * self.sigma3 * self.tau3
    }
}

/// Transverse seed `ε·sqrt(n/2)`: `ε` counts units of the symmetrized quantum
/// fluctuation of σ⁺ in the all-graviton state.
pub fn initial_seed_amplitude(n: f64, seed: Complex64) -> Complex64 {
    seed * (0.5 * n).sqrt()
}

/// Single-mode run with σ⁺(0) = τ⁺(0) = ε·sqrt(n/2).
pub fn run_single_mode(n: f64, seed: Complex64, lambda: f64, grid: &TimeGrid) -> Result<Trajectory> {
    let amp = initial_seed_amplitude(n, seed);
    run_single_mode_raw(SingleModeState::seeded(n, amp, amp)?, n, lambda, grid)
        .map(|(traj, _)| traj)
}

/// Evolve an explicit initial state in time units of `(n g)^-1`.
///
/// Returns the trajectory (ζ = σ³/n) and `|σ⁺(τ)|` at every grid point.
pub fn run_single_mode_raw(
    y0: SingleModeState,
    n: f64,
    lambda: f64,
    grid: &TimeGrid,
) -> Result<(Trajectory, Vec<f64>)> {
    if !lambda.is_finite() {
        return Err(Error::param("lambda must be finite"));
    }
    let inv_n = 1.0 / n;
    let deriv = |_: f64, y: &SingleModeState| {
        let (s, t) = y.modes();
        let v = single_mode_derivs(&s, &t, lambda);
        SingleModeState {
            sigma_plus: v.sigma_plus * inv_n,
            tau_plus: v.tau_plus * inv_n,
            sigma3: v.sigma3 * inv_n,
            tau3: v.tau3 * inv_n,
        }
    };
    let (s0, t0) = y0.modes();
    let (len_s0, len_t0) = (s0.spin_length(), t0.spin_length());
    let total0 = y0.sigma3 + y0.tau3;
    let e0 = y0.energy(lambda);
    let escale = n * n;

    let cap = grid.len();
    let mut times = Vec::with_capacity(cap);
    let mut zeta = Vec::with_capacity(cap);
    let mut len_s = Vec::with_capacity(cap);
    let mut len_t = Vec::with_capacity(cap);
    let mut total = Vec::with_capacity(cap);
    let mut energy = Vec::with_capacity(cap);
    let mut amp = Vec::with_capacity(cap);
    integrate_with(deriv, y0, grid, |_, t, y| {
        let (s, tm) = y.modes();
        times.push(t);
        zeta.push(y.sigma3 * inv_n);
        len_s.push(s.spin_length() / len_s0 - 1.0);
        len_t.push(tm.spin_length() / len_t0 - 1.0);
        total.push((y.sigma3 + y.tau3 - total0) * inv_n);
        energy.push((y.energy(lambda) - e0) / escale);
        amp.push(y.sigma_plus.norm());
    })?;
    let traj = Trajectory::new(times, zeta)?
        .with_audit("spin_length_drift_a", len_s)?
        .with_audit("spin_length_drift_b", len_t)?
        .with_audit("sigma3_plus_tau3_drift", total)?
        .with_audit("energy_drift", energy)?;
    Ok((traj, amp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meanfield::Cloud;

    fn mode(sp: Complex64, s3: f64, cloud: Cloud) -> BlochMode {
        BlochMode {
            s_plus: sp,
            s3,
            direction: [0.0, 0.0, 1.0],
            cloud,
        }
    }

    #[test]
    fn unseeded_equilibrium() {
        let zero = Complex64::new(0.0, 0.0);
        let v = single_mode_derivs(&mode(zero, 512.0, Cloud::A), &mode(zero, -512.0, Cloud::B), 0.0);
        assert_eq!(v.sigma_plus, zero);
        assert_eq!(v.tau_plus, zero);
        assert_eq!(v.sigma3, 0.0);
        assert_eq!(v.tau3, 0.0);
    }

    #[test]
    fn seed_drives_tau() {
        let n = 512.0;
        let delta = Complex64::new(1e-3, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let v = single_mode_derivs(&mode(delta, n, Cloud::A), &mode(zero, -n, Cloud::B), 0.0);
        // i τ̇⁺ = -N δ
        let i_tau_dot = I * v.tau_plus;
        assert!((i_tau_dot - Complex64::new(-n * 1e-3, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_seed_is_static() {
        let grid = TimeGrid::horizon(10.0, 1e-2).unwrap();
        let traj = run_single_mode(512.0, Complex64::new(0.0, 0.0), 0.0, &grid).unwrap();
        assert!(traj.zeta().iter().all(|&z| z == 1.0));
    }

    #[test]
    fn oversized_seed_rejected() {
        let grid = TimeGrid::horizon(1.0, 1e-2).unwrap();
        assert!(run_single_mode(4.0, Complex64::new(10.0, 0.0), 0.0, &grid).is_err());
        assert!(run_single_mode(0.0, Complex64::new(0.0, 0.0), 0.0, &grid).is_err());
    }

    #[test]
    fn conserved_quantities() {
        let grid = TimeGrid::horizon(20.0, 1e-3).unwrap();
        for lambda in [0.0, 0.5, 1.5] {
            let traj = run_single_mode(512.0, Complex64::new(1.0, 0.0), lambda, &grid).unwrap();
            assert!(traj.audit("spin_length_drift_a").unwrap().max_abs() < 1e-7);
            assert!(traj.audit("spin_length_drift_b").unwrap().max_abs() < 1e-7);
            assert!(traj.audit("sigma3_plus_tau3_drift").unwrap().max_abs() < 1e-8);
            assert!(traj.audit("energy_drift").unwrap().max_abs() < 1e-8);
        }
    }
}
