//! Mean-field evolution of the flavor bilinears.
//!
//! Expectation values `σ⁺, σ³` (cloud A) and `τ⁺, τ³` (cloud B) follow the
//! Heisenberg equations of `H = Σ g_ij (σ⁺_i τ⁻_j + σ⁻_i τ⁺_j + ½ λ σ³_i τ³_j)`
//! with products of operators replaced by products of expectations.

mod multimode;
mod single;
mod sphere;

pub use multimode::{
    beam_vs_isotropic_report, run_multimode, AngularEnsemble, BeamIsotropicReport, KernelKind,
};
pub use single::{
    initial_seed_amplitude, run_single_mode, run_single_mode_raw, single_mode_derivs,
    ModeVelocities, SingleModeState,
};
pub use sphere::{isotropic_sample, random_sphere_sample, Sampling};

use num_complex::Complex64;
use serde::Serialize;

/// Which cloud a mode belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cloud {
    /// σ variables, initially pure graviton (σ³ > 0).
    A,
    /// τ variables, initially pure graviton (τ³ < 0).
    B,
}

/// Mean-field variables of one momentum mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochMode {
    pub s_plus: Complex64,
    pub s3: f64,
    pub direction: [f64; 3],
    pub cloud: Cloud,
}

impl BlochMode {
    /// `sqrt(s3² + 4|s⁺|²)`, conserved by the mean-field flow.
    pub fn spin_length(&self) -> f64 {
        (self.s3 * self.s3 + 4.0 * self.s_plus.norm_sqr()).sqrt()
    }
}
