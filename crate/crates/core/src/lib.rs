//! Simulation of coherent graviton/photon flavor conversion in clashing
//! clouds, with the collective neutrino oscillation problem as its template.
//!
//! The crate has four solvers sharing one time grid, integrator and
//! trajectory type:
//!
//! * [`seeded`]: the reduced two-angle classical dynamics of seeded beams.
//! * [`quantum`]: exact evolution on the (N+1)-state collective ladder.
//! * [`meanfield`]: single-mode and angular multimode mean-field equations.
//! * [`stability`]: linear stability of the unconverted state.
//!
//! [`astro`] holds the feasibility arithmetic for a real merger and [`cli`]
//! the `flavorsim` command line driver.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod astro;
pub mod cli;
pub mod error;
pub mod meanfield;
pub mod numerics;
pub mod quantum;
pub mod seeded;
pub mod stability;

pub use error::{Error, Result};
pub use numerics::{first_zero_crossing, fit_log_scaling, ScalingFit, TimeGrid, Trajectory};
