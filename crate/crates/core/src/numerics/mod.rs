//! Shared numerics: time grids, fixed-step integration, trajectory analysis
//! and log-scaling fits. Time everywhere is dimensionless, in units of `(n g)^-1`.

mod compare;
mod fit;
mod grid;
mod integrate;
mod trajectory;

pub use compare::{compare_tracking, TrackingComparison};
pub use fit::{fit_linear, fit_log_scaling, ScalingFit};
pub use grid::TimeGrid;
pub use grid::DEFAULT_DT;
pub use integrate::{integrate, integrate_with, OdeState};
pub use trajectory::{first_zero_crossing, zero_crossing, AuditChannel, Trajectory, ZETA_TOLERANCE};
