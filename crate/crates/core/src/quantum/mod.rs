//! Exact quantum evolution of the equal-occupation collective ladder.
//!
//! Starting from all gravitons (`|i = 0>`), pair conversion only reaches the
//! N+1 states `|i>` with `i` converted pairs. In dimensionless time the
//! Hamiltonian is `1/N` times the raw collective matrix elements.

mod ladder;
mod scan;
mod tridiag;

pub use ladder::{
    build_ladder, evolve_ladder, evolve_ladder_stepping, LadderHamiltonian, LadderPropagator,
    LadderState,
};
pub use scan::{
    break_time_scan, lambda_turnover_probe, BreakTimeScan, Turnover, TurnoverProbe,
    TURNOVER_HORIZON_FACTOR,
};
pub use tridiag::{symmetric_tridiagonal_eigen, TridiagEigen};
