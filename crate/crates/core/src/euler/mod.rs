//! Axisymmetric Euler flow with swirl on an (r, z) half-plane, periodic in z.
//!
//! The meridional flow is carried by the Stokes stream function `psi`
//! (`v_r = -psi_z / r`, `v_z = psi_r / r`), which makes the discrete divergence of
//! `(v_r, v_z)` vanish identically. Azimuthal vorticity and swirl are advanced as
//! `omega_theta / r` and `v_theta / r`, both even in `r` and regular on the axis.
//! Pressure never enters the time stepping; it is recovered from its Poisson equation
//! for on-axis diagnostics.

mod diagnostics;
mod field;
mod grid;
mod output;
mod particle;
mod poisson;
pub mod profiles;
mod run;
mod stepper;

pub use diagnostics::{check_trace_identity, extract_axis, limit_odd_over_r, AxisDiagnostics};
pub use field::{init_field, AnalyticProfile, AxisymField, AxisymProfile};
pub use grid::Grid2D;
pub use output::{write_axis_csv, write_snapshot, SnapshotFormat, SNAPSHOT_COLUMNS};
pub use particle::{advect_axis_particle, AxisVelocityHistory, PeriodicCubic};
pub use poisson::{PressureField, PressureSolver, StreamSolver};
pub use run::{
    ode_consistency_report, run_simulation, run_simulation_with, ConsistencyReport,
    ConsistencySample, Frame, ResidualStats, SimulationOptions, SimulationRun,
};
pub use stepper::EulerSolver;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EulerError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("initial data breaks axis parity: {0}")]
    ParityViolation(String),
    #[error("initial data does not vanish at the outer wall: {0}")]
    WallViolation(String),
    #[error("{solver} solve did not reach tolerance: scaled residual {residual:e}")]
    SolverDivergence { solver: &'static str, residual: f64 },
    #[error("time step {dt} exceeds CFL limit {limit}")]
    CflViolation { dt: f64, limit: f64 },
    #[error("non-finite value in field at t = {t}")]
    NonFiniteField { t: f64 },
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
