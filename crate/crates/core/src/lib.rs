//! Simulation laboratory for event-triggered and periodic sampled-data
//! control of nonlinear systems.
//!
//! The library is organized around five pieces:
//!
//! - [`kfun`]: numeric class-K-infinity function handles — monotonicity
//!   checks, inversion, small-o limits at the origin, the nondecreasing
//!   gain envelope, and the maximum allowable sampling period.
//! - [`triggers`]: the three sampling laws (gain-function event trigger,
//!   weighted adaptive trigger, fixed period) as margin functions over
//!   per-window running maxima.
//! - [`systems`]: plant/controller/scenario definitions and the built-in
//!   reference scenarios with their certificate bundles.
//! - [`hybridsim`]: fixed-step Runge-Kutta integration of the impulsive
//!   closed loop with bisection event location, dense traces and event logs.
//! - [`analysis`]: certificate checks, inter-event statistics, ultimate
//!   bounds, and the continuous-feedback oracle.

pub mod analysis;
pub mod error;
pub mod hybridsim;
pub mod kfun;
pub mod systems;
pub mod triggers;

pub use analysis::{
    check_u_derivative_bound, check_bibs, check_lyapunov_decrease, continuous_oracle,
    interevent_stats, run_checks, ultimate_bound, AnalysisReport, CheckRecord, IntereventStats,
};
pub use error::{Error, Result};
pub use hybridsim::{
    fire_event, locate_event, read_events_csv, simulate, step, write_events_csv, EventRecord,
    HybridState, SimResult, Termination, Trace, TraceRow,
};
pub use kfun::{
    asymptotic_interval, check_kinf, invert, masp, named, rho_q_envelope, small_o_at_zero,
    ComparisonFunction, MaspResult, RhoQEnvelope,
};
pub use systems::{
    add_disturbance, build_scenario, example1_scenario, example2_scenario,
    robust_reference_scenario, robust_scenario, scalar_reference_scenario, Certificates,
    Controller, Plant, Scenario, SimParams, SCENARIO_IDS,
};
pub use triggers::{periodic_from_masp, TriggerLaw, WindowAccumulators};
