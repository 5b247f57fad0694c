//! Simulation and analysis of a collisional quantum Otto engine.
//!
//! The working medium is the seven-level F = 3 Zeeman manifold of a single
//! Cs atom. Heat is exchanged one quantum at a time through spin-exchange
//! collisions with a spin-polarized Rb bath; work is done by ramping the
//! magnetic field between the two contact strokes.
//!
//! * [`model`]: level distribution, coupling constants, rate table, cycle spec
//! * [`kinetics`]: rate-equation integration and exact-jump trajectories
//! * [`cycle`]: the four strokes, adiabaticity checks, limit cycles
//! * [`thermo`]: heats, works, heat leak, efficiencies, power, fluctuations
//! * [`harness`]: configuration, sweeps, result files, plot scripts, checks

// `!(x > 0.0)` is used on purpose so that NaN is rejected with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod constants;
pub mod cycle;
pub mod error;
pub mod harness;
pub mod kinetics;
pub mod model;
pub mod stats;
pub mod thermo;

pub use cycle::{
    adiabatic_ramp, adiabaticity, find_limit_cycle, run_cycle, AdiabaticityReport, CycleRecord,
    LimitCycle,
};
pub use error::{OttoError, Result};
pub use kinetics::{
    collision_count, ensemble_statistics, evolve_master, evolve_with_count, mean_collision_rate,
    sample_trajectory, ContactPhase, Direction, EnsembleStatistics, StrokePropagator,
    TrajectoryRecord,
};
pub use model::{
    energy_variance, mean_energy, zeeman_energy, CouplingConstants, CycleSpec, FieldSchedule,
    LevelDistribution, RampShape, RateTable,
};
