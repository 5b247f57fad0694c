//! Counting-statistics dump: an ensemble of single-atom trajectories for one
//! contact phase, compared with the rate equations.

use serde::Serialize;

use crate::constants::NUM_LEVELS;
use crate::error::Result;
use crate::kinetics::{
    draw_level, ensemble_statistics, evolve_with_count, sample_path, stream_rng, ContactPhase,
    Direction, EnsembleStatistics, RNG_ALGORITHM,
};
use crate::model::{CycleSpec, LevelDistribution};
use crate::stats::{chi_square_test, ChiSquareTest};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountingReport {
    pub direction: Direction,
    pub duration_ms: f64,
    pub field_mg: f64,
    pub seed: u64,
    pub rng_algorithm: String,
    pub start: LevelDistribution,
    /// Histogram of quanta exchanged per trajectory, 0..=6.
    pub quanta_histogram: [u64; NUM_LEVELS],
    pub ensemble: EnsembleStatistics,
    /// Rate-equation prediction for the final distribution.
    pub master_distribution: LevelDistribution,
    /// Rate-equation mean collision count.
    pub master_mean_quanta: f64,
    pub chi_square_statistic: f64,
    pub chi_square_dof: usize,
    pub chi_square_p_value: f64,
}

/// Minimum expected bin count for the chi-square comparison.
pub const MIN_EXPECTED_COUNT: f64 = 5.0;

/// Samples `n_traj` trajectories of the contact phase and compares the
/// final-level histogram with the rate equations.
pub fn counting_statistics(
    spec: &CycleSpec,
    direction: Direction,
    duration: f64,
    start: &LevelDistribution,
    n_traj: usize,
    seed: u64,
) -> Result<CountingReport> {
    let field = match direction {
        Direction::Heating => spec.field.b1,
        Direction::Cooling => spec.field.b2,
    };
    let phase = ContactPhase {
        direction,
        duration,
        field,
        rates: &spec.rates,
    };
    let ensemble = ensemble_statistics(start, &phase, n_traj, seed)?;
    let master = evolve_with_count(start, &phase)?;
    let test: ChiSquareTest = chi_square_test(
        &ensemble.final_counts,
        master.dist.probabilities(),
        MIN_EXPECTED_COUNT,
    );

    // the histogram uses its own stream so the ensemble above stays comparable
    let mut rng = stream_rng(seed, 1);
    let mut quanta_histogram = [0u64; NUM_LEVELS];
    for _ in 0..n_traj {
        let level = draw_level(start, &mut rng);
        quanta_histogram[sample_path(level, &phase, &mut rng).quanta_exchanged] += 1;
    }

    Ok(CountingReport {
        direction,
        duration_ms: duration,
        field_mg: field,
        seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        start: *start,
        quanta_histogram,
        ensemble,
        master_distribution: master.dist,
        master_mean_quanta: master.collisions,
        chi_square_statistic: test.statistic,
        chi_square_dof: test.dof,
        chi_square_p_value: test.p_value,
    })
}
