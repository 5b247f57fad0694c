//! Spin-exchange contact dynamics.
//!
//! During a contact phase the engine is a one-directional seven-state
//! Markov chain: heating only moves n → n+1, cooling only n → n-1, and the
//! end of the ladder is absorbing. The deterministic route integrates the
//! rate equations together with the accumulated collision count; the
//! stochastic route draws exact jump trajectories.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constants::{MAX_LEVEL, NUM_LEVELS};
use crate::error::{OttoError, Result};
use crate::model::{CycleSpec, LevelDistribution, RateTable};
use crate::stats::Moments;

/// Generator used for every stochastic sample, recorded in output metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng";

/// Largest Γ·h accepted by the RK4 integrator.
const MAX_RATE_STEP: f64 = 0.01;
/// Minimum number of steps per contact phase.
const MIN_STEPS: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Heating,
    Cooling,
}

/// A fixed-field contact with a spin-polarized bath.
#[derive(Debug, Clone, Copy)]
pub struct ContactPhase<'a> {
    pub direction: Direction,
    /// ms
    pub duration: f64,
    /// mG; constant during contact.
    pub field: f64,
    pub rates: &'a RateTable,
}

impl<'a> ContactPhase<'a> {
    pub fn heating(duration: f64, field: f64, rates: &'a RateTable) -> Self {
        Self {
            direction: Direction::Heating,
            duration,
            field,
            rates,
        }
    }

    pub fn cooling(duration: f64, field: f64, rates: &'a RateTable) -> Self {
        Self {
            direction: Direction::Cooling,
            duration,
            field,
            rates,
        }
    }

    /// Total rate of leaving level `n`; zero at the absorbing end.
    pub fn exit_rate(&self, n: usize) -> f64 {
        match self.direction {
            Direction::Heating => self.rates.heating_rate(n),
            Direction::Cooling => self.rates.cooling_rate(n),
        }
    }

    /// Level reached from `n` by one collision, if any.
    pub fn next_level(&self, n: usize) -> Option<usize> {
        match self.direction {
            Direction::Heating => (n < MAX_LEVEL).then_some(n + 1),
            Direction::Cooling => n.checked_sub(1),
        }
    }

    fn max_active_rate(&self) -> f64 {
        (0..NUM_LEVELS)
            .map(|n| self.exit_rate(n))
            .fold(0.0, f64::max)
    }

    fn validate(&self) -> Result<()> {
        if !(self.duration.is_finite() && self.duration >= 0.0) {
            return Err(OttoError::Domain(format!(
                "contact duration must be non-negative, got {}",
                self.duration
            )));
        }
        Ok(())
    }
}

/// Distribution and accumulated collision count at the end of a phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrokeOutcome {
    pub dist: LevelDistribution,
    /// ∫⟨Γ(t)⟩dt over the phase.
    pub collisions: f64,
}

/// Σ_n p_n Γ^{n→n±1} over the phase's active transitions.
pub fn mean_collision_rate(dist: &LevelDistribution, phase: &ContactPhase<'_>) -> f64 {
    dist.probabilities()
        .iter()
        .enumerate()
        .map(|(n, p)| p * phase.exit_rate(n))
        .sum()
}

// state[0..7] = p, state[7] = accumulated collisions
type State = [f64; NUM_LEVELS + 1];

fn derivative(state: &State, exit: &[f64; NUM_LEVELS], phase: &ContactPhase<'_>) -> State {
    let mut d = [0.0; NUM_LEVELS + 1];
    for n in 0..NUM_LEVELS {
        let flux = exit[n] * state[n];
        if flux == 0.0 {
            continue;
        }
        d[n] -= flux;
        if let Some(m) = phase.next_level(n) {
            d[m] += flux;
        }
        d[NUM_LEVELS] += flux;
    }
    d
}

fn axpy(a: f64, x: &State, y: &State) -> State {
    let mut out = *y;
    for (o, xi) in out.iter_mut().zip(x.iter()) {
        *o += a * xi;
    }
    out
}

/// Integrates the rate equations over the phase with fixed-step RK4 and
/// returns the final distribution together with the collision count.
pub fn evolve_with_count(
    dist: &LevelDistribution,
    phase: &ContactPhase<'_>,
) -> Result<StrokeOutcome> {
    phase.validate()?;
    if phase.duration == 0.0 {
        return Ok(StrokeOutcome {
            dist: *dist,
            collisions: 0.0,
        });
    }
    let exit: [f64; NUM_LEVELS] = std::array::from_fn(|n| phase.exit_rate(n));
    let gamma_max = phase.max_active_rate();
    let mut h_max = phase.duration / MIN_STEPS;
    if gamma_max > 0.0 {
        h_max = h_max.min(MAX_RATE_STEP / gamma_max);
    }
    let steps = (phase.duration / h_max).ceil().max(1.0) as usize;
    let h = phase.duration / steps as f64;

    let mut y: State = [0.0; NUM_LEVELS + 1];
    y[..NUM_LEVELS].copy_from_slice(dist.probabilities());

    for step in 0..steps {
        let k1 = derivative(&y, &exit, phase);
        let k2 = derivative(&axpy(0.5 * h, &k1, &y), &exit, phase);
        let k3 = derivative(&axpy(0.5 * h, &k2, &y), &exit, phase);
        let k4 = derivative(&axpy(h, &k3, &y), &exit, phase);
        for i in 0..=NUM_LEVELS {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if let Some((level, &value)) = y[..NUM_LEVELS]
            .iter()
            .enumerate()
            .find(|(_, &v)| v < -crate::model::CLAMP_TOL || !v.is_finite())
        {
            return Err(OttoError::Integration {
                time: (step + 1) as f64 * h,
                step,
                step_size: h,
                level,
                value,
            });
        }
    }

    let p: [f64; NUM_LEVELS] = std::array::from_fn(|n| y[n]);
    let dist =
        LevelDistribution::from_integrator(p).map_err(|(level, value)| OttoError::Integration {
            time: phase.duration,
            step: steps,
            step_size: h,
            level,
            value,
        })?;
    Ok(StrokeOutcome {
        dist,
        collisions: y[NUM_LEVELS],
    })
}

/// Distribution after the contact phase.
pub fn evolve_master(
    dist: &LevelDistribution,
    phase: &ContactPhase<'_>,
) -> Result<LevelDistribution> {
    evolve_with_count(dist, phase).map(|o| o.dist)
}

/// Linear map of one contact phase, built by integrating each basis state.
///
/// Column `j` of `transfer` is the distribution reached from level `j`, and
/// `collisions[j]` the collision count accumulated on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct StrokePropagator {
    transfer: [[f64; NUM_LEVELS]; NUM_LEVELS],
    collisions: [f64; NUM_LEVELS],
}

impl StrokePropagator {
    pub fn new(phase: &ContactPhase<'_>) -> Result<Self> {
        let mut transfer = [[0.0; NUM_LEVELS]; NUM_LEVELS];
        let mut collisions = [0.0; NUM_LEVELS];
        for j in 0..NUM_LEVELS {
            let out = evolve_with_count(&LevelDistribution::delta(j)?, phase)?;
            for i in 0..NUM_LEVELS {
                transfer[i][j] = out.dist.get(i);
            }
            collisions[j] = out.collisions;
        }
        Ok(Self {
            transfer,
            collisions,
        })
    }

    /// Row-major transition matrix, `m[i][j]` = P(end in i | start in j).
    pub fn matrix(&self) -> &[[f64; NUM_LEVELS]; NUM_LEVELS] {
        &self.transfer
    }

    pub fn apply(&self, dist: &LevelDistribution) -> Result<StrokeOutcome> {
        let p = dist.probabilities();
        let out: [f64; NUM_LEVELS] =
            std::array::from_fn(|i| (0..NUM_LEVELS).map(|j| self.transfer[i][j] * p[j]).sum());
        let dist = LevelDistribution::from_integrator(out).map_err(|(level, value)| {
            OttoError::Integration {
                time: f64::NAN,
                step: 0,
                step_size: f64::NAN,
                level,
                value,
            }
        })?;
        let collisions = self
            .collisions
            .iter()
            .zip(p.iter())
            .map(|(c, p)| c * p)
            .sum();
        Ok(StrokeOutcome { dist, collisions })
    }
}

/// Mean collision counts of the two contact strokes of a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollisionCount {
    pub heating: f64,
    pub cooling: f64,
}

impl CollisionCount {
    /// N_spin = N_{A→B} + N_{C→D}.
    pub fn total(&self) -> f64 {
        self.heating + self.cooling
    }
}

/// N_spin of one cycle started from `spec.initial`.
pub fn collision_count(spec: &CycleSpec) -> Result<CollisionCount> {
    let heat = evolve_with_count(
        &spec.initial,
        &ContactPhase::heating(spec.tau_h, spec.field.b1, &spec.rates),
    )?;
    let cool = evolve_with_count(
        &heat.dist,
        &ContactPhase::cooling(spec.tau_c, spec.field.b2, &spec.rates),
    )?;
    Ok(CollisionCount {
        heating: heat.collisions,
        cooling: cool.collisions,
    })
}

/// One stochastic realization of a contact phase.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    /// Collision times, ms from the start of the phase.
    pub jump_times: Vec<f64>,
    /// Visited levels, starting with the initial one.
    pub levels: Vec<usize>,
    pub quanta_exchanged: usize,
}

impl TrajectoryRecord {
    pub fn start_level(&self) -> usize {
        self.levels[0]
    }

    pub fn final_level(&self) -> usize {
        *self.levels.last().expect("levels always holds the start")
    }
}

/// Seeded generator for independent stream `stream` of a master seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Exact-jump sample of the phase from `start`, drawing from `rng`.
pub fn sample_path<R: Rng + ?Sized>(
    start: usize,
    phase: &ContactPhase<'_>,
    rng: &mut R,
) -> TrajectoryRecord {
    let mut t = 0.0;
    let mut level = start;
    let mut record = TrajectoryRecord {
        jump_times: Vec::new(),
        levels: vec![start],
        quanta_exchanged: 0,
    };
    while let Some(next) = phase.next_level(level) {
        let rate = phase.exit_rate(level);
        if rate <= 0.0 {
            break;
        }
        // 1 - U lies in (0, 1], so the log is finite.
        let u: f64 = rng.random();
        t += -(1.0 - u).ln() / rate;
        if t > phase.duration {
            break;
        }
        record.jump_times.push(t);
        record.levels.push(next);
        record.quanta_exchanged += 1;
        level = next;
    }
    record
}

/// Reproducible single trajectory for a given seed.
pub fn sample_trajectory(
    start: usize,
    phase: &ContactPhase<'_>,
    rng_seed: u64,
) -> Result<TrajectoryRecord> {
    phase.validate()?;
    if start > MAX_LEVEL {
        return Err(OttoError::Domain(format!(
            "start level {start} outside 0..={MAX_LEVEL}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    Ok(sample_path(start, phase, &mut rng))
}

/// Draws a level index from `dist` by inverse CDF.
pub fn draw_level<R: Rng + ?Sized>(dist: &LevelDistribution, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (n, p) in dist.probabilities().iter().enumerate() {
        acc += p;
        if u < acc {
            return n;
        }
    }
    // u landed in the rounding gap above the last partial sum
    dist.probabilities()
        .iter()
        .rposition(|&p| p > 0.0)
        .unwrap_or(0)
}

/// Empirical statistics over an ensemble of trajectories.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleStatistics {
    pub n_traj: usize,
    /// Histogram of final levels.
    pub final_counts: [u64; NUM_LEVELS],
    pub final_distribution: LevelDistribution,
    pub mean_quanta: f64,
    /// Unbiased sample variance of the exchanged quanta.
    pub variance_quanta: f64,
}

impl EnsembleStatistics {
    /// Standard error of `mean_quanta`.
    pub fn standard_error(&self) -> f64 {
        (self.variance_quanta / self.n_traj as f64).sqrt()
    }
}

/// Runs `n_traj` independent trajectories with initial levels drawn from `start`.
pub fn ensemble_statistics(
    start: &LevelDistribution,
    phase: &ContactPhase<'_>,
    n_traj: usize,
    rng_seed: u64,
) -> Result<EnsembleStatistics> {
    phase.validate()?;
    if n_traj == 0 {
        return Err(OttoError::Domain(
            "ensemble needs at least one trajectory".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut final_counts = [0u64; NUM_LEVELS];
    let mut quanta = Moments::default();
    for _ in 0..n_traj {
        let level = draw_level(start, &mut rng);
        let path = sample_path(level, phase, &mut rng);
        final_counts[path.final_level()] += 1;
        quanta.push(path.quanta_exchanged as f64);
    }
    let n = n_traj as f64;
    let p: [f64; NUM_LEVELS] = std::array::from_fn(|i| final_counts[i] as f64 / n);
    Ok(EnsembleStatistics {
        n_traj,
        final_counts,
        final_distribution: LevelDistribution::new(p)?,
        mean_quanta: quanta.mean(),
        variance_quanta: quanta.variance(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn single_rate(rate: f64) -> RateTable {
        RateTable::new([rate, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0; 6]).unwrap()
    }

    #[test]
    fn zero_duration_is_identity() {
        let rates = RateTable::default();
        let d = LevelDistribution::uniform();
        let out = evolve_with_count(&d, &ContactPhase::heating(0.0, 346.5, &rates)).unwrap();
        assert_eq!(out.dist, d);
        assert_eq!(out.collisions, 0.0);
    }

    #[test]
    fn two_level_decay_matches_closed_form() {
        let rates = single_rate(0.05);
        for t in [1.0, 10.0, 37.0, 200.0] {
            let p = evolve_master(
                &LevelDistribution::ground(),
                &ContactPhase::heating(t, 346.5, &rates),
            )
            .unwrap();
            let p0 = (-0.05 * t).exp();
            assert!((p.get(0) - p0).abs() < 1e-10, "t = {t}");
            assert!((p.get(1) - (1.0 - p0)).abs() < 1e-10);
        }
    }

    #[test]
    fn saturated_state_is_absorbing() {
        let rates = RateTable::default();
        let top = LevelDistribution::delta(6).unwrap();
        let out = evolve_with_count(&top, &ContactPhase::heating(500.0, 346.5, &rates)).unwrap();
        assert_eq!(out.dist, top);
        assert_eq!(out.collisions, 0.0);
        let bottom = LevelDistribution::ground();
        let out = evolve_with_count(&bottom, &ContactPhase::cooling(500.0, 31.6, &rates)).unwrap();
        assert_eq!(out.dist, bottom);
    }

    #[test]
    fn negative_duration_is_rejected() {
        let rates = RateTable::default();
        let r = evolve_master(
            &LevelDistribution::ground(),
            &ContactPhase::heating(-1.0, 1.0, &rates),
        );
        assert!(matches!(r, Err(OttoError::Domain(_))));
    }

    #[test]
    fn mean_collision_rate_examples() {
        let rates = RateTable::uniform(0.02).unwrap();
        let heat = ContactPhase::heating(1.0, 346.5, &rates);
        assert_eq!(
            mean_collision_rate(&LevelDistribution::delta(6).unwrap(), &heat),
            0.0
        );
        assert_eq!(
            mean_collision_rate(&LevelDistribution::ground(), &heat),
            0.02
        );
        let u = mean_collision_rate(&LevelDistribution::uniform(), &heat);
        assert!((u - 6.0 / 7.0 * 0.02).abs() < 1e-15);
    }

    #[test]
    fn collision_count_limits() {
        let tiny = CycleSpec::new(1e-9, 1e-9).unwrap();
        assert!(collision_count(&tiny).unwrap().total() < 1e-9);

        let long = CycleSpec::new(20_000.0, 20_000.0).unwrap();
        let n = collision_count(&long).unwrap();
        assert!((n.heating - 6.0).abs() < 1e-6, "{n:?}");
        assert!((n.cooling - 6.0).abs() < 1e-6);
        assert!((n.total() - 12.0).abs() < 1e-6);

        let mut two_level = CycleSpec::new(2f64.ln() / 0.1, 1e-9).unwrap();
        two_level.rates = RateTable::new([0.1, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0; 6]).unwrap();
        let n = collision_count(&two_level).unwrap();
        assert!((n.heating - 0.5).abs() < 1e-10);
    }

    #[test]
    fn trajectory_examples() {
        let rates = RateTable::uniform(0.05).unwrap();
        let heat = ContactPhase::heating(1e6, 346.5, &rates);
        let t = sample_trajectory(6, &heat, 7).unwrap();
        assert_eq!(t.quanta_exchanged, 0);
        assert!(t.jump_times.is_empty());
        for seed in 0..50 {
            let t = sample_trajectory(0, &heat, seed).unwrap();
            assert_eq!(t.quanta_exchanged, 6);
            assert_eq!(t.levels, vec![0, 1, 2, 3, 4, 5, 6]);
            assert!(t.jump_times.windows(2).all(|w| w[0] <= w[1]));
        }
        let cool = ContactPhase::cooling(1e6, 31.6, &rates);
        let t = sample_trajectory(4, &cool, 3).unwrap();
        assert_eq!(t.levels, vec![4, 3, 2, 1, 0]);
        assert_eq!(
            sample_trajectory(0, &ContactPhase::heating(100.0, 1.0, &rates), 11).unwrap(),
            sample_trajectory(0, &ContactPhase::heating(100.0, 1.0, &rates), 11).unwrap()
        );
    }

    #[test]
    fn single_jump_fraction_over_seeds() {
        let rates = single_rate(1.0);
        let phase = ContactPhase::heating(2f64.ln(), 346.5, &rates);
        let n = 100_000u64;
        let jumped = (0..n)
            .filter(|&s| sample_trajectory(0, &phase, s).unwrap().quanta_exchanged >= 1)
            .count();
        let frac = jumped as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.005, "{frac}");
    }

    #[test]
    fn ensemble_examples() {
        let rates = RateTable::uniform(0.05).unwrap();
        let s = ensemble_statistics(
            &LevelDistribution::ground(),
            &ContactPhase::heating(0.0, 346.5, &rates),
            100,
            1,
        )
        .unwrap();
        assert_eq!(s.final_distribution, LevelDistribution::ground());
        assert_eq!(s.mean_quanta, 0.0);
        assert_eq!(s.variance_quanta, 0.0);

        let s = ensemble_statistics(
            &LevelDistribution::ground(),
            &ContactPhase::heating(5_000.0, 346.5, &rates),
            10_000,
            2,
        )
        .unwrap();
        assert!((s.mean_quanta - 6.0).abs() < 0.01);
        assert!(s.variance_quanta < 0.01);

        let rates = single_rate(0.2);
        let s = ensemble_statistics(
            &LevelDistribution::ground(),
            &ContactPhase::heating(2f64.ln() / 0.2, 346.5, &rates),
            100_000,
            3,
        )
        .unwrap();
        assert!((s.mean_quanta - 0.5).abs() < 0.005, "{}", s.mean_quanta);

        assert!(ensemble_statistics(
            &LevelDistribution::ground(),
            &ContactPhase::heating(1.0, 1.0, &rates),
            0,
            0
        )
        .is_err());
    }

    #[test]
    fn propagator_matches_direct_integration() {
        let rates = RateTable::new(
            [0.01, 0.03, 0.02, 0.05, 0.01, 0.04],
            [0.02, 0.01, 0.06, 0.02, 0.03, 0.01],
        )
        .unwrap();
        let phase = ContactPhase::cooling(123.0, 31.6, &rates);
        let prop = StrokePropagator::new(&phase).unwrap();
        let d = LevelDistribution::new([0.1, 0.2, 0.05, 0.15, 0.2, 0.1, 0.2]).unwrap();
        let direct = evolve_with_count(&d, &phase).unwrap();
        let via = prop.apply(&d).unwrap();
        assert!(direct.dist.distance(&via.dist) < 1e-14);
        assert!((direct.collisions - via.collisions).abs() < 1e-13);
    }

    fn arb_rates() -> impl Strategy<Value = RateTable> {
        (
            prop::array::uniform6(0.0f64..0.2),
            prop::array::uniform6(0.0f64..0.2),
        )
            .prop_map(|(h, c)| RateTable::new(h, c).unwrap())
    }

    fn arb_dist() -> impl Strategy<Value = LevelDistribution> {
        prop::array::uniform7(0.01f64..1.0).prop_map(|w| {
            let s: f64 = w.iter().sum();
            LevelDistribution::new(w.map(|x| x / s)).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn conserves_probability_and_counts_quanta(
            rates in arb_rates(), d in arb_dist(), t in 0.0f64..2000.0, heating in any::<bool>()
        ) {
            let phase = if heating {
                ContactPhase::heating(t, 346.5, &rates)
            } else {
                ContactPhase::cooling(t, 31.6, &rates)
            };
            let out = evolve_with_count(&d, &phase).unwrap();
            let sum: f64 = out.dist.probabilities().iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
            let shift = out.dist.mean_level() - d.mean_level();
            let expected = if heating { shift } else { -shift };
            prop_assert!((out.collisions - expected).abs() < 1e-9);
            prop_assert!(out.collisions >= -1e-12);
        }

        #[test]
        fn tail_mass_is_monotone(rates in arb_rates(), d in arb_dist(), t in 1.0f64..1000.0) {
            // survival Σ_{n≥k} p_n never decreases while heating
            let heat = ContactPhase::heating(t, 346.5, &rates);
            let mid = evolve_master(&d, &ContactPhase::heating(t / 2.0, 346.5, &rates)).unwrap();
            let end = evolve_master(&d, &heat).unwrap();
            for k in 0..NUM_LEVELS {
                let tail = |x: &LevelDistribution| x.probabilities()[k..].iter().sum::<f64>();
                prop_assert!(tail(&mid) >= tail(&d) - 1e-12);
                prop_assert!(tail(&end) >= tail(&mid) - 1e-12);
            }
            let cool_mid = evolve_master(&d, &ContactPhase::cooling(t / 2.0, 31.6, &rates)).unwrap();
            let cool_end = evolve_master(&d, &ContactPhase::cooling(t, 31.6, &rates)).unwrap();
            for k in 0..NUM_LEVELS {
                let head = |x: &LevelDistribution| x.probabilities()[..=k].iter().sum::<f64>();
                prop_assert!(head(&cool_mid) >= head(&d) - 1e-12);
                prop_assert!(head(&cool_end) >= head(&cool_mid) - 1e-12);
            }
        }

        #[test]
        fn trajectories_are_monotone_and_bounded(
            rates in arb_rates(), start in 0usize..7, t in 0.0f64..5000.0, seed in any::<u64>(), heating in any::<bool>()
        ) {
            let phase = if heating {
                ContactPhase::heating(t, 346.5, &rates)
            } else {
                ContactPhase::cooling(t, 31.6, &rates)
            };
            let tr = sample_trajectory(start, &phase, seed).unwrap();
            prop_assert!(tr.quanta_exchanged <= 6);
            prop_assert_eq!(tr.levels.len(), tr.quanta_exchanged + 1);
            for w in tr.levels.windows(2) {
                if heating { prop_assert_eq!(w[1], w[0] + 1); } else { prop_assert_eq!(w[1] + 1, w[0]); }
            }
            prop_assert!(tr.jump_times.iter().all(|&x| x <= t));
        }
    }
}
