// Library integrators against the reference implementations above.

use crate::*;
use otto_core::kinetics::{evolve_with_count, ContactPhase, Direction, StrokePropagator};
use otto_core::{find_limit_cycle, CycleSpec, LevelDistribution, RateTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn expm_oracle_sanity() {
    // scalar decay and a nilpotent block
    let e = expm(&vec![vec![-3.0]]);
    assert!((e[0][0] - (-3f64).exp()).abs() < 1e-14);
    let e = expm(&vec![vec![0.0, 2.0], vec![0.0, 0.0]]);
    assert!((e[0][1] - 2.0).abs() < 1e-14 && (e[0][0] - 1.0).abs() < 1e-14);
}

#[test]
fn rate_equations_match_matrix_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let rates = random_rates(&mut rng, 1e-3, 0.1);
        let p0 = random_distribution(&mut rng);
        let t = rng.random_range(0.0..800.0);
        let dir = if rng.random::<bool>() {
            Direction::Heating
        } else {
            Direction::Cooling
        };
        let phase = ContactPhase {
            direction: dir,
            duration: t,
            field: 100.0,
            rates: &rates,
        };
        let got = evolve_with_count(&LevelDistribution::new(p0).unwrap(), &phase).unwrap();
        let (p, n) = oracle_stroke(&p0, &rates, dir, t);
        assert!(max_abs_diff(got.dist.probabilities(), &p) < 1e-8, "t = {t}");
        assert!(
            (got.collisions - n).abs() < 1e-8,
            "{} vs {n}",
            got.collisions
        );
    }
}

#[test]
fn propagator_columns_match_matrix_exponential() {
    let rates = RateTable::new(
        [0.01, 0.02, 0.005, 0.03, 0.015, 0.008],
        [0.02, 0.01, 0.04, 0.006, 0.012, 0.02],
    )
    .unwrap();
    let phase = ContactPhase::cooling(333.0, 31.6, &rates);
    let prop = StrokePropagator::new(&phase).unwrap();
    let q: Mat = generator(&rates, Direction::Cooling)
        .into_iter()
        .map(|r| r.into_iter().map(|v| v * 333.0).collect())
        .collect();
    let e = expm(&q);
    for (row, oracle) in prop.matrix().iter().zip(&e) {
        assert!(max_abs_diff(row, oracle) < 1e-8);
    }
}

#[test]
fn limit_cycle_matches_fixed_point_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let mut spec =
            CycleSpec::new(rng.random_range(30.0..900.0), rng.random_range(30.0..900.0)).unwrap();
        spec.rates = random_rates(&mut rng, 2e-3, 0.05);
        let lc = find_limit_cycle(&spec, 1_000_000, 1e-13).unwrap();
        let oracle = oracle_limit_cycle(&spec.rates, spec.tau_h, spec.tau_c);
        let d = max_abs_diff(lc.record.dist_a.probabilities(), &oracle);
        assert!(d < 1e-9, "limit cycle off by {d}");
    }
}

#[test]
fn limit_cycle_is_independent_of_start() {
    let spec = CycleSpec::new(120.0, 200.0).unwrap();
    let a = find_limit_cycle(&spec, 1_000_000, 1e-13)
        .unwrap()
        .record
        .dist_a;
    let mut other = spec.clone();
    other.initial = LevelDistribution::delta(6).unwrap();
    let b = find_limit_cycle(&other, 1_000_000, 1e-13)
        .unwrap()
        .record
        .dist_a;
    assert!(a.distance(&b) < 1e-11);
}
