//! Thermodynamic observables of an Otto cycle.
//!
//! Heat is carried by population changes at fixed field, work by field
//! changes at fixed populations. Engine-side heats carry λ per quantum per
//! unit field, bath-side heats κ; the difference is the heat leak.
//!
//! Sign conventions: `q_h >= 0` flows into the engine, `q_c <= 0` flows out,
//! stroke works are signed (negative when extracted), and the produced work
//! is `q_h - |q_c|`. Ratios with a vanishing denominator are `None`.

use serde::Serialize;

use crate::error::{OttoError, Result};
use crate::kinetics::{draw_level, sample_path, stream_rng, ContactPhase};
use crate::model::{
    energy_variance, CouplingConstants, CycleSpec, FieldSchedule, LevelDistribution,
};
use crate::stats::Moments;

/// Σ_n n (p_f,n − p_i,n) λ b.
pub fn heat_engine_side(
    p_i: &LevelDistribution,
    p_f: &LevelDistribution,
    b: f64,
    c: &CouplingConstants,
) -> f64 {
    (p_f.mean_level() - p_i.mean_level()) * c.lambda() * b
}

/// Σ_n n p_n λ (b_to − b_from).
pub fn work_stroke(dist: &LevelDistribution, b_from: f64, b_to: f64, c: &CouplingConstants) -> f64 {
    dist.mean_level() * c.lambda() * (b_to - b_from)
}

/// Closed-cycle heat leak Σ_n n (p_B − p_A)(κ − λ)(B₁ − B₂).
pub fn heat_leak(
    p_a: &LevelDistribution,
    p_b: &LevelDistribution,
    f: &FieldSchedule,
    c: &CouplingConstants,
) -> f64 {
    (p_b.mean_level() - p_a.mean_level()) * (c.kappa() - c.lambda()) * (f.b1 - f.b2)
}

/// Engine- and bath-side energy accounting of one cycle, k_B·nK.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatLedger {
    pub q_h: f64,
    pub q_c: f64,
    /// Energy given by the high-energy bath.
    pub q1: f64,
    /// Energy taken by the low-energy bath (same sign as `q_c`).
    pub q2: f64,
    pub q_l: f64,
    pub w_bc: f64,
    pub w_da: f64,
}

impl HeatLedger {
    pub fn from_points(
        p_a: &LevelDistribution,
        p_b: &LevelDistribution,
        p_c: &LevelDistribution,
        p_d: &LevelDistribution,
        f: &FieldSchedule,
        c: &CouplingConstants,
    ) -> Self {
        let q_h = heat_engine_side(p_a, p_b, f.b1, c);
        let q_c = heat_engine_side(p_c, p_d, f.b2, c);
        // one quantum moves κB in the bath for every λB in the engine
        let q1 = q_h / c.gamma();
        let q2 = q_c / c.gamma();
        let q_l = (q1 - q2.abs()) - (q_h - q_c.abs());
        Self {
            q_h,
            q_c,
            q1,
            q2,
            q_l,
            w_bc: work_stroke(p_b, f.b1, f.b2, c),
            w_da: work_stroke(p_d, f.b2, f.b1, c),
        }
    }

    /// Produced work |W| = Q_H − |Q_C|.
    pub fn work(&self) -> f64 {
        self.q_h - self.q_c.abs()
    }

    /// Q_H + Q_C + W_BC + W_DA; zero on a closed cycle.
    pub fn first_law_residual(&self) -> f64 {
        self.q_h + self.q_c + self.w_bc + self.w_da
    }
}

/// η = (Q_H − |Q_C|) / (Q_H + Q_L).
pub fn efficiency(ledger: &HeatLedger) -> Option<f64> {
    let drawn = ledger.q_h + ledger.q_l;
    (drawn > 0.0).then(|| ledger.work() / drawn)
}

/// η_int = 1 − |Q_C| / Q_H.
pub fn internal_efficiency(ledger: &HeatLedger) -> Option<f64> {
    (ledger.q_h > 0.0).then(|| 1.0 - ledger.q_c.abs() / ledger.q_h)
}

/// γ(B₁ − B₂) / (B₁ − B₂ + γB₂), the closed-cycle efficiency.
pub fn closed_form_efficiency(b1: f64, b2: f64, gamma: f64) -> f64 {
    gamma * (b1 - b2) / (b1 - b2 + gamma * b2)
}

/// 1 − B₂/B₁, reached without heat leak.
pub fn max_efficiency(b1: f64, b2: f64) -> f64 {
    1.0 - b2 / b1
}

/// Mean power |W| / τ_cycle.
pub fn power(work: f64, tau_cycle: f64) -> Result<f64> {
    if !(tau_cycle > 0.0) {
        return Err(OttoError::Domain(format!(
            "cycle time must be positive, got {tau_cycle}"
        )));
    }
    Ok(work / tau_cycle)
}

/// σ_W² as the sum of the endpoint energy variances of both heat strokes.
///
/// This estimator treats the initial and final energies of each stroke as
/// independent; see [`trajectory_work_statistics`] for the correlated one.
pub fn work_fluctuations(
    p_a: &LevelDistribution,
    p_b: &LevelDistribution,
    p_c: &LevelDistribution,
    p_d: &LevelDistribution,
    f: &FieldSchedule,
    c: &CouplingConstants,
) -> f64 {
    let sigma_qh = energy_variance(p_b, f.b1, c) + energy_variance(p_a, f.b1, c);
    let sigma_qc = energy_variance(p_d, f.b2, c) + energy_variance(p_c, f.b2, c);
    sigma_qh + sigma_qc
}

/// σ_P² = σ_W² / τ_cycle².
pub fn power_variance(sigma_w_sq: f64, tau_cycle: f64) -> f64 {
    sigma_w_sq / (tau_cycle * tau_cycle)
}

/// F_P = σ_P² / P, absent when the engine produces no work.
pub fn fano_factor(sigma_p_sq: f64, p: f64) -> Option<f64> {
    (p > 0.0).then(|| sigma_p_sq / p)
}

/// Work statistics from sampled single-atom cycles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryWorkStatistics {
    pub n_traj: usize,
    pub mean_work: f64,
    pub work_variance: f64,
    pub mean_quanta_heating: f64,
    pub mean_quanta_cooling: f64,
}

/// Samples `n_traj` complete cycles (heating at B₁, cooling at B₂) from
/// levels drawn out of `start`, and returns the exact per-trajectory work
/// λ(k_H B₁ − k_C B₂) statistics. Stream `stream` of `seed` is used.
pub fn trajectory_work_statistics(
    spec: &CycleSpec,
    start: &LevelDistribution,
    n_traj: usize,
    seed: u64,
    stream: u64,
) -> Result<TrajectoryWorkStatistics> {
    if n_traj == 0 {
        return Err(OttoError::Domain(
            "ensemble needs at least one trajectory".into(),
        ));
    }
    let heat = ContactPhase::heating(spec.tau_h, spec.field.b1, &spec.rates);
    let cool = ContactPhase::cooling(spec.tau_c, spec.field.b2, &spec.rates);
    let lambda = spec.constants.lambda();
    let mut rng = stream_rng(seed, stream);
    let mut work = Moments::default();
    let (mut sh, mut sc) = (0.0, 0.0);
    for _ in 0..n_traj {
        let level = draw_level(start, &mut rng);
        let up = sample_path(level, &heat, &mut rng);
        let down = sample_path(up.final_level(), &cool, &mut rng);
        let kh = up.quanta_exchanged as f64;
        let kc = down.quanta_exchanged as f64;
        let w = lambda * (kh * spec.field.b1 - kc * spec.field.b2);
        work.push(w);
        sh += kh;
        sc += kc;
    }
    let n = n_traj as f64;
    Ok(TrajectoryWorkStatistics {
        n_traj,
        mean_work: work.mean(),
        work_variance: work.variance(),
        mean_quanta_heating: sh / n,
        mean_quanta_cooling: sc / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const B1: f64 = 346.5;
    const B2: f64 = 31.6;

    fn delta(n: usize) -> LevelDistribution {
        LevelDistribution::delta(n).unwrap()
    }

    fn two_point() -> LevelDistribution {
        LevelDistribution::new([0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5]).unwrap()
    }

    #[test]
    fn engine_side_heat_examples() {
        let c = CouplingConstants::default();
        let d = LevelDistribution::uniform();
        assert_eq!(heat_engine_side(&d, &d, B1, &c), 0.0);
        let up = heat_engine_side(&delta(0), &delta(6), B1, &c);
        assert!((up - 6.0 * c.lambda() * B1).abs() < 1e-9);
        assert!((up - 34.9e3).abs() < 20.0);
        let down = heat_engine_side(&delta(6), &delta(0), B2, &c);
        assert!((down + 6.0 * c.lambda() * B2).abs() < 1e-9);
        assert!((down + 3.18e3).abs() < 5.0);
    }

    #[test]
    fn stroke_work_examples() {
        let c = CouplingConstants::default();
        assert_eq!(work_stroke(&LevelDistribution::uniform(), B1, B1, &c), 0.0);
        let w = work_stroke(&delta(6), B1, B2, &c);
        assert!((w - 6.0 * c.lambda() * (B2 - B1)).abs() < 1e-9);
        assert!((w + 31.7e3).abs() < 50.0);
        assert_eq!(work_stroke(&delta(0), B2, B1, &c), 0.0);
    }

    #[test]
    fn heat_leak_examples() {
        let c = CouplingConstants::default();
        let f = FieldSchedule::default();
        let d = LevelDistribution::uniform();
        assert_eq!(heat_leak(&d, &d, &f, &c), 0.0);
        let l = heat_leak(&delta(0), &delta(6), &f, &c);
        assert!((l - 6.0 * (c.kappa() - c.lambda()) * (B1 - B2)).abs() < 1e-9);
        // γ = 1/2 makes κ − λ = λ, so the leak equals the full-inversion work
        assert!((l - 6.0 * c.lambda() * (B1 - B2)).abs() < 1e-9);
        let lossless = CouplingConstants::new(0.5, 0.5).unwrap();
        assert_eq!(heat_leak(&delta(0), &delta(6), &f, &lossless), 0.0);
    }

    #[test]
    fn ledger_accounting_identities() {
        let c = CouplingConstants::default();
        let f = FieldSchedule::default();
        let pa = LevelDistribution::new([0.4, 0.3, 0.1, 0.1, 0.05, 0.05, 0.0]).unwrap();
        let pb = LevelDistribution::new([0.0, 0.05, 0.1, 0.15, 0.2, 0.2, 0.3]).unwrap();
        let l = HeatLedger::from_points(&pa, &pb, &pb, &pa, &f, &c);
        assert!((l.q_h - c.gamma() * l.q1).abs() < 1e-9);
        assert!((l.q_c.abs() - c.gamma() * l.q2.abs()).abs() < 1e-9);
        assert!((l.q_l - heat_leak(&pa, &pb, &f, &c)).abs() < 1e-9 * l.q_l.abs());
        assert!(l.first_law_residual().abs() < 1e-9 * l.q_h);
    }

    #[test]
    fn efficiency_examples() {
        let eta = closed_form_efficiency(B1, B2, 0.5);
        assert!((eta - 0.476).abs() < 0.003);
        assert!((closed_form_efficiency(B1, B2, 1.0) - 0.9088).abs() < 1e-4);
        assert_eq!(closed_form_efficiency(B1, B1, 0.5), 0.0);

        let c = CouplingConstants::default();
        let f = FieldSchedule::default();
        let l = HeatLedger::from_points(&delta(0), &delta(6), &delta(6), &delta(0), &f, &c);
        assert!((efficiency(&l).unwrap() - eta).abs() < 1e-12);
        assert!((internal_efficiency(&l).unwrap() - max_efficiency(B1, B2)).abs() < 1e-12);

        let idle = HeatLedger::from_points(&delta(0), &delta(0), &delta(0), &delta(0), &f, &c);
        assert_eq!(efficiency(&idle), None);
        assert_eq!(internal_efficiency(&idle), None);
    }

    #[test]
    fn internal_efficiency_limits() {
        let c = CouplingConstants::default();
        let near = FieldSchedule::new(B1, B1 - 1e-9, 10.0).unwrap();
        let l = HeatLedger::from_points(&delta(0), &delta(3), &delta(3), &delta(0), &near, &c);
        assert!(internal_efficiency(&l).unwrap().abs() < 1e-9);
        let low = FieldSchedule::new(B1, 1e-12, 10.0).unwrap();
        let l = HeatLedger::from_points(&delta(0), &delta(3), &delta(3), &delta(0), &low, &c);
        assert!((internal_efficiency(&l).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_examples() {
        assert_eq!(power(0.0, 960.0).unwrap(), 0.0);
        let c = CouplingConstants::default();
        let w = 6.0 * c.lambda() * (B1 - B2);
        let p = power(w, 960.0).unwrap();
        assert!((p - 33.0).abs() < 0.1, "{p}");
        assert!((power(w, 1920.0).unwrap() - p / 2.0).abs() < 1e-12);
        assert!(power(w, 0.0).is_err());
    }

    #[test]
    fn work_fluctuation_examples() {
        let c = CouplingConstants::default();
        let f = FieldSchedule::default();
        assert_eq!(
            work_fluctuations(&delta(0), &delta(6), &delta(6), &delta(0), &f, &c),
            0.0
        );

        let s = work_fluctuations(&delta(0), &two_point(), &two_point(), &delta(0), &f, &c);
        let expected = 9.0 * (c.lambda() * B1).powi(2) + 9.0 * (c.lambda() * B2).powi(2);
        assert!((s - expected).abs() < 1e-9 * expected);

        // no exchange at all, yet the endpoint estimator is non-zero
        let u = LevelDistribution::uniform();
        let s = work_fluctuations(&u, &u, &two_point(), &two_point(), &f, &c);
        let expected = 2.0 * (energy_variance(&u, B1, &c) + energy_variance(&two_point(), B2, &c));
        assert!((s - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn fano_examples() {
        assert_eq!(fano_factor(2.5, 2.5), Some(1.0));
        assert_eq!(fano_factor(0.0, 30.0), Some(0.0));
        assert_eq!(fano_factor(1.0, 0.0), None);
        assert_eq!(fano_factor(1.0, -3.0), None);
    }

    #[test]
    fn trajectory_work_of_saturated_cycle_is_deterministic() {
        let spec = CycleSpec::new(20_000.0, 20_000.0).unwrap();
        let s = trajectory_work_statistics(&spec, &delta(0), 2_000, 5, 0).unwrap();
        let c = spec.constants;
        assert!((s.mean_work - 6.0 * c.lambda() * (B1 - B2)).abs() < 1e-6);
        assert_eq!(s.work_variance, 0.0);
        assert_eq!(s.mean_quanta_heating, 6.0);
        assert_eq!(s.mean_quanta_cooling, 6.0);
    }
}
