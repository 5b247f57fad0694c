//! The four-stroke Otto cycle: heating contact at B₁ (A→B), adiabatic ramp
//! to B₂ (B→C), bath polarization swap, cooling contact at B₂ (C→D) and the
//! ramp back to B₁ (D→A).

use serde::Serialize;

use crate::constants::{BOHR_MAGNETON, HBAR, SECONDS_PER_MS, TESLA_PER_MILLIGAUSS};
use crate::error::{OttoError, Result};
use crate::kinetics::{evolve_with_count, ContactPhase, StrokeOutcome, StrokePropagator};
use crate::model::{CycleSpec, LevelDistribution};
use crate::thermo::{self, HeatLedger};

/// Adiabaticity parameter A = ħ|Ḃ| / (g μ_B B²) for a field `b` in mG
/// changing at `b_dot` mG/ms, with Landé magnitude `g`.
pub fn adiabaticity(b: f64, b_dot: f64, g: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(OttoError::Domain(format!(
            "field must be positive, got {b}"
        )));
    }
    if !(g > 0.0) {
        return Err(OttoError::Domain(format!(
            "Landé factor must be positive, got {g}"
        )));
    }
    let b_tesla = b * TESLA_PER_MILLIGAUSS;
    let b_dot_si = b_dot.abs() * TESLA_PER_MILLIGAUSS / SECONDS_PER_MS;
    Ok(HBAR * b_dot_si / (g * BOHR_MAGNETON * b_tesla * b_tesla))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdiabaticityReport {
    pub a_at_start: f64,
    pub a_at_end: f64,
    /// Worst value along the ramp; for a linear ramp, at the lower field.
    pub max_a: f64,
    pub threshold: f64,
    pub passes: bool,
}

/// Linear field ramp. Populations are preserved exactly; the report flags
/// ramps that are too fast for that to hold physically.
pub fn adiabatic_ramp(
    dist: &LevelDistribution,
    from_b: f64,
    to_b: f64,
    tau: f64,
    g: f64,
    threshold: f64,
) -> Result<(LevelDistribution, AdiabaticityReport)> {
    if !(tau > 0.0) {
        return Err(OttoError::Domain(format!(
            "ramp time must be positive, got {tau}"
        )));
    }
    let b_dot = (to_b - from_b) / tau;
    let a_at_start = adiabaticity(from_b, b_dot, g)?;
    let a_at_end = adiabaticity(to_b, b_dot, g)?;
    let max_a = a_at_start.max(a_at_end);
    let report = AdiabaticityReport {
        a_at_start,
        a_at_end,
        max_a,
        threshold,
        passes: max_a < threshold,
    };
    Ok((*dist, report))
}

/// Distributions and observables of one cycle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleRecord {
    pub tau_h: f64,
    pub tau_c: f64,
    pub tau_cycle: f64,
    pub bath_swap_time: f64,
    pub dist_a: LevelDistribution,
    pub dist_b: LevelDistribution,
    pub dist_c: LevelDistribution,
    pub dist_d: LevelDistribution,
    pub ledger: HeatLedger,
    /// Heat leak from the closed-cycle formula, for comparison with `ledger.q_l`.
    pub q_l_closed_form: f64,
    /// Produced work Q_H − |Q_C|.
    pub w_total: f64,
    pub eta: Option<f64>,
    pub eta_int: Option<f64>,
    pub power: f64,
    pub sigma_w_sq: f64,
    pub sigma_p_sq: f64,
    pub fano: Option<f64>,
    pub n_heating: f64,
    pub n_cooling: f64,
    pub n_spin: f64,
    /// ‖p_A − p_D‖∞ after the closing ramp.
    pub residual: f64,
    pub closed: bool,
    pub ramp_down: AdiabaticityReport,
    pub ramp_up: AdiabaticityReport,
}

impl CycleRecord {
    pub fn q_h(&self) -> f64 {
        self.ledger.q_h
    }

    pub fn q_c(&self) -> f64 {
        self.ledger.q_c
    }

    pub fn q_l(&self) -> f64 {
        self.ledger.q_l
    }
}

fn assemble(
    spec: &CycleSpec,
    p_a: LevelDistribution,
    heat: StrokeOutcome,
    cool: StrokeOutcome,
) -> Result<CycleRecord> {
    let f = &spec.field;
    let c = &spec.constants;
    let g = c.g_rb();
    let (p_c, ramp_down) = adiabatic_ramp(
        &heat.dist,
        f.b1,
        f.b2,
        f.ramp_time,
        g,
        spec.adiabatic_threshold,
    )?;
    let p_d = cool.dist;
    let (p_a_next, ramp_up) =
        adiabatic_ramp(&p_d, f.b2, f.b1, f.ramp_time, g, spec.adiabatic_threshold)?;

    let p_b = heat.dist;
    let ledger = HeatLedger::from_points(&p_a, &p_b, &p_c, &p_d, f, c);
    let tau_cycle = spec.cycle_time();
    let w_total = ledger.work();
    let power = thermo::power(w_total, tau_cycle)?;
    let sigma_w_sq = thermo::work_fluctuations(&p_a, &p_b, &p_c, &p_d, f, c);
    let sigma_p_sq = thermo::power_variance(sigma_w_sq, tau_cycle);
    let residual = p_a.distance(&p_a_next);
    Ok(CycleRecord {
        tau_h: spec.tau_h,
        tau_c: spec.tau_c,
        tau_cycle,
        bath_swap_time: spec.bath_swap_time,
        dist_a: p_a,
        dist_b: p_b,
        dist_c: p_c,
        dist_d: p_d,
        ledger,
        q_l_closed_form: thermo::heat_leak(&p_a, &p_b, f, c),
        w_total,
        eta: thermo::efficiency(&ledger),
        eta_int: thermo::internal_efficiency(&ledger),
        power,
        sigma_w_sq,
        sigma_p_sq,
        fano: thermo::fano_factor(sigma_p_sq, power),
        n_heating: heat.collisions,
        n_cooling: cool.collisions,
        n_spin: heat.collisions + cool.collisions,
        residual,
        closed: residual < spec.closure_tol,
        ramp_down,
        ramp_up,
    })
}

/// Runs one cycle from `spec.initial`.
pub fn run_cycle(spec: &CycleSpec) -> Result<CycleRecord> {
    spec.validate()?;
    let heat = evolve_with_count(
        &spec.initial,
        &ContactPhase::heating(spec.tau_h, spec.field.b1, &spec.rates),
    )?;
    // bath swap: no transitions, populations carried over
    let cool = evolve_with_count(
        &heat.dist,
        &ContactPhase::cooling(spec.tau_c, spec.field.b2, &spec.rates),
    )?;
    assemble(spec, spec.initial, heat, cool)
}

/// Converged periodic steady state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitCycle {
    pub record: CycleRecord,
    /// Number of cycles run; the returned record is the last one.
    pub iterations: usize,
}

/// Repeats the cycle, feeding p_D back as the next p_A, until
/// ‖p_D − p_A‖∞ < `tol`.
pub fn find_limit_cycle(spec: &CycleSpec, max_iters: usize, tol: f64) -> Result<LimitCycle> {
    spec.validate()?;
    if max_iters == 0 || !(tol > 0.0) {
        return Err(OttoError::Domain(format!(
            "need max_iters >= 1 and tol > 0 (got {max_iters}, {tol})"
        )));
    }
    let heating = StrokePropagator::new(&ContactPhase::heating(
        spec.tau_h,
        spec.field.b1,
        &spec.rates,
    ))?;
    let cooling = StrokePropagator::new(&ContactPhase::cooling(
        spec.tau_c,
        spec.field.b2,
        &spec.rates,
    ))?;
    let mut p_a = spec.initial;
    let mut residual = f64::INFINITY;
    for k in 1..=max_iters {
        let heat = heating.apply(&p_a)?;
        let cool = cooling.apply(&heat.dist)?;
        residual = cool.dist.distance(&p_a);
        if residual < tol {
            return Ok(LimitCycle {
                record: assemble(spec, p_a, heat, cool)?,
                iterations: k,
            });
        }
        p_a = cool.dist;
    }
    Err(OttoError::NoConvergence {
        iterations: max_iters,
        residual,
    })
}
