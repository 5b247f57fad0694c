//! Invariant checks on a configured cycle and on finished sweeps.

use serde::Serialize;

use crate::cycle::{find_limit_cycle, CycleRecord};
use crate::error::Result;
use crate::model::CycleSpec;
use crate::thermo::{closed_form_efficiency, max_efficiency};

use super::counting::counting_statistics;
use super::sweep::SweepResult;
use crate::kinetics::Direction;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

/// Relative tolerance of the first-law balance.
pub const FIRST_LAW_TOL: f64 = 1e-9;
/// Absolute tolerance of the closed-cycle efficiency identities.
pub const EFFICIENCY_TOL: f64 = 1e-12;
/// Absolute tolerance of N_spin = Δ⟨n⟩ per stroke.
pub const COLLISION_IDENTITY_TOL: f64 = 1e-9;
/// Maximum spread of the η column of a sweep.
pub const ETA_SPREAD_TOL: f64 = 1e-9;
/// Total mean collisions per cycle after which σ_P must fall.
pub const SIGMA_P_DECAY_N_SPIN: f64 = 6.0;
/// Lower bound on the chi-square p-value of ensemble vs rate equations.
pub const CHI_SQUARE_P_MIN: f64 = 0.001;

/// Closed-cycle checks on one limit-cycle record.
pub fn check_record(spec: &CycleSpec, r: &CycleRecord) -> Vec<CheckOutcome> {
    let f = &spec.field;
    let gamma = spec.constants.gamma();
    let mut out = Vec::new();

    let fl = r.ledger.first_law_residual();
    let scale = r.ledger.q_h.abs().max(f64::MIN_POSITIVE);
    out.push(CheckOutcome::new(
        "first_law",
        fl.abs() <= FIRST_LAW_TOL * scale,
        format!(
            "Q_H + Q_C + W_BC + W_DA = {fl:e} (Q_H = {:.6e})",
            r.ledger.q_h
        ),
    ));

    let expected = closed_form_efficiency(f.b1, f.b2, gamma);
    out.push(match r.eta {
        Some(eta) => CheckOutcome::new(
            "efficiency_closed_form",
            (eta - expected).abs() <= EFFICIENCY_TOL,
            format!("eta = {eta:.15}, closed form {expected:.15}"),
        ),
        None => CheckOutcome::new(
            "efficiency_closed_form",
            false,
            "eta undefined (no heat drawn)".into(),
        ),
    });

    let expected = max_efficiency(f.b1, f.b2);
    out.push(match r.eta_int {
        Some(e) => CheckOutcome::new(
            "internal_efficiency",
            (e - expected).abs() <= EFFICIENCY_TOL,
            format!("eta_int = {e:.15}, 1 - B2/B1 = {expected:.15}"),
        ),
        None => CheckOutcome::new(
            "internal_efficiency",
            false,
            "eta_int undefined (Q_H = 0)".into(),
        ),
    });

    let dh = r.dist_b.mean_level() - r.dist_a.mean_level();
    let dc = r.dist_c.mean_level() - r.dist_d.mean_level();
    out.push(CheckOutcome::new(
        "collision_count_identity",
        (r.n_heating - dh).abs() <= COLLISION_IDENTITY_TOL
            && (r.n_cooling - dc).abs() <= COLLISION_IDENTITY_TOL,
        format!(
            "N_AB = {:.12}, d<n> = {dh:.12}; N_CD = {:.12}, -d<n> = {dc:.12}",
            r.n_heating, r.n_cooling
        ),
    ));

    out.push(CheckOutcome::new(
        "heat_leak_identity",
        (r.ledger.q_l - r.q_l_closed_form).abs() <= EFFICIENCY_TOL * r.ledger.q_l.abs().max(1.0),
        format!(
            "bath accounting {:.12e}, closed form {:.12e}",
            r.ledger.q_l, r.q_l_closed_form
        ),
    ));

    let bound = r.ledger.q_h / r.tau_cycle * max_efficiency(f.b1, f.b2);
    out.push(CheckOutcome::new(
        "power_bound",
        r.power <= bound * (1.0 + 1e-12) + 1e-15,
        format!("P = {:.6e}, Q_H/tau (1 - B2/B1) = {bound:.6e}", r.power),
    ));

    out.push(CheckOutcome::new(
        "ramp_adiabaticity",
        r.ramp_down.passes && r.ramp_up.passes,
        format!(
            "max A = {:.3e} (threshold {})",
            r.ramp_down.max_a.max(r.ramp_up.max_a),
            r.ramp_down.threshold
        ),
    ));
    out
}

/// Post-hoc validators of a finished sweep.
pub fn validate_sweep(result: &SweepResult) -> Vec<CheckOutcome> {
    let recs: Vec<&CycleRecord> = result.records().collect();
    let mut out = Vec::new();

    let etas: Vec<f64> = recs.iter().filter_map(|r| r.eta).collect();
    let spread = etas.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - etas.iter().copied().fold(f64::INFINITY, f64::min);
    out.push(CheckOutcome::new(
        "eta_constant",
        !etas.is_empty() && spread < ETA_SPREAD_TOL,
        format!("spread {spread:e} over {} rows", etas.len()),
    ));

    let tail: Vec<&&CycleRecord> = recs
        .iter()
        .filter(|r| r.n_spin >= SIGMA_P_DECAY_N_SPIN)
        .collect();
    let decreasing = tail.windows(2).all(|w| w[1].sigma_p_sq < w[0].sigma_p_sq);
    out.push(CheckOutcome::new(
        "sigma_p_decreasing",
        decreasing,
        format!("{} rows with N_spin >= {SIGMA_P_DECAY_N_SPIN}", tail.len()),
    ));

    let first = recs.first().and_then(|r| r.fano);
    out.push(CheckOutcome::new(
        "fano_super_poissonian_at_short_times",
        first.is_some_and(|f| f > 1.0),
        format!("F_P at shortest cycle = {first:?}"),
    ));

    out.push(CheckOutcome::new(
        "all_points_converged",
        result.rows.iter().all(|r| r.record.is_some()),
        format!(
            "{} of {} points failed",
            result.rows.iter().filter(|r| r.record.is_none()).count(),
            result.rows.len()
        ),
    ));
    out
}

/// Full invariant suite for one configured cycle.
pub fn run_checks(
    spec: &CycleSpec,
    max_iters: usize,
    tol: f64,
    n_traj: usize,
    seed: u64,
) -> Result<Vec<CheckOutcome>> {
    let lc = find_limit_cycle(spec, max_iters, tol)?;
    let mut out = vec![CheckOutcome::new(
        "limit_cycle_converged",
        lc.record.closed,
        format!(
            "{} iterations, residual {:e}",
            lc.iterations, lc.record.residual
        ),
    )];
    out.extend(check_record(spec, &lc.record));
    if n_traj > 0 {
        let report = counting_statistics(
            spec,
            Direction::Heating,
            spec.tau_h,
            &lc.record.dist_a,
            n_traj,
            seed,
        )?;
        let se = report.ensemble.standard_error();
        out.push(CheckOutcome::new(
            "stochastic_consistency",
            report.chi_square_p_value > CHI_SQUARE_P_MIN
                && (report.ensemble.mean_quanta - report.master_mean_quanta).abs() <= 3.0 * se,
            format!(
                "chi-square p = {:.4}, mean quanta {:.4} vs {:.4} (se {se:.4})",
                report.chi_square_p_value, report.ensemble.mean_quanta, report.master_mean_quanta
            ),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_cycle_passes_all_checks() {
        let spec = CycleSpec::new(470.0, 470.0).unwrap();
        let out = run_checks(&spec, 1_000_000, 1e-13, 2_000, 3).unwrap();
        for c in &out {
            assert!(c.passed, "{c:?}");
        }
        assert_eq!(out.len(), 9);
    }
}
