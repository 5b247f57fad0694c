//! Cycle-time sweeps and stroke pairing.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{CONSTANTS_VERSION, MAX_LEVEL};
use crate::cycle::{find_limit_cycle, CycleRecord};
use crate::error::{OttoError, Result};
use crate::kinetics::{evolve_with_count, ContactPhase, RNG_ALGORITHM};
use crate::model::{CycleSpec, LevelDistribution};
use crate::thermo::{trajectory_work_statistics, TrajectoryWorkStatistics};

/// How the heating and cooling durations of a generated grid relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// τ_H = τ_C = t.
    #[default]
    Equal,
    /// Same contact budget 2t, split by [`pair_strokes_for_closure`].
    Closure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TauGrid {
    Pairs(Vec<(f64, f64)>),
    /// `steps` per-stroke durations evenly spaced in [min, max].
    Generated {
        min: f64,
        max: f64,
        steps: usize,
        pairing: Pairing,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub grid: TauGrid,
    pub base: CycleSpec,
    pub n_traj: usize,
    pub seed: u64,
    /// Worker threads; 0 uses all cores.
    pub workers: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub output_path: Option<PathBuf>,
}

impl SweepSpec {
    pub fn new(grid: TauGrid, base: CycleSpec) -> Result<Self> {
        let spec = Self {
            grid,
            base,
            n_traj: 0,
            seed: 0,
            workers: 0,
            max_iters: 1_000_000,
            tol: 1e-13,
            output_path: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        match &self.grid {
            TauGrid::Pairs(p) => {
                if let Some((h, c)) = p.iter().find(|(h, c)| !(positive(*h) && positive(*c))) {
                    return Err(OttoError::Config(format!(
                        "sweep durations must be positive, got ({h}, {c})"
                    )));
                }
            }
            TauGrid::Generated {
                min, max, steps, ..
            } => {
                if !(positive(*min) && positive(*max) && min < max) {
                    return Err(OttoError::Config(format!(
                        "sweep range must satisfy 0 < min < max, got [{min}, {max}]"
                    )));
                }
                if *steps < 2 {
                    return Err(OttoError::Config(format!(
                        "sweep needs at least 2 steps, got {steps}"
                    )));
                }
            }
        }
        if self.max_iters == 0 || !(self.tol > 0.0) {
            return Err(OttoError::Config(
                "limit cycle needs max_iters >= 1 and tol > 0".into(),
            ));
        }
        Ok(())
    }

    /// Resolves the grid to concrete (τ_H, τ_C) pairs.
    pub fn tau_pairs(&self) -> Result<Vec<(f64, f64)>> {
        match &self.grid {
            TauGrid::Pairs(p) => Ok(p.clone()),
            TauGrid::Generated {
                min,
                max,
                steps,
                pairing,
            } => (0..*steps)
                .map(|i| {
                    let t = min + (max - min) * i as f64 / (*steps - 1) as f64;
                    match pairing {
                        Pairing::Equal => Ok((t, t)),
                        Pairing::Closure => pair_strokes_for_closure(
                            &self.base,
                            2.0 * t + 2.0 * self.base.field.ramp_time,
                        ),
                    }
                })
                .collect(),
        }
    }
}

/// Provenance attached to every sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub schema_version: u32,
    pub generator: String,
    pub seed: u64,
    pub rate_table_hash: String,
    pub constants_version: String,
    pub rng_algorithm: String,
    pub b1_mg: f64,
    pub b2_mg: f64,
    pub ramp_time_ms: f64,
    pub gamma: f64,
    pub limit_cycle_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub tau_h: f64,
    pub tau_c: f64,
    pub tau_cycle: f64,
    pub record: Option<CycleRecord>,
    pub iterations: Option<usize>,
    pub error: Option<String>,
    /// Trajectory-sampled work statistics at the limit cycle, when enabled.
    pub stochastic: Option<TrajectoryWorkStatistics>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub metadata: SweepMetadata,
    /// Sorted by τ_cycle.
    pub rows: Vec<SweepRow>,
    /// Row index of maximum power among successful rows.
    pub argmax_power: Option<usize>,
    /// Interpolated τ_cycle (ms) where F_P crosses 1.
    pub fano_crossing: Option<f64>,
}

impl SweepResult {
    pub fn records(&self) -> impl Iterator<Item = &CycleRecord> {
        self.rows.iter().filter_map(|r| r.record.as_ref())
    }

    pub fn max_power_row(&self) -> Option<&SweepRow> {
        self.argmax_power.map(|i| &self.rows[i])
    }
}

pub const SCHEMA_VERSION: u32 = 1;

fn metadata(spec: &SweepSpec) -> SweepMetadata {
    SweepMetadata {
        schema_version: SCHEMA_VERSION,
        generator: concat!("otto-core ", env!("CARGO_PKG_VERSION")).to_string(),
        seed: spec.seed,
        rate_table_hash: spec.base.rates.fingerprint(),
        constants_version: CONSTANTS_VERSION.to_string(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
        b1_mg: spec.base.field.b1,
        b2_mg: spec.base.field.b2,
        ramp_time_ms: spec.base.field.ramp_time,
        gamma: spec.base.constants.gamma(),
        limit_cycle_tol: spec.tol,
    }
}

fn run_point(spec: &SweepSpec, index: usize, tau_h: f64, tau_c: f64) -> SweepRow {
    let mut row = SweepRow {
        index,
        tau_h,
        tau_c,
        tau_cycle: tau_h + tau_c + 2.0 * spec.base.field.ramp_time,
        record: None,
        iterations: None,
        error: None,
        stochastic: None,
    };
    let outcome = spec.base.with_strokes(tau_h, tau_c).and_then(|cs| {
        let lc = find_limit_cycle(&cs, spec.max_iters, spec.tol)?;
        let stochastic = if spec.n_traj > 0 {
            Some(trajectory_work_statistics(
                &cs,
                &lc.record.dist_a,
                spec.n_traj,
                spec.seed,
                index as u64,
            )?)
        } else {
            None
        };
        Ok((lc, stochastic))
    });
    match outcome {
        Ok((lc, stochastic)) => {
            row.tau_cycle = lc.record.tau_cycle;
            row.iterations = Some(lc.iterations);
            row.record = Some(lc.record);
            row.stochastic = stochastic;
        }
        Err(e) => row.error = Some(format!("{}: {e}", e.category())),
    }
    row
}

/// Runs the limit cycle at every grid point on a bounded worker pool.
/// Per-point failures are kept in the row and skipped by the summaries.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let pairs = spec.tau_pairs()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| OttoError::Config(format!("cannot start worker pool: {e}")))?;
    let mut rows: Vec<SweepRow> = pool.install(|| {
        pairs
            .par_iter()
            .enumerate()
            .map(|(i, &(h, c))| run_point(spec, i, h, c))
            .collect()
    });
    rows.sort_by(|a, b| a.tau_cycle.total_cmp(&b.tau_cycle));

    let argmax_power = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.record.as_ref().map(|rec| (i, rec.power)))
        .fold(None, |best: Option<(usize, f64)>, (i, p)| match best {
            Some((_, bp)) if bp >= p => best,
            _ => Some((i, p)),
        })
        .map(|(i, _)| i);

    Ok(SweepResult {
        metadata: metadata(spec),
        fano_crossing: fano_crossing(&rows),
        rows,
        argmax_power,
    })
}

/// First τ_cycle at which F_P − 1 changes sign between consecutive rows
/// with a defined Fano factor, by linear interpolation.
pub fn fano_crossing(rows: &[SweepRow]) -> Option<f64> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| {
            r.record
                .as_ref()
                .and_then(|rec| rec.fano.map(|f| (rec.tau_cycle, f - 1.0)))
        })
        .collect();
    points.windows(2).find_map(|w| {
        let ((t0, y0), (t1, y1)) = (w[0], w[1]);
        if y0 == 0.0 {
            Some(t0)
        } else if y0.signum() != y1.signum() || y1 == 0.0 {
            Some(t0 + (t1 - t0) * y0 / (y0 - y1))
        } else {
            None
        }
    })
}

/// Mean collisions of a polarized contact: heating from m_F = +3 or
/// cooling from m_F = −3.
fn polarized_count(spec: &CycleSpec, heating: bool, duration: f64) -> Result<f64> {
    let out = if heating {
        evolve_with_count(
            &LevelDistribution::ground(),
            &ContactPhase::heating(duration, spec.field.b1, &spec.rates),
        )?
    } else {
        evolve_with_count(
            &LevelDistribution::delta(MAX_LEVEL)?,
            &ContactPhase::cooling(duration, spec.field.b2, &spec.rates),
        )?
    };
    Ok(out.collisions)
}

/// Collision-count tolerance of [`pair_strokes_for_closure`].
pub const CLOSURE_COUNT_TOL: f64 = 1e-9;

/// Splits the contact budget τ_cycle − 2τ into (τ_H, τ_C) so that a
/// heating stroke from the polarized ground state and a cooling stroke from
/// the polarized top state carry the same mean number of collisions.
pub fn pair_strokes_for_closure(base: &CycleSpec, tau_cycle: f64) -> Result<(f64, f64)> {
    let budget = tau_cycle - 2.0 * base.field.ramp_time;
    if !(budget > 0.0) {
        return Err(OttoError::Domain(format!(
            "cycle time {tau_cycle} ms leaves no contact time after two {} ms ramps",
            base.field.ramp_time
        )));
    }
    let imbalance = |f: f64| -> Result<f64> {
        Ok(polarized_count(base, true, f * budget)?
            - polarized_count(base, false, (1.0 - f) * budget)?)
    };

    let mid = imbalance(0.5)?;
    if mid.abs() < CLOSURE_COUNT_TOL {
        return Ok((0.5 * budget, 0.5 * budget));
    }
    // imbalance rises monotonically from −N_C(budget) at f = 0 to N_H(budget) at f = 1
    let (mut lo, mut hi) = if mid > 0.0 { (0.0, 0.5) } else { (0.5, 1.0) };
    let (g_lo, g_hi) = (imbalance(lo)?, imbalance(hi)?);
    if g_lo > CLOSURE_COUNT_TOL || g_hi < -CLOSURE_COUNT_TOL {
        return Err(OttoError::Closure(format!(
            "counts not bracketed on [{lo}, {hi}]: imbalance {g_lo:e} .. {g_hi:e}"
        )));
    }
    let mut f = 0.5 * (lo + hi);
    let mut g = imbalance(f)?;
    for _ in 0..200 {
        if g.abs() < CLOSURE_COUNT_TOL || hi - lo < 1e-15 {
            break;
        }
        if g > 0.0 {
            hi = f;
        } else {
            lo = f;
        }
        f = 0.5 * (lo + hi);
        g = imbalance(f)?;
    }
    let (tau_h, tau_c) = (f * budget, (1.0 - f) * budget);
    if g.abs() >= CLOSURE_COUNT_TOL || tau_h <= 1e-9 * budget || tau_c <= 1e-9 * budget {
        return Err(OttoError::Closure(format!(
            "no split of {budget} ms balances the counts (best f = {f}, imbalance {g:e})"
        )));
    }
    Ok((tau_h, tau_c))
}
