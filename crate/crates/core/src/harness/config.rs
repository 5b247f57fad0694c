//! Experiment configuration: a single TOML (or JSON) file holding the
//! constants, fields, rate table, cycle, sweep grid and seed.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{OttoError, Result};
use crate::kinetics::Direction;
use crate::model::{CouplingConstants, CycleSpec, FieldSchedule, LevelDistribution, RateTable};

use super::sweep::{Pairing, SweepSpec, TauGrid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub constants: ConstantsConfig,
    pub field: FieldSchedule,
    pub rates: RatesConfig,
    pub cycle: CycleConfig,
    pub limit_cycle: LimitCycleConfig,
    pub sweep: SweepConfig,
    pub trajectories: TrajectoriesConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 20_200_601,
            constants: ConstantsConfig::default(),
            field: FieldSchedule::default(),
            rates: RatesConfig::default(),
            cycle: CycleConfig::default(),
            limit_cycle: LimitCycleConfig::default(),
            sweep: SweepConfig::default(),
            trajectories: TrajectoriesConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstantsConfig {
    pub g_cs: f64,
    pub g_rb: f64,
    /// Kinetic bath temperature, nK. Metadata only.
    pub temperature_nk: f64,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        Self {
            g_cs: CouplingConstants::DEFAULT_G_CS,
            g_rb: CouplingConstants::DEFAULT_G_RB,
            temperature_nk: 950.0,
        }
    }
}

/// Either one rate for every transition or two explicit six-entry lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RatesConfig {
    pub uniform: Option<f64>,
    pub heating: Option<Vec<f64>>,
    pub cooling: Option<Vec<f64>>,
}

impl Default for RatesConfig {
    fn default() -> Self {
        Self {
            uniform: Some(6.0 / RateTable::DEFAULT_INVERSION_TIME_MS),
            heating: None,
            cooling: None,
        }
    }
}

impl RatesConfig {
    pub fn build(&self) -> Result<RateTable> {
        fn six(name: &str, v: &[f64]) -> Result<[f64; 6]> {
            v.try_into().map_err(|_| {
                OttoError::Config(format!("rates.{name} needs 6 entries, got {}", v.len()))
            })
        }
        match (self.uniform, &self.heating, &self.cooling) {
            (_, Some(h), Some(c)) => RateTable::new(six("heating", h)?, six("cooling", c)?),
            (Some(u), None, None) => RateTable::uniform(u),
            (u, h, c) => {
                // one explicit list falls back to the uniform value for the other
                let u = u.ok_or_else(|| {
                    OttoError::Config(
                        "rates: give `uniform` or both `heating` and `cooling`".into(),
                    )
                })?;
                let h = h
                    .as_deref()
                    .map(|h| six("heating", h))
                    .transpose()?
                    .unwrap_or([u; 6]);
                let c = c
                    .as_deref()
                    .map(|c| six("cooling", c))
                    .transpose()?
                    .unwrap_or([u; 6]);
                RateTable::new(h, c)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CycleConfig {
    pub tau_h: f64,
    pub tau_c: f64,
    pub bath_swap_time: f64,
    /// Distribution at point A; defaults to the polarized m_F = +3 state.
    pub initial: Option<Vec<f64>>,
    pub adiabatic_threshold: f64,
    pub closure_tol: f64,
}

impl Default for CycleConfig {
    fn default() -> Self {
        Self {
            tau_h: 470.0,
            tau_c: 470.0,
            bath_swap_time: CycleSpec::DEFAULT_BATH_SWAP_TIME,
            initial: None,
            adiabatic_threshold: CycleSpec::DEFAULT_ADIABATIC_THRESHOLD,
            closure_tol: CycleSpec::DEFAULT_CLOSURE_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitCycleConfig {
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for LimitCycleConfig {
    fn default() -> Self {
        Self {
            max_iters: 1_000_000,
            tol: 1e-13,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Explicit (τ_H, τ_C) pairs in ms; overrides the generated grid.
    pub tau_pairs: Option<Vec<(f64, f64)>>,
    /// Per-stroke duration range of the generated grid, ms.
    pub tau_min: f64,
    pub tau_max: f64,
    pub steps: usize,
    pub pairing: Pairing,
    /// Trajectories per point for the stochastic cross-check; 0 disables it.
    pub n_traj: usize,
    /// Worker threads; 0 uses all cores.
    pub workers: usize,
    pub output: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            tau_pairs: None,
            tau_min: 50.0,
            tau_max: 1500.0,
            steps: 30,
            pairing: Pairing::Equal,
            n_traj: 0,
            workers: 0,
            output: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajectoriesConfig {
    pub direction: Direction,
    pub duration: f64,
    pub n_traj: usize,
    /// Start distribution; defaults to the polarized state at the start of
    /// the chosen direction.
    pub start: Option<Vec<f64>>,
}

impl Default for TrajectoriesConfig {
    fn default() -> Self {
        Self {
            direction: Direction::Heating,
            duration: 300.0,
            n_traj: 10_000,
            start: None,
        }
    }
}

impl ExperimentConfig {
    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| OttoError::io(path, e))?;
        let is_json = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let cfg: Self = if is_json {
            serde_json::from_str(&text).map_err(|e| OttoError::Parse {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?
        } else {
            toml::from_str(&text).map_err(|e| OttoError::Parse {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config is always serializable")
    }

    pub fn validate(&self) -> Result<()> {
        self.cycle_spec()?;
        self.sweep_spec()?;
        if self.limit_cycle.max_iters == 0 || !(self.limit_cycle.tol > 0.0) {
            return Err(OttoError::Config(
                "limit_cycle needs max_iters >= 1 and tol > 0".into(),
            ));
        }
        Ok(())
    }

    pub fn coupling(&self) -> Result<CouplingConstants> {
        CouplingConstants::new(self.constants.g_cs, self.constants.g_rb)
    }

    pub fn cycle_spec(&self) -> Result<CycleSpec> {
        let initial = match &self.cycle.initial {
            Some(p) => LevelDistribution::try_from(p.clone())?,
            None => LevelDistribution::ground(),
        };
        let spec = CycleSpec {
            tau_h: self.cycle.tau_h,
            tau_c: self.cycle.tau_c,
            field: self.field,
            rates: self.rates.build()?,
            constants: self.coupling()?,
            bath_swap_time: self.cycle.bath_swap_time,
            initial,
            adiabatic_threshold: self.cycle.adiabatic_threshold,
            closure_tol: self.cycle.closure_tol,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let grid = match &self.sweep.tau_pairs {
            Some(pairs) => TauGrid::Pairs(pairs.clone()),
            None => TauGrid::Generated {
                min: self.sweep.tau_min,
                max: self.sweep.tau_max,
                steps: self.sweep.steps,
                pairing: self.sweep.pairing,
            },
        };
        let spec = SweepSpec {
            grid,
            base: self.cycle_spec()?,
            n_traj: self.sweep.n_traj,
            seed: self.seed,
            workers: self.sweep.workers,
            max_iters: self.limit_cycle.max_iters,
            tol: self.limit_cycle.tol,
            output_path: self.sweep.output.clone(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn trajectory_start(&self) -> Result<LevelDistribution> {
        match &self.trajectories.start {
            Some(p) => LevelDistribution::try_from(p.clone()),
            None => match self.trajectories.direction {
                Direction::Heating => Ok(LevelDistribution::ground()),
                Direction::Cooling => LevelDistribution::delta(crate::constants::MAX_LEVEL),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        let spec = cfg.cycle_spec().unwrap();
        assert_eq!(spec.rates, RateTable::calibrated_default());
        assert_eq!(spec.field, FieldSchedule::default());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = ExperimentConfig::default();
        let back: ExperimentConfig = toml::from_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_toml_uses_defaults() {
        let cfg: ExperimentConfig = toml::from_str(
            r#"
            seed = 7
            [rates]
            heating = [0.02, 0.02, 0.02, 0.02, 0.02, 0.02]
            cooling = [0.01, 0.01, 0.01, 0.01, 0.01, 0.01]
            [sweep]
            tau_pairs = [[100.0, 200.0], [300.0, 400.0]]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.field, FieldSchedule::default());
        let rates = cfg.rates.build().unwrap();
        assert_eq!(rates.heating_rate(0), 0.02);
        assert_eq!(rates.cooling_rate(1), 0.01);
        assert!(matches!(cfg.sweep_spec().unwrap().grid, TauGrid::Pairs(ref p) if p.len() == 2));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad: std::result::Result<ExperimentConfig, _> = toml::from_str("nonsense = 1");
        assert!(bad.is_err());

        let mut cfg = ExperimentConfig::default();
        cfg.field.b2 = 400.0;
        assert!(matches!(cfg.validate(), Err(OttoError::Config(_))));

        let mut cfg = ExperimentConfig::default();
        cfg.rates.heating = Some(vec![0.1; 5]);
        cfg.rates.cooling = Some(vec![0.1; 6]);
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::default();
        cfg.constants.g_cs = 0.75;
        assert!(cfg.validate().is_err());
    }
}
