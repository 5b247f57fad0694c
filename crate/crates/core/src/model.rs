//! Domain types shared by every part of the engine: the level distribution,
//! the Landé coupling constants, the spin-exchange rate table, the field
//! schedule and the cycle specification, plus the Zeeman energy ladder.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constants::{bohr_magneton_nk_per_mg, MAX_LEVEL, NUM_LEVELS};
use crate::error::{OttoError, Result};

/// Tolerance on Σp = 1 accepted by [`LevelDistribution::new`].
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Negative probabilities above this value are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-12;

/// Probability vector over the seven quasi-spin levels, indexed by
/// n = 3 - m_F so that n = 0 is the lowest-energy state m_F = +3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct LevelDistribution([f64; NUM_LEVELS]);

impl LevelDistribution {
    /// Validates and returns a distribution. Entries in `[-CLAMP_TOL, 0)`
    /// are clamped to zero and the vector renormalized.
    pub fn new(p: [f64; NUM_LEVELS]) -> Result<Self> {
        if p.iter().any(|x| !x.is_finite()) {
            return Err(OttoError::Domain(format!(
                "non-finite probability in {p:?}"
            )));
        }
        if let Some((n, &v)) = p.iter().enumerate().find(|(_, &v)| v < -CLAMP_TOL) {
            return Err(OttoError::Domain(format!("p[{n}] = {v:e} is negative")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(OttoError::Domain(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(Self::clamp_renormalize(p))
    }

    /// All population in level `n`.
    pub fn delta(n: usize) -> Result<Self> {
        check_level(n)?;
        let mut p = [0.0; NUM_LEVELS];
        p[n] = 1.0;
        Ok(Self(p))
    }

    pub fn uniform() -> Self {
        Self([1.0 / NUM_LEVELS as f64; NUM_LEVELS])
    }

    /// Spin-polarized start m_F = +3.
    pub fn ground() -> Self {
        Self::delta(0).expect("level 0 is valid")
    }

    fn clamp_renormalize(mut p: [f64; NUM_LEVELS]) -> Self {
        let mut clamped = false;
        for x in p.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
                clamped = true;
            }
        }
        if clamped {
            let sum: f64 = p.iter().sum();
            p.iter_mut().for_each(|x| *x /= sum);
        }
        Self(p)
    }

    /// Accepts raw integrator output: clamps tiny negatives, renormalizes,
    /// and reports the offending level if a value is below `-CLAMP_TOL`.
    pub(crate) fn from_integrator(p: [f64; NUM_LEVELS]) -> std::result::Result<Self, (usize, f64)> {
        if let Some((n, &v)) = p
            .iter()
            .enumerate()
            .find(|(_, &v)| v < -CLAMP_TOL || !v.is_finite())
        {
            return Err((n, v));
        }
        let mut p = p;
        for x in p.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let sum: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= sum);
        Ok(Self(p))
    }

    pub fn probabilities(&self) -> &[f64; NUM_LEVELS] {
        &self.0
    }

    pub fn get(&self, n: usize) -> f64 {
        self.0[n]
    }

    /// ⟨n⟩, the mean number of quanta stored in the engine.
    pub fn mean_level(&self) -> f64 {
        self.0.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    /// Variance of the level index.
    pub fn level_variance(&self) -> f64 {
        let mean = self.mean_level();
        self.0
            .iter()
            .enumerate()
            .map(|(n, p)| p * (n as f64 - mean).powi(2))
            .sum()
    }

    /// Max-norm distance.
    pub fn distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<f64>> for LevelDistribution {
    type Error = OttoError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        let arr: [f64; NUM_LEVELS] = v.try_into().map_err(|v: Vec<f64>| {
            OttoError::Domain(format!(
                "expected {NUM_LEVELS} probabilities, got {}",
                v.len()
            ))
        })?;
        Self::new(arr)
    }
}

impl From<LevelDistribution> for Vec<f64> {
    fn from(d: LevelDistribution) -> Self {
        d.0.to_vec()
    }
}

impl Default for LevelDistribution {
    fn default() -> Self {
        Self::ground()
    }
}

fn check_level(n: usize) -> Result<()> {
    if n > MAX_LEVEL {
        return Err(OttoError::Domain(format!(
            "level index {n} outside 0..={MAX_LEVEL}"
        )));
    }
    Ok(())
}

/// Landé-factor energy scales of engine (Cs) and bath (Rb) atoms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingConstants {
    g_cs: f64,
    g_rb: f64,
    lambda: f64,
    kappa: f64,
    gamma: f64,
}

impl CouplingConstants {
    pub const DEFAULT_G_CS: f64 = 0.25;
    pub const DEFAULT_G_RB: f64 = 0.5;

    /// Builds the constants from Landé factor magnitudes. Requires
    /// 0 < g_cs <= g_rb so that 0 < γ <= 1.
    pub fn new(g_cs: f64, g_rb: f64) -> Result<Self> {
        if !(g_cs.is_finite() && g_rb.is_finite() && g_cs > 0.0 && g_rb > 0.0) {
            return Err(OttoError::Config(format!(
                "Landé factors must be positive and finite (g_cs = {g_cs}, g_rb = {g_rb})"
            )));
        }
        let mu = bohr_magneton_nk_per_mg();
        let lambda = g_cs * mu;
        let kappa = g_rb * mu;
        let gamma = lambda / kappa;
        if gamma > 1.0 {
            return Err(OttoError::Config(format!(
                "γ = λ/κ = {gamma} exceeds 1 (g_cs = {g_cs}, g_rb = {g_rb})"
            )));
        }
        Ok(Self {
            g_cs,
            g_rb,
            lambda,
            kappa,
            gamma,
        })
    }

    pub fn g_cs(&self) -> f64 {
        self.g_cs
    }

    pub fn g_rb(&self) -> f64 {
        self.g_rb
    }

    /// Engine energy per quantum per unit field, k_B·nK/mG.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Bath energy per quantum per unit field, k_B·nK/mG.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for CouplingConstants {
    fn default() -> Self {
        Self::new(Self::DEFAULT_G_CS, Self::DEFAULT_G_RB).expect("default Landé factors are valid")
    }
}

/// Spin-exchange collision rates (1/ms).
///
/// `heating[n]` is Γ_H for n → n+1 (n = 0..=5); `cooling[n-1]` is Γ_C for
/// n → n-1 (n = 1..=6).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    heating: [f64; MAX_LEVEL],
    cooling: [f64; MAX_LEVEL],
}

impl RateTable {
    /// Mean time for a full six-quantum inversion with the default table.
    pub const DEFAULT_INVERSION_TIME_MS: f64 = 450.0;

    pub fn new(heating: [f64; MAX_LEVEL], cooling: [f64; MAX_LEVEL]) -> Result<Self> {
        for (name, rates) in [("heating", &heating), ("cooling", &cooling)] {
            if let Some((i, r)) = rates
                .iter()
                .enumerate()
                .find(|(_, r)| !(r.is_finite() && **r >= 0.0))
            {
                return Err(OttoError::Config(format!(
                    "{name} rate #{i} = {r} must be finite and non-negative"
                )));
            }
        }
        Ok(Self { heating, cooling })
    }

    /// Same rate for every transition in both directions.
    pub fn uniform(rate: f64) -> Result<Self> {
        Self::new([rate; MAX_LEVEL], [rate; MAX_LEVEL])
    }

    /// Uniform table whose mean six-step inversion time is
    /// [`Self::DEFAULT_INVERSION_TIME_MS`].
    pub fn calibrated_default() -> Self {
        Self::uniform(MAX_LEVEL as f64 / Self::DEFAULT_INVERSION_TIME_MS)
            .expect("calibrated rate is valid")
    }

    pub fn heating(&self) -> &[f64; MAX_LEVEL] {
        &self.heating
    }

    pub fn cooling(&self) -> &[f64; MAX_LEVEL] {
        &self.cooling
    }

    /// Rate of leaving level `n` upwards; zero at the top level.
    pub fn heating_rate(&self, n: usize) -> f64 {
        if n < MAX_LEVEL {
            self.heating[n]
        } else {
            0.0
        }
    }

    /// Rate of leaving level `n` downwards; zero at the ground level.
    pub fn cooling_rate(&self, n: usize) -> f64 {
        if (1..=MAX_LEVEL).contains(&n) {
            self.cooling[n - 1]
        } else {
            0.0
        }
    }

    pub fn max_rate(&self) -> f64 {
        self.heating
            .iter()
            .chain(self.cooling.iter())
            .copied()
            .fold(0.0, f64::max)
    }

    /// Hex SHA-256 prefix over the bit patterns of all rates.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for r in self.heating.iter().chain(self.cooling.iter()) {
            hasher.update(r.to_bits().to_le_bytes());
        }
        hasher
            .finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

impl Default for RateTable {
    fn default() -> Self {
        Self::calibrated_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RampShape {
    #[default]
    Linear,
}

/// Magnetic fields of the two isochoric strokes and the ramp between them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSchedule {
    /// Field during heating, mG.
    pub b1: f64,
    /// Field during cooling, mG.
    pub b2: f64,
    /// Ramp duration τ, ms.
    pub ramp_time: f64,
    #[serde(default)]
    pub ramp_shape: RampShape,
}

impl FieldSchedule {
    pub const DEFAULT_B1: f64 = 346.5;
    pub const DEFAULT_B2: f64 = 31.6;
    pub const DEFAULT_RAMP_TIME: f64 = 10.0;

    pub fn new(b1: f64, b2: f64, ramp_time: f64) -> Result<Self> {
        let f = Self {
            b1,
            b2,
            ramp_time,
            ramp_shape: RampShape::Linear,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b1.is_finite() && self.b2.is_finite() && self.b1 > self.b2 && self.b2 > 0.0) {
            return Err(OttoError::Config(format!(
                "fields must satisfy b1 > b2 > 0 (b1 = {}, b2 = {})",
                self.b1, self.b2
            )));
        }
        if !(self.ramp_time.is_finite() && self.ramp_time > 0.0) {
            return Err(OttoError::Config(format!(
                "ramp time must be positive, got {}",
                self.ramp_time
            )));
        }
        Ok(())
    }

    /// |dB/dt| of the linear ramp, mG/ms.
    pub fn ramp_rate(&self) -> f64 {
        (self.b1 - self.b2) / self.ramp_time
    }
}

impl Default for FieldSchedule {
    fn default() -> Self {
        Self::new(Self::DEFAULT_B1, Self::DEFAULT_B2, Self::DEFAULT_RAMP_TIME)
            .expect("default fields are valid")
    }
}

/// One Otto cycle: stroke durations, fields, rates, constants and start state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleSpec {
    /// Heating contact duration, ms.
    pub tau_h: f64,
    /// Cooling contact duration, ms.
    pub tau_c: f64,
    pub field: FieldSchedule,
    pub rates: RateTable,
    pub constants: CouplingConstants,
    /// Bath polarization swap duration, ms. Recorded only.
    pub bath_swap_time: f64,
    /// Distribution at point A.
    pub initial: LevelDistribution,
    /// Ramps with max A above this value are flagged.
    pub adiabatic_threshold: f64,
    /// ‖p_A − p_D‖∞ below which a cycle counts as closed.
    pub closure_tol: f64,
}

impl CycleSpec {
    pub const DEFAULT_BATH_SWAP_TIME: f64 = 4.4;
    pub const DEFAULT_ADIABATIC_THRESHOLD: f64 = 0.05;
    pub const DEFAULT_CLOSURE_TOL: f64 = 1e-9;

    /// Default physical setup with the given stroke durations.
    pub fn new(tau_h: f64, tau_c: f64) -> Result<Self> {
        let spec = Self {
            tau_h,
            tau_c,
            field: FieldSchedule::default(),
            rates: RateTable::default(),
            constants: CouplingConstants::default(),
            bath_swap_time: Self::DEFAULT_BATH_SWAP_TIME,
            initial: LevelDistribution::ground(),
            adiabatic_threshold: Self::DEFAULT_ADIABATIC_THRESHOLD,
            closure_tol: Self::DEFAULT_CLOSURE_TOL,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_strokes(&self, tau_h: f64, tau_c: f64) -> Result<Self> {
        let spec = Self {
            tau_h,
            tau_c,
            ..self.clone()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("tau_h", self.tau_h), ("tau_c", self.tau_c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(OttoError::Config(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        self.field.validate()?;
        if !(self.bath_swap_time.is_finite() && self.bath_swap_time >= 0.0) {
            return Err(OttoError::Config(format!(
                "bath swap time must be non-negative, got {}",
                self.bath_swap_time
            )));
        }
        if !(self.adiabatic_threshold > 0.0 && self.closure_tol > 0.0) {
            return Err(OttoError::Config(
                "adiabatic threshold and closure tolerance must be positive".into(),
            ));
        }
        Ok(())
    }

    /// τ_H + τ_C + 2τ. The bath swap is not counted.
    pub fn cycle_time(&self) -> f64 {
        self.tau_h + self.tau_c + 2.0 * self.field.ramp_time
    }
}

/// Zeeman energy n·λ·B of level `n` at field `b` (mG), in k_B·nK.
pub fn zeeman_energy(n: usize, b: f64, c: &CouplingConstants) -> Result<f64> {
    check_level(n)?;
    Ok(n as f64 * c.lambda() * b)
}

/// Σ_n p_n · nλB.
pub fn mean_energy(dist: &LevelDistribution, b: f64, c: &CouplingConstants) -> f64 {
    dist.mean_level() * c.lambda() * b
}

/// Second central moment of the Zeeman energy under `dist`.
pub fn energy_variance(dist: &LevelDistribution, b: f64, c: &CouplingConstants) -> f64 {
    dist.level_variance() * (c.lambda() * b).powi(2)
}

impl fmt::Display for LevelDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (n, p) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:+}: {p:.6}", crate::constants::m_f(n))?;
        }
        write!(f, "]")
    }
}
