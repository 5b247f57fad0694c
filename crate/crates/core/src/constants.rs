//! Physical constants and unit conventions.
//!
//! Internal units: magnetic field in mG, time in ms, energy in k_B·nK,
//! power in k_B·nK/ms. Constants are CODATA 2018.

/// Identifier written into result metadata.
pub const CONSTANTS_VERSION: &str = "CODATA2018";

/// Bohr magneton, J/T.
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
/// Boltzmann constant, J/K (exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Reduced Planck constant, J·s (exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Tesla per milligauss.
pub const TESLA_PER_MILLIGAUSS: f64 = 1.0e-7;
/// Seconds per millisecond.
pub const SECONDS_PER_MS: f64 = 1.0e-3;
/// Nanokelvin per kelvin.
pub const NANOKELVIN_PER_KELVIN: f64 = 1.0e9;

/// μ_B / k_B expressed in nK per mG.
pub fn bohr_magneton_nk_per_mg() -> f64 {
    BOHR_MAGNETON / BOLTZMANN * TESLA_PER_MILLIGAUSS * NANOKELVIN_PER_KELVIN
}

/// Number of quasi-spin levels in the F = 3 manifold.
pub const NUM_LEVELS: usize = 7;
/// Highest level index (m_F = -3).
pub const MAX_LEVEL: usize = NUM_LEVELS - 1;

/// Magnetic quantum number for level index `n` (n = 3 - m_F).
pub fn m_f(n: usize) -> i32 {
    3 - n as i32
}
