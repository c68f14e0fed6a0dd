//! Conversions between spectroscopic wavenumbers, femtoseconds and Hartree
//! atomic units.
//!
//! Everything inside the propagator is expressed in atomic units (ħ = 1,
//! energies in Hartree, times in a.u.). Conversions happen only at the edges:
//! when a [`ModelConfig`](crate::operators::ModelConfig) is turned into
//! matrix elements and when recorded times are reported.

use core::f64::consts::PI;

use crate::error::{domain, Result};

/// Wavenumber equivalent of one Hartree, in cm⁻¹.
pub const CM1_PER_HARTREE: f64 = 219_474.631_363_2;

/// One atomic unit of time, in femtoseconds.
pub const FS_PER_AU_TIME: f64 = 0.024_188_843_265_05;

/// Energy in Hartree of a vibrational quantum with wavenumber `omega` (cm⁻¹).
pub fn cm1_to_energy_au(omega: f64) -> Result<f64> {
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(domain(alloc::format!(
            "wavenumber must be finite and non-negative, got {omega}"
        )));
    }
    Ok(omega / CM1_PER_HARTREE)
}

pub fn energy_au_to_cm1(energy: f64) -> f64 {
    energy * CM1_PER_HARTREE
}

/// Femtoseconds to atomic units of time.
pub fn fs_to_time_au(t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(alloc::format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    Ok(t / FS_PER_AU_TIME)
}

pub fn time_au_to_fs(t: f64) -> f64 {
    t * FS_PER_AU_TIME
}

/// Classical oscillation period, in fs, of a mode with wavenumber `omega` (cm⁻¹).
pub fn vibrational_period_fs(omega: f64) -> Result<f64> {
    let energy = cm1_to_energy_au(omega)?;
    if energy == 0.0 {
        return Err(domain("zero frequency has no period"));
    }
    Ok(time_au_to_fs(2.0 * PI / energy))
}
