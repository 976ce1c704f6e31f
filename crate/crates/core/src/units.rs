//! Physical constants (exact SI 2019 values) and the unit system used at the
//! crate's public surface: pH, nH, fH, fF, µA, Φ0, ns, and energies as E/h in GHz.

use crate::scalar::Real;

pub const PLANCK_H: f64 = 6.626_070_15e-34;
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const HBAR: f64 = PLANCK_H / (2.0 * std::f64::consts::PI);
/// Superconducting flux quantum h/2e in Wb.
pub const FLUX_QUANTUM: f64 = PLANCK_H / (2.0 * ELEMENTARY_CHARGE);

pub const PICO: f64 = 1e-12;
pub const NANO: f64 = 1e-9;
pub const FEMTO: f64 = 1e-15;
pub const MICRO: f64 = 1e-6;
pub const GIGA: f64 = 1e9;
pub const MEGA: f64 = 1e6;

/// Converts an SI energy in J to E/h in GHz.
#[inline]
pub fn joule_to_ghz<T: Real>(e: T) -> T {
    e / T::lit(PLANCK_H * GIGA)
}

/// Converts E/h in GHz to J.
#[inline]
pub fn ghz_to_joule<T: Real>(f: T) -> T {
    f * T::lit(PLANCK_H * GIGA)
}

#[inline]
pub fn mhz_to_ghz<T: Real>(f: T) -> T {
    f * T::lit(1e-3)
}

#[inline]
pub fn ghz_to_mhz<T: Real>(f: T) -> T {
    f * T::lit(1e3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_quantum_value() {
        assert!((FLUX_QUANTUM - 2.067_833_848e-15).abs() < 1e-23);
    }

    #[test]
    fn energy_round_trip() {
        let f = 2.6_f64;
        assert!((joule_to_ghz(ghz_to_joule(f)) - f).abs() < 1e-14);
    }
}
