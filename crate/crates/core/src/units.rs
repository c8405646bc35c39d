//! Unit conventions and conversions.
//!
//! Internally the whole crate works in natural units: ħ = c = k_B = 1 and one
//! free length unit. In that system a wavenumber is an inverse length, an
//! energy is an inverse length, a temperature is an energy, a polarizability
//! is a volume, and a squared dipole matrix element is a squared length
//! (energy × volume). Gaussian-cgs appears only at the I/O boundary, pinned
//! to a caller-chosen physical size of the natural length unit.

use crate::error::{Error, Result};

/// 2018 CODATA constants in gaussian-cgs.
pub mod constants {
    /// Reduced Planck constant, erg s.
    pub const HBAR_ERG_S: f64 = 1.054_571_817e-27;
    /// Speed of light, cm/s.
    pub const C_CM_PER_S: f64 = 2.997_924_58e10;
    /// Boltzmann constant, erg/K.
    pub const KB_ERG_PER_K: f64 = 1.380_649e-16;
    /// ħc, erg cm.
    pub const HBAR_C_ERG_CM: f64 = HBAR_ERG_S * C_CM_PER_S;
}

/// Which convention user-facing numbers are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitMode {
    /// ħ = c = k_B = 1; lengths in the free length unit, energies in its
    /// inverse, temperatures as energies.
    Natural,
    /// Lengths in cm, energies in erg, temperatures in K, polarizabilities
    /// in cm³, squared dipole elements in erg cm³.
    GaussianCgs,
}

/// Converts user-facing quantities to and from the internal natural units.
#[derive(Debug, Clone, Copy)]
pub struct UnitSystem {
    mode: UnitMode,
    /// Physical size of the natural length unit, cm (1.0 in natural mode).
    length_cm: f64,
}

impl UnitSystem {
    pub fn natural() -> Self {
        UnitSystem { mode: UnitMode::Natural, length_cm: 1.0 }
    }

    /// Gaussian-cgs boundary with the natural length unit pinned to
    /// `length_cm` centimeters.
    pub fn gaussian_cgs(length_cm: f64) -> Result<Self> {
        if !(length_cm > 0.0 && length_cm.is_finite()) {
            return Err(Error::InvalidConfiguration(format!(
                "length unit must be a positive finite size in cm, got {length_cm}"
            )));
        }
        Ok(UnitSystem { mode: UnitMode::GaussianCgs, length_cm })
    }

    pub fn mode(&self) -> UnitMode {
        self.mode
    }

    /// Natural-unit energy expressed in erg: ħc / length.
    fn energy_erg(&self) -> f64 {
        constants::HBAR_C_ERG_CM / self.length_cm
    }

    /// User length -> natural.
    pub fn length_in(&self, v: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => v,
            UnitMode::GaussianCgs => v / self.length_cm,
        }
    }

    /// Natural length -> user.
    pub fn length_out(&self, v: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => v,
            UnitMode::GaussianCgs => v * self.length_cm,
        }
    }

    /// User wavenumber -> natural (cm⁻¹ in cgs mode).
    pub fn wavenumber_in(&self, v: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => v,
            UnitMode::GaussianCgs => v * self.length_cm,
        }
    }

    /// Natural wavenumber -> user.
    pub fn wavenumber_out(&self, v: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => v,
            UnitMode::GaussianCgs => v / self.length_cm,
        }
    }

    /// User energy -> natural (erg in cgs mode).
    pub fn energy_in(&self, v: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => v,
            UnitMode::GaussianCgs => v / self.energy_erg(),
        }
    }

    /// Natural energy -> user.
    pub fn energy_out(&self, v: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => v,
            UnitMode::GaussianCgs => v * self.energy_erg(),
        }
    }

    /// User temperature -> natural energy (K in cgs mode, k_B T internally).
    pub fn temperature_in(&self, v: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => v,
            UnitMode::GaussianCgs => v * constants::KB_ERG_PER_K / self.energy_erg(),
        }
    }

    /// Natural temperature (an energy) -> user.
    pub fn temperature_out(&self, v: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => v,
            UnitMode::GaussianCgs => v * self.energy_erg() / constants::KB_ERG_PER_K,
        }
    }

    /// User polarizability -> natural volume (cm³ in cgs mode).
    pub fn polarizability_in(&self, v: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => v,
            UnitMode::GaussianCgs => v / self.length_cm.powi(3),
        }
    }

    /// Natural polarizability -> user.
    pub fn polarizability_out(&self, v: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => v,
            UnitMode::GaussianCgs => v * self.length_cm.powi(3),
        }
    }

    /// User squared dipole element -> natural (erg cm³ in cgs mode; the
    /// natural dimension is energy × volume = length²).
    pub fn dipole_squared_in(&self, v: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => v,
            UnitMode::GaussianCgs => v / (self.energy_erg() * self.length_cm.powi(3)),
        }
    }

    /// Natural squared dipole element -> user.
    pub fn dipole_squared_out(&self, v: f64) -> f64 {
        match self.mode {
            UnitMode::Natural => v,
            UnitMode::GaussianCgs => v * self.energy_erg() * self.length_cm.powi(3),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn natural_mode_is_identity() {
        let u = UnitSystem::natural();
        for v in [1e-6, 1.0, 42.0] {
            assert_eq!(u.length_in(v), v);
            assert_eq!(u.energy_out(v), v);
            assert_eq!(u.temperature_in(v), v);
            assert_eq!(u.polarizability_out(v), v);
        }
    }

    #[test]
    fn rejects_bad_length_unit() {
        assert!(UnitSystem::gaussian_cgs(0.0).is_err());
        assert!(UnitSystem::gaussian_cgs(-1.0).is_err());
        assert!(UnitSystem::gaussian_cgs(f64::INFINITY).is_err());
    }

    #[test]
    fn room_temperature_in_natural_units() {
        // With the length unit at 1 μm, k_B · 300 K = 0.131 ħc/μm, so the
        // thermal length 1/(2πT) comes out at 1.215 μm.
        let u = UnitSystem::gaussian_cgs(1e-4).unwrap();
        let t = u.temperature_in(300.0);
        let expected = 300.0 * constants::KB_ERG_PER_K * 1e-4 / constants::HBAR_C_ERG_CM;
        assert_relative_eq!(t, expected, max_relative = 1e-14);
        assert_relative_eq!(1.0 / (2.0 * std::f64::consts::PI * t), 1.2148, max_relative = 1e-4);
    }

    proptest! {
        #[test]
        fn cgs_round_trips_are_identity(
            v in 1e-12f64..1e12,
            scale in prop::sample::select(vec![1e-8f64, 1e-4, 1.0, 3.7e2]),
        ) {
            let u = UnitSystem::gaussian_cgs(scale).unwrap();
            let cases = [
                u.length_out(u.length_in(v)),
                u.wavenumber_out(u.wavenumber_in(v)),
                u.energy_out(u.energy_in(v)),
                u.temperature_out(u.temperature_in(v)),
                u.polarizability_out(u.polarizability_in(v)),
                u.dipole_squared_out(u.dipole_squared_in(v)),
            ];
            for got in cases {
                prop_assert!((got - v).abs() <= 1e-12 * v.abs());
            }
        }
    }
}
