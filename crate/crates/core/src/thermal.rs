//! Thermal bath: temperature, thermal length, and the photon occupation
//! factor coth(k/2T) that combines vacuum and thermal fluctuations.

use crate::error::{Error, Result};
use crate::special;

/// A photon bath at temperature T ≥ 0, stored as an energy (k_B T) in
/// natural units. T = 0 is a first-class state: occupation factor 1,
/// infinite thermal length.
#[derive(Debug, Clone, Copy)]
pub struct ThermalBath {
    temperature: f64,
}

impl ThermalBath {
    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidConfiguration(format!(
                "temperature must be ≥ 0 and finite, got {temperature}"
            )));
        }
        Ok(ThermalBath { temperature })
    }

    pub fn zero() -> Self {
        ThermalBath { temperature: 0.0 }
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn is_zero(&self) -> bool {
        self.temperature == 0.0
    }

    /// λ_T = 1/(2πT) in natural units (ħc/2πk_BT physically).
    ///
    /// Errors at T = 0 so callers branch to the dedicated zero-temperature
    /// formulas instead of feeding ∞ into thermal ones.
    pub fn thermal_length(&self) -> Result<f64> {
        if self.is_zero() {
            return Err(Error::Domain(
                "thermal length is infinite at T = 0; use the zero-temperature forms".into(),
            ));
        }
        Ok(1.0 / (2.0 * std::f64::consts::PI * self.temperature))
    }

    /// λ_T, with T = 0 mapped to +∞ (useful for regime classification only).
    pub fn thermal_length_or_inf(&self) -> f64 {
        if self.is_zero() {
            f64::INFINITY
        } else {
            1.0 / (2.0 * std::f64::consts::PI * self.temperature)
        }
    }

    /// Occupation factor coth(k/2T) = 1 + 2/(e^{k/T} − 1) ≥ 1 for k > 0.
    /// Exactly 1 at T = 0.
    pub fn coth_factor(&self, k: f64) -> Result<f64> {
        if !(k > 0.0) {
            return Err(Error::Domain(format!(
                "occupation factor needs k > 0, got {k}"
            )));
        }
        if self.is_zero() {
            return Ok(1.0);
        }
        Ok(special::coth(k / (2.0 * self.temperature)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::UnitSystem;
    use approx::assert_relative_eq;

    #[test]
    fn zero_temperature_factor_is_one() {
        let bath = ThermalBath::zero();
        for &k in &[1e-9, 1.0, 1e9] {
            assert_eq!(bath.coth_factor(k).unwrap(), 1.0);
        }
    }

    #[test]
    fn unit_argument_reference_value() {
        // k/2T = 1: coth(1), also via 1 + 2/(e² − 1).
        let bath = ThermalBath::new(0.5).unwrap();
        let v = bath.coth_factor(1.0).unwrap();
        assert_relative_eq!(v, 1.313_035_285_5, max_relative = 1e-10);
        assert_relative_eq!(v, 1.0 + 2.0 / (2.0f64.exp() - 1.0), max_relative = 1e-14);
    }

    #[test]
    fn small_k_diverges_as_two_t_over_k() {
        let bath = ThermalBath::new(1.0).unwrap();
        let k = 1e-9;
        assert_relative_eq!(bath.coth_factor(k).unwrap(), 2.0 / k, max_relative = 1e-9);
    }

    #[test]
    fn factor_bounds_and_monotonicity_in_t() {
        let k = 0.7;
        let mut prev = 1.0; // T = 0 value
        for i in 1..=40 {
            let bath = ThermalBath::new(0.05 * i as f64).unwrap();
            let v = bath.coth_factor(k).unwrap();
            assert!(v >= 1.0);
            assert!(v > prev, "not increasing at T = {}", 0.05 * i as f64);
            prev = v;
        }
    }

    #[test]
    fn rejects_nonpositive_wavenumber() {
        let bath = ThermalBath::new(1.0).unwrap();
        assert!(bath.coth_factor(0.0).is_err());
        assert!(bath.coth_factor(-1.0).is_err());
    }

    #[test]
    fn thermal_length_exact_and_scaling() {
        let bath = ThermalBath::new(1.0 / (2.0 * std::f64::consts::PI)).unwrap();
        assert_relative_eq!(bath.thermal_length().unwrap(), 1.0, max_relative = 1e-14);
        let l1 = ThermalBath::new(0.3).unwrap().thermal_length().unwrap();
        let l2 = ThermalBath::new(0.6).unwrap().thermal_length().unwrap();
        assert_relative_eq!(l1, 2.0 * l2, max_relative = 1e-14);
        assert!(ThermalBath::zero().thermal_length().is_err());
        assert_eq!(ThermalBath::zero().thermal_length_or_inf(), f64::INFINITY);
    }

    #[test]
    fn thermal_length_at_room_temperature() {
        // 300 K with the natural length unit pinned to 1 cm: ħc/(2π k_B T).
        let units = UnitSystem::gaussian_cgs(1.0).unwrap();
        let bath = ThermalBath::new(units.temperature_in(300.0)).unwrap();
        let lambda_cm = units.length_out(bath.thermal_length().unwrap());
        assert_relative_eq!(lambda_cm, 1.214_82e-4, max_relative = 1e-5);
    }
}
