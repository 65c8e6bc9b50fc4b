//! Conversion between SI quantities and the reduced units of the core
//! library, where ħ = c = k_B = 1 and lengths are measured in gap widths.

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light, m/s.
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Scales for a cavity of width `gap` metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub gap: f64,
}

impl Units {
    pub fn new(gap: f64) -> Self {
        Units { gap }
    }

    /// Angular frequency (rad/s) to ωa/c.
    pub fn frequency(&self, omega: f64) -> f64 {
        omega * self.gap / C
    }

    /// Temperature (K) to k_B T a/(ħc).
    pub fn temperature(&self, kelvin: f64) -> f64 {
        K_B * kelvin * self.gap / (HBAR * C)
    }

    /// Reduced stress to pascals.
    pub fn stress(&self, reduced: f64) -> f64 {
        reduced * HBAR * C / self.gap.powi(4)
    }

    /// Reduced energy flux to W/m².
    pub fn flux(&self, reduced: f64) -> f64 {
        reduced * HBAR * C * C / self.gap.powi(4)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn mirror_pressure_at_one_micron() {
        let p = Units::new(1e-6).stress(-PI * PI / 240.0);
        assert!((p + 1.300e-3).abs() < 1e-6, "{p}");
    }

    #[test]
    fn thermal_wavelength_scale() {
        // k_B T / ħc at 300 K is about 1.31e5 per metre
        let t = Units::new(1.0).temperature(300.0);
        assert!((t / 1.309e5 - 1.0).abs() < 1e-3, "{t}");
    }

    #[test]
    fn flux_and_stress_differ_by_c() {
        let u = Units::new(2e-7);
        assert!((u.flux(1.0) / u.stress(1.0) / C - 1.0).abs() < 1e-15);
    }
}
