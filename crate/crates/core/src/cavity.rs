//! Dimensionless description of the two-plate system.

use crate::error::{Error, Result};
use crate::material::Material;

#[derive(Debug, Clone, PartialEq)]
pub struct Plate {
    pub material: Material,
    /// Temperature in the plate's rest frame, in units of ħc/(k_B a).
    pub temperature: f64,
}

impl Plate {
    pub fn new(material: Material, temperature: f64) -> Self {
        Plate {
            material,
            temperature,
        }
    }
}

/// Plate 1 (x < 0) is at rest; plate 2 (x > gap) moves with velocity βc
/// along +y.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityConfig {
    pub gap: f64,
    pub beta: f64,
    pub plate1: Plate,
    pub plate2: Plate,
}

impl CavityConfig {
    /// Unit gap, the natural choice once lengths are measured in units of a.
    pub fn new(beta: f64, plate1: Plate, plate2: Plate) -> Result<Self> {
        let config = CavityConfig {
            gap: 1.0,
            beta,
            plate1,
            plate2,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return Err(Error::Config(format!("gap {} must be positive", self.gap)));
        }
        if !(self.beta.abs() < 1.0) {
            return Err(Error::Velocity(self.beta));
        }
        for (name, plate) in [("plate1", &self.plate1), ("plate2", &self.plate2)] {
            if !(plate.temperature >= 0.0 && plate.temperature.is_finite()) {
                return Err(Error::Config(format!(
                    "{name} temperature {} must be finite and non-negative",
                    plate.temperature
                )));
            }
            plate.material.epsilon.validate()?;
            plate.material.mu.validate()?;
        }
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.beta * self.beta).sqrt()
    }

    /// The same system with plate 2 moving the other way.
    pub fn reversed(&self) -> Self {
        CavityConfig {
            beta: -self.beta,
            ..self.clone()
        }
    }
}
