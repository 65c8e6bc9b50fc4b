//! Run configuration, read from TOML.
//!
//! ```toml
//! gap = 1e-6             # m
//! beta = 0.1             # velocity of plate 2 along +y, in units of c
//!
//! [plate1]
//! temperature = 300.0    # K, in the plate's rest frame
//! epsilon = { kind = "drude", params = { plasma_frequency = 1.37e16, damping = 5.32e13 } }
//!
//! [plate2]
//! temperature = 0.0
//! epsilon = { kind = "lorentz", params = { strength = 3.0, resonance = 1e15, damping = 5e14 } }
//! mu = { kind = "constant", params = { value = 1.0 } }
//!
//! [plan]
//! rel_tol = 1e-4
//!
//! [output]
//! format = "json"
//!
//! [sweep]
//! variable = "beta"
//! grid = { start = -0.4, stop = 0.4, points = 9 }
//! ```
//!
//! Frequency-valued model parameters are angular frequencies in rad/s.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use casimir_core::material::{ModelKind, Response};
use casimir_core::{CavityConfig, DispersionModel, IntegrationPlan, Material, Plate};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::units::Units;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Plate separation, m.
    pub gap: f64,
    #[serde(default)]
    pub beta: f64,
    pub plate1: PlateSpec,
    pub plate2: PlateSpec,
    #[serde(default)]
    pub plan: PlanSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateSpec {
    /// Rest-frame temperature, K.
    #[serde(default)]
    pub temperature: f64,
    pub epsilon: ModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<ModelSpec>,
}

/// A dispersion model: `kind` is one of `vacuum`, `constant`, `drude`,
/// `lorentz`, `perfect_mirror`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

/// Overrides of the integration plan. Tolerances are relative except
/// `abs_tol`, which is in reduced units (ħc/a⁴).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol_qvac: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol_thermal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_subdivisions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fold_v: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planck_cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay_cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cancellation: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Format,
    /// Standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "a")]
    Gap,
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "T1")]
    T1,
    #[serde(rename = "T2")]
    T2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Grid,
}

/// Either explicit values or `points` evenly spaced values from `start` to
/// `stop` inclusive (geometrically spaced when `log = true`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range(Range),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub log: bool,
}

/// Density grid for the `spectrum` command, in reduced units: ω and κ in
/// c/a, u and v in 1/a.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    pub channel: String,
    pub omega: Grid,
    pub u: Grid,
    pub v: Grid,
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        let values = match self {
            Grid::Values(v) => v.clone(),
            Grid::Range(r) => {
                if r.points == 0 {
                    return invalid("grid needs at least one point");
                }
                if r.log && !(r.start > 0.0 && r.stop > 0.0) {
                    return invalid("logarithmic grid bounds must be positive");
                }
                let (a, b) = if r.log { (r.start.ln(), r.stop.ln()) } else { (r.start, r.stop) };
                (0..r.points)
                    .map(|i| {
                        let t = if r.points == 1 { 0.0 } else { i as f64 / (r.points - 1) as f64 };
                        let x = a + t * (b - a);
                        if r.log {
                            x.exp()
                        } else {
                            x
                        }
                    })
                    .collect()
            }
        };
        if values.is_empty() {
            return invalid("grid is empty");
        }
        if values.iter().any(|x| !x.is_finite()) {
            return invalid("grid values must be finite");
        }
        Ok(values)
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Invalid(msg.into()))
}

impl ModelSpec {
    fn build(&self, response: Response, units: &Units) -> Result<DispersionModel, CliError> {
        let kind = ModelKind::from_name(&self.kind)
            .ok_or_else(|| CliError::Invalid(format!("unknown model kind `{}`", self.kind)))?;
        let model = DispersionModel::new(kind, self.params.clone(), response)?;
        Ok(model.rescaled(units.frequency(1.0)))
    }
}

impl PlateSpec {
    fn build(&self, units: &Units) -> Result<Plate, CliError> {
        let epsilon = self.epsilon.build(Response::Permittivity, units)?;
        let material = match &self.mu {
            Some(mu) => Material::new(epsilon, mu.build(Response::Permeability, units)?)?,
            None => Material::nonmagnetic(epsilon),
        };
        Ok(Plate::new(material, units.temperature(self.temperature)))
    }
}

impl PlanSpec {
    pub fn apply(&self, mut plan: IntegrationPlan) -> IntegrationPlan {
        if let Some(t) = self.rel_tol {
            plan = plan.with_rel_tol(t);
        }
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut plan.rel_tol_qvac, self.rel_tol_qvac);
        set(&mut plan.rel_tol_thermal, self.rel_tol_thermal);
        set(&mut plan.abs_tol, self.abs_tol);
        set(&mut plan.planck_cutoff, self.planck_cutoff);
        set(&mut plan.decay_cutoff, self.decay_cutoff);
        set(&mut plan.cancellation, self.cancellation);
        if let Some(n) = self.max_subdivisions {
            plan.max_subdivisions = n;
        }
        if let Some(f) = self.fold_v {
            plan.fold_v = f;
        }
        plan
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: RunConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_owned(), source: e })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        Ok(toml::to_string(self)?)
    }

    /// Checks everything that can be checked without integrating.
    pub fn validate(&self) -> Result<(), CliError> {
        self.cavity()?;
        self.plan().validate()?;
        if let Some(sweep) = &self.sweep {
            for x in sweep.grid.values()? {
                self.at(sweep.variable, x).cavity()?;
            }
        }
        if let Some(spectrum) = &self.spectrum {
            spectrum.channel()?;
            for g in [&spectrum.omega, &spectrum.u, &spectrum.v] {
                g.values()?;
            }
        }
        Ok(())
    }

    pub fn units(&self) -> Units {
        Units::new(self.gap)
    }

    pub fn plan(&self) -> IntegrationPlan {
        self.plan.apply(IntegrationPlan::default())
    }

    /// The dimensionless system described by this configuration.
    pub fn cavity(&self) -> Result<CavityConfig, CliError> {
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return invalid(format!("gap {} m must be positive", self.gap));
        }
        for (name, p) in [("plate1", &self.plate1), ("plate2", &self.plate2)] {
            if !(p.temperature >= 0.0 && p.temperature.is_finite()) {
                return invalid(format!("{name} temperature {} K must be non-negative", p.temperature));
            }
        }
        let units = self.units();
        Ok(CavityConfig::new(self.beta, self.plate1.build(&units)?, self.plate2.build(&units)?)?)
    }

    /// A copy with one swept variable replaced.
    pub fn at(&self, variable: SweepVariable, value: f64) -> RunConfig {
        let mut c = self.clone();
        match variable {
            SweepVariable::Gap => c.gap = value,
            SweepVariable::Beta => c.beta = value,
            SweepVariable::T1 => c.plate1.temperature = value,
            SweepVariable::T2 => c.plate2.temperature = value,
        }
        c
    }

    /// Every configuration to evaluate: the sweep points, or just this one.
    pub fn points(&self) -> Result<Vec<RunConfig>, CliError> {
        match &self.sweep {
            Some(s) => Ok(s.grid.values()?.into_iter().map(|x| self.at(s.variable, x)).collect()),
            None => Ok(vec![self.clone()]),
        }
    }
}

impl SpectrumSpec {
    pub fn channel(&self) -> Result<casimir_core::Channel, CliError> {
        casimir_core::Channel::from_name(&self.channel)
            .ok_or_else(|| CliError::Invalid(format!("unknown channel `{}`", self.channel)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIRRORS: &str = r#"
gap = 1e-6
[plate1]
epsilon = { kind = "perfect_mirror" }
[plate2]
epsilon = { kind = "perfect_mirror" }
"#;

    #[test]
    fn minimal_config_uses_defaults() {
        let c = RunConfig::from_toml(MIRRORS).unwrap();
        assert_eq!(c.beta, 0.0);
        assert_eq!(c.output.format, Format::Csv);
        assert_eq!(c.plan(), IntegrationPlan::default());
        assert!(c.cavity().unwrap().plate1.material.is_perfect_mirror());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{MIRRORS}\n[plan]\nrel_tolerance = 1e-3\n");
        let err = RunConfig::from_toml(&text).unwrap_err().to_string();
        assert!(err.contains("rel_tolerance"), "{err}");
    }

    #[test]
    fn parse_errors_carry_a_position() {
        let err = RunConfig::from_toml("gap = \n").unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn physical_constraints_are_checked() {
        for bad in ["gap = -1e-6", "gap = 1e-6\nbeta = 1.0"] {
            let text = MIRRORS.replace("gap = 1e-6", bad);
            assert!(RunConfig::from_toml(&text).is_err(), "{bad}");
        }
        let cold = MIRRORS.replacen("[plate1]", "[plate1]\ntemperature = -3.0", 1);
        assert!(RunConfig::from_toml(&cold).is_err());
    }

    #[test]
    fn model_parameters_are_converted_to_reduced_units() {
        let text = r#"
gap = 2e-6
[plate1]
temperature = 300.0
epsilon = { kind = "drude", params = { plasma_frequency = 1.5e15, damping = 1e13 } }
[plate2]
epsilon = { kind = "lorentz", params = { eps_inf = 2.0, strength = 1.0, resonance = 3e14, damping = 1e13 } }
"#;
        let cavity = RunConfig::from_toml(text).unwrap().cavity().unwrap();
        let units = Units::new(2e-6);
        let wp = cavity.plate1.material.epsilon.params["plasma_frequency"];
        assert!((wp / units.frequency(1.5e15) - 1.0).abs() < 1e-15);
        assert_eq!(cavity.plate2.material.epsilon.params["eps_inf"], 2.0);
        assert!((cavity.plate1.temperature / units.temperature(300.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grids_expand() {
        let lin = Grid::Range(Range { start: -0.4, stop: 0.4, points: 5, log: false });
        assert_eq!(lin.values().unwrap().len(), 5);
        assert!((lin.values().unwrap()[2]).abs() < 1e-16);
        let log = Grid::Range(Range { start: 1e-7, stop: 1e-5, points: 3, log: true });
        let v = log.values().unwrap();
        assert!((v[1] / 1e-6 - 1.0).abs() < 1e-12);
        assert!(Grid::Values(vec![]).values().is_err());
    }

    #[test]
    fn sweep_points_replace_the_variable() {
        let text = format!("{MIRRORS}\n[sweep]\nvariable = \"T2\"\ngrid = [0.0, 100.0]\n");
        let c = RunConfig::from_toml(&text).unwrap();
        let temps: Vec<f64> = c.points().unwrap().iter().map(|p| p.plate2.temperature).collect();
        assert_eq!(temps, vec![0.0, 100.0]);
    }

    #[test]
    fn toml_round_trip() {
        let text = format!("{MIRRORS}\n[sweep]\nvariable = \"a\"\ngrid = {{ start = 1e-7, stop = 1e-6, points = 4, log = true }}\n");
        let c = RunConfig::from_toml(&text).unwrap();
        assert_eq!(RunConfig::from_toml(&c.to_toml().unwrap()).unwrap(), c);
    }
}
