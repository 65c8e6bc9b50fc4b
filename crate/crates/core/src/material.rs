//! Causal material response models.
//!
//! Every model is analytic in the upper half of the complex frequency plane
//! and obeys the reality condition `f(-ω*) = f(ω)*`. Evaluation accepts any
//! frequency in the closed upper half-plane; negative real frequencies are
//! handled by conjugating the value at `|ω|`, and the positive imaginary axis
//! uses closed forms that are real by construction.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Which constitutive response a model describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Response {
    Permittivity,
    Permeability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Vacuum,
    Constant,
    Drude,
    LorentzOscillator,
    PerfectMirror,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Vacuum => "vacuum",
            ModelKind::Constant => "constant",
            ModelKind::Drude => "drude",
            ModelKind::LorentzOscillator => "lorentz",
            ModelKind::PerfectMirror => "perfect_mirror",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "vacuum" => Some(ModelKind::Vacuum),
            "constant" => Some(ModelKind::Constant),
            "drude" => Some(ModelKind::Drude),
            "lorentz" | "lorentz_oscillator" | "lorentzoscillator" => {
                Some(ModelKind::LorentzOscillator)
            }
            "perfect_mirror" | "perfectmirror" | "mirror" => Some(ModelKind::PerfectMirror),
            _ => None,
        }
    }

    /// Names of the coefficients the model reads, with the subset that are
    /// frequencies (rescaled when changing units).
    fn parameters(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            ModelKind::Vacuum | ModelKind::PerfectMirror => (&[], &[]),
            ModelKind::Constant => (&["value"], &[]),
            ModelKind::Drude => (
                &["plasma_frequency", "damping"],
                &["plasma_frequency", "damping"],
            ),
            ModelKind::LorentzOscillator => (
                &["eps_inf", "strength", "resonance", "damping"],
                &["resonance", "damping"],
            ),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A parametric dispersive response ε(ω) or μ(ω).
///
/// Parameters are stored by name:
///
/// | kind               | parameters                                          |
/// |--------------------|-----------------------------------------------------|
/// | `vacuum`           | none                                                |
/// | `constant`         | `value` (real, positive)                            |
/// | `drude`            | `plasma_frequency`, `damping`                       |
/// | `lorentz`          | `eps_inf` (default 1), `strength`, `resonance`, `damping` |
/// | `perfect_mirror`   | none                                                |
///
/// Drude: `ε = 1 − ωp² / (ω(ω + iγ))`.
/// Lorentz: `ε = ε∞ + Δε ω0² / (ω0² − ω² − iγω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionModel {
    pub kind: ModelKind,
    pub params: BTreeMap<String, f64>,
    pub applies_to: Response,
}

impl DispersionModel {
    /// Builds and validates a model.
    pub fn new(kind: ModelKind, params: BTreeMap<String, f64>, applies_to: Response) -> Result<Self> {
        let model = DispersionModel {
            kind,
            params,
            applies_to,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn vacuum(applies_to: Response) -> Self {
        DispersionModel {
            kind: ModelKind::Vacuum,
            params: BTreeMap::new(),
            applies_to,
        }
    }

    pub fn constant(value: f64, applies_to: Response) -> Result<Self> {
        Self::new(ModelKind::Constant, params(&[("value", value)]), applies_to)
    }

    pub fn drude(plasma_frequency: f64, damping: f64) -> Result<Self> {
        Self::new(
            ModelKind::Drude,
            params(&[("plasma_frequency", plasma_frequency), ("damping", damping)]),
            Response::Permittivity,
        )
    }

    pub fn lorentz(eps_inf: f64, strength: f64, resonance: f64, damping: f64) -> Result<Self> {
        Self::new(
            ModelKind::LorentzOscillator,
            params(&[
                ("eps_inf", eps_inf),
                ("strength", strength),
                ("resonance", resonance),
                ("damping", damping),
            ]),
            Response::Permittivity,
        )
    }

    pub fn perfect_mirror() -> Self {
        DispersionModel {
            kind: ModelKind::PerfectMirror,
            params: BTreeMap::new(),
            applies_to: Response::Permittivity,
        }
    }

    pub fn is_perfect_mirror(&self) -> bool {
        self.kind == ModelKind::PerfectMirror
    }

    /// Whether the model absorbs at real positive frequencies.
    pub fn is_lossy(&self) -> bool {
        matches!(self.kind, ModelKind::Drude | ModelKind::LorentzOscillator)
    }

    fn param(&self, name: &str) -> f64 {
        match self.params.get(name) {
            Some(v) => *v,
            // validated: only optional parameters can be missing
            None if name == "eps_inf" => 1.0,
            None => f64::NAN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (names, _) = self.kind.parameters();
        for key in self.params.keys() {
            if !names.contains(&key.as_str()) {
                return Err(Error::InvalidModel(format!(
                    "unknown parameter `{key}` for {} model",
                    self.kind
                )));
            }
        }
        for name in names {
            match self.params.get(*name) {
                Some(v) if !v.is_finite() => {
                    return Err(Error::InvalidModel(format!("parameter `{name}` is not finite")))
                }
                None if *name != "eps_inf" => {
                    return Err(Error::InvalidModel(format!(
                        "{} model requires parameter `{name}`",
                        self.kind
                    )))
                }
                _ => {}
            }
        }
        if self.applies_to == Response::Permeability
            && !matches!(self.kind, ModelKind::Vacuum | ModelKind::Constant)
        {
            return Err(Error::InvalidModel(
                "only vacuum and constant permeability models are supported".into(),
            ));
        }
        match self.kind {
            ModelKind::Constant if self.param("value") <= 0.0 => Err(Error::InvalidModel(
                "constant response must be positive".into(),
            )),
            ModelKind::Drude if self.param("plasma_frequency") < 0.0 => Err(Error::InvalidModel(
                "plasma frequency must be non-negative".into(),
            )),
            ModelKind::Drude if self.param("damping") <= 0.0 => Err(Error::InvalidModel(
                "Drude damping must be positive (lossless models are not supported)".into(),
            )),
            ModelKind::LorentzOscillator
                if self.param("strength") < 0.0
                    || self.param("resonance") <= 0.0
                    || self.param("damping") <= 0.0
                    || self.param("eps_inf") < 1.0 =>
            {
                Err(Error::InvalidModel(
                    "Lorentz oscillator needs strength >= 0, resonance > 0, damping > 0, eps_inf >= 1"
                        .into(),
                ))
            }
            _ => Ok(()),
        }
    }

    /// Rescales every frequency-valued parameter by `factor`.
    pub fn rescaled(&self, factor: f64) -> Self {
        let (_, freqs) = self.kind.parameters();
        let params = self
            .params
            .iter()
            .map(|(k, v)| {
                let v = if freqs.contains(&k.as_str()) { v * factor } else { *v };
                (k.clone(), v)
            })
            .collect();
        DispersionModel {
            kind: self.kind,
            params,
            applies_to: self.applies_to,
        }
    }

    /// Evaluates the response at a frequency in the closed upper half-plane.
    pub fn evaluate(&self, omega: Complex64) -> Result<Complex64> {
        if self.kind == ModelKind::PerfectMirror {
            return Err(Error::LimitModel);
        }
        if !(omega.re.is_finite() && omega.im.is_finite()) || omega.im < 0.0 {
            return Err(Error::FrequencyDomain {
                re: omega.re,
                im: omega.im,
            });
        }
        if omega.im == 0.0 {
            if omega.re < 0.0 {
                return Ok(self.evaluate_real(-omega.re)?.conj());
            }
            return self.evaluate_real(omega.re);
        }
        if omega.re == 0.0 {
            return self.evaluate_imaginary(omega.im).map(Complex64::from);
        }
        self.evaluate_general(omega)
    }

    /// Response on the positive imaginary axis ω = iξ; always real.
    pub fn evaluate_imaginary(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) {
            return Err(Error::FrequencyDomain { re: 0.0, im: xi });
        }
        Ok(match self.kind {
            ModelKind::Vacuum => 1.0,
            ModelKind::Constant => self.param("value"),
            ModelKind::Drude => {
                let wp = self.param("plasma_frequency");
                1.0 + wp * wp / (xi * (xi + self.param("damping")))
            }
            ModelKind::LorentzOscillator => {
                let w0 = self.param("resonance");
                self.param("eps_inf")
                    + self.param("strength") * w0 * w0
                        / (w0 * w0 + xi * xi + self.param("damping") * xi)
            }
            ModelKind::PerfectMirror => return Err(Error::LimitModel),
        })
    }

    fn evaluate_real(&self, omega: f64) -> Result<Complex64> {
        if self.kind == ModelKind::Drude && omega == 0.0 {
            return Err(Error::FrequencyDomain { re: 0.0, im: 0.0 });
        }
        self.evaluate_general(Complex64::new(omega, 0.0))
    }

    fn evaluate_general(&self, omega: Complex64) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        Ok(match self.kind {
            ModelKind::Vacuum => one,
            ModelKind::Constant => Complex64::from(self.param("value")),
            ModelKind::Drude => {
                let wp = self.param("plasma_frequency");
                let gamma = self.param("damping");
                one - wp * wp / (omega * (omega + Complex64::new(0.0, gamma)))
            }
            ModelKind::LorentzOscillator => {
                let w0 = self.param("resonance");
                let gamma = self.param("damping");
                let den = w0 * w0 - omega * omega - Complex64::new(0.0, gamma) * omega;
                Complex64::from(self.param("eps_inf")) + self.param("strength") * w0 * w0 / den
            }
            ModelKind::PerfectMirror => return Err(Error::LimitModel),
        })
    }
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Electric and magnetic response of one plate.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub epsilon: DispersionModel,
    pub mu: DispersionModel,
}

impl Material {
    pub fn new(epsilon: DispersionModel, mu: DispersionModel) -> Result<Self> {
        if epsilon.applies_to != Response::Permittivity || mu.applies_to != Response::Permeability {
            return Err(Error::InvalidModel(
                "epsilon/mu models assigned to the wrong response".into(),
            ));
        }
        if mu.is_perfect_mirror() {
            return Err(Error::InvalidModel(
                "perfect mirror is declared through the permittivity".into(),
            ));
        }
        epsilon.validate()?;
        mu.validate()?;
        Ok(Material { epsilon, mu })
    }

    /// Non-magnetic material with the given permittivity.
    pub fn nonmagnetic(epsilon: DispersionModel) -> Self {
        Material {
            epsilon,
            mu: DispersionModel::vacuum(Response::Permeability),
        }
    }

    pub fn vacuum() -> Self {
        Self::nonmagnetic(DispersionModel::vacuum(Response::Permittivity))
    }

    pub fn perfect_mirror() -> Self {
        Self::nonmagnetic(DispersionModel::perfect_mirror())
    }

    pub fn is_perfect_mirror(&self) -> bool {
        self.epsilon.is_perfect_mirror()
    }

    pub fn is_vacuum(&self) -> bool {
        self.epsilon.kind == ModelKind::Vacuum && self.mu.kind == ModelKind::Vacuum
    }

    /// (ε, μ) at a frequency in the closed upper half-plane.
    pub fn response(&self, omega: Complex64) -> Result<(Complex64, Complex64)> {
        Ok((self.epsilon.evaluate(omega)?, self.mu.evaluate(omega)?))
    }

    pub fn rescaled(&self, factor: f64) -> Self {
        Material {
            epsilon: self.epsilon.rescaled(factor),
            mu: self.mu.rescaled(factor),
        }
    }
}
