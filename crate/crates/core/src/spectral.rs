//! Pointwise spectral densities of the stress-tensor and Poynting integrals.
//!
//! Each density is the integrand with respect to `du dv dω` (or `du dv dκ`
//! on the imaginary axis) in natural units, so integrating it over
//! `u, v ∈ ℝ` and `ω > 0` yields the corresponding quantity in units of
//! ħc/a⁴ (stress) or ħc²/a⁴ (energy flux). Densities use the sign of the
//! Maxwell stress tensor in the gap: a positive `σxx` pulls plate 1 towards
//! plate 2, a positive `σxy` pushes plate 1 along +y.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::{Region, WaveContext};
use crate::material::Material;
use crate::reflection::{imaginary_axis_reflections, ReflectionSet, Reflections};

/// 1/(16π³), the common prefactor of the per-plate densities.
pub const PLATE_PREFACTOR: f64 = 1.0 / (16.0 * PI * PI * PI);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Sigma1xx,
    Sigma1xy,
    Poynting1x,
    Sigma2xx,
    Sigma2xy,
    LateralCombined,
    QVacImag,
}

impl Channel {
    pub const ALL: [Channel; 7] = [
        Channel::Sigma1xx,
        Channel::Sigma1xy,
        Channel::Poynting1x,
        Channel::Sigma2xx,
        Channel::Sigma2xy,
        Channel::LateralCombined,
        Channel::QVacImag,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::Sigma1xx => "sigma1xx",
            Channel::Sigma1xy => "sigma1xy",
            Channel::Poynting1x => "poynting1x",
            Channel::Sigma2xx => "sigma2xx",
            Channel::Sigma2xy => "sigma2xy",
            Channel::LateralCombined => "lateral",
            Channel::QVacImag => "qvac_imag",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Channel::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Channels contributing to the perpendicular stress.
    pub fn is_normal(self) -> bool {
        matches!(self, Channel::Sigma1xx | Channel::Sigma2xx | Channel::QVacImag)
    }

    /// Whether the plate at temperature T₁ radiates into this channel.
    pub fn uses_plate1(self) -> bool {
        matches!(
            self,
            Channel::Sigma1xx | Channel::Sigma1xy | Channel::Poynting1x | Channel::LateralCombined
        )
    }

    pub fn uses_plate2(self) -> bool {
        matches!(
            self,
            Channel::Sigma2xx | Channel::Sigma2xy | Channel::LateralCombined
        )
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Split of the fluctuation-dissipation factor coth(ω/2T) into its
/// zero-point part `sgn ω` and its Planck part `2 sgn ω / (e^{|ω|/T} − 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupationFactor {
    pub quantum: f64,
    pub thermal: f64,
}

impl OccupationFactor {
    pub fn total(&self) -> f64 {
        self.quantum + self.thermal
    }
}

/// Planck occupation `1 / (e^{x/T} − 1)` for x > 0; zero at T = 0.
pub fn planck(x: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (x / temperature).exp_m1()
}

pub fn occupation(omega: f64, temperature: f64) -> Result<OccupationFactor> {
    if omega == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    if !(temperature >= 0.0) {
        return Err(Error::Domain(format!("temperature {temperature} is negative")));
    }
    let sign = omega.signum();
    Ok(OccupationFactor {
        quantum: sign,
        thermal: 2.0 * sign * planck(omega.abs(), temperature),
    })
}

/// Quantum/thermal decomposition of a density value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityParts {
    pub quantum: f64,
    pub thermal: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub value: f64,
    pub region: Region,
    pub channel: Channel,
    pub parts: Option<DensityParts>,
}

impl DensitySample {
    fn split(channel: Channel, region: Region, kernel: f64, quantum: f64, thermal: f64) -> Self {
        let parts = DensityParts {
            quantum: quantum * kernel,
            thermal: thermal * kernel,
        };
        DensitySample {
            value: parts.quantum + parts.thermal,
            region,
            channel,
            parts: Some(parts),
        }
    }

    pub fn thermal(&self) -> f64 {
        self.parts.map_or(self.value, |p| p.thermal)
    }
}

/// Bracketed reflection structures shared by all real-axis densities,
/// with the kinematic factor `(s²−uβω)² + v²β²w²` already divided out.
#[derive(Debug, Clone, Copy)]
struct Brackets {
    /// Evanescent, plate-1 normal stress: Im r_X1 · Re r_Y2 combinations.
    evan_xx1: f64,
    /// Evanescent, plate-2 normal stress: Im r_X2 · Re r_Y1 combinations.
    evan_xx2: f64,
    /// Evanescent lateral/Poynting: Im r_X1 · Im r_Y2 combinations.
    evan_xy: f64,
    /// Propagating, plate 1: (1 − |r_X1|²)(1 + |r_Y2|²).
    prop_xx1: f64,
    /// Propagating, plate 2: (1 − |r_X2|²)(1 + |r_Y1|²).
    prop_xx2: f64,
    /// Propagating lateral/Poynting: (1 − |r_X1|²)(1 − |r_Y2|²).
    prop_xy: f64,
}

fn brackets(ctx: &WaveContext, refl: &ReflectionSet) -> Brackets {
    let shear = ctx.shear();
    let k_raw = shear * shear;
    let v_raw = ctx.mixing();
    let kin = k_raw + v_raw;
    // both structures are homogeneous of degree zero in (K, V) once the
    // kinematic prefactor is included, so normalize by it
    let (k, v) = (k_raw / kin, v_raw / kin);
    let r = &refl.r;
    let c = &refl.cavity;
    let d = k * c.a_ee * c.a_bb + v * c.a_eb * c.a_be;
    let inv = 1.0 / d.norm_sqr();
    let (ee, bb, eb, be) = (
        c.a_ee.norm_sqr(),
        c.a_bb.norm_sqr(),
        c.a_eb.norm_sqr(),
        c.a_be.norm_sqr(),
    );

    let evan_xx1 = 4.0
        * (r.r_e1.im * (r.r_e2.re * bb * k + r.r_b2.re * be * v)
            + r.r_b1.im * (r.r_b2.re * ee * k + r.r_e2.re * eb * v));
    let evan_xx2 = 4.0
        * (r.r_e2.im * (r.r_e1.re * bb * k + r.r_b1.re * eb * v)
            + r.r_b2.im * (r.r_b1.re * ee * k + r.r_e1.re * be * v));
    let evan_xy = 4.0
        * (r.r_e1.im * (r.r_e2.im * bb * k + r.r_b2.im * be * v)
            + r.r_b1.im * (r.r_b2.im * ee * k + r.r_e2.im * eb * v));

    let (e1, b1, e2, b2) = (
        r.r_e1.norm_sqr(),
        r.r_b1.norm_sqr(),
        r.r_e2.norm_sqr(),
        r.r_b2.norm_sqr(),
    );
    let prop_xx1 = (1.0 - e1) * ((1.0 + e2) * bb * k + (1.0 + b2) * be * v)
        + (1.0 - b1) * ((1.0 + b2) * ee * k + (1.0 + e2) * eb * v);
    let prop_xx2 = (1.0 - e2) * ((1.0 + e1) * bb * k + (1.0 + b1) * eb * v)
        + (1.0 - b2) * ((1.0 + b1) * ee * k + (1.0 + e1) * be * v);
    let prop_xy = (1.0 - e1) * ((1.0 - e2) * bb * k + (1.0 - b2) * be * v)
        + (1.0 - b1) * ((1.0 - b2) * ee * k + (1.0 - e2) * eb * v);

    Brackets {
        evan_xx1: evan_xx1 * inv,
        evan_xx2: evan_xx2 * inv,
        evan_xy: evan_xy * inv,
        prop_xx1: prop_xx1 * inv,
        prop_xx2: prop_xx2 * inv,
        prop_xy: prop_xy * inv,
    }
}

fn check_kinematics(ctx: &WaveContext) -> Result<()> {
    if !(ctx.shear().powi(2) + ctx.mixing() > 0.0) {
        return Err(Error::DegenerateFrame(ctx.frame_radicand()));
    }
    Ok(())
}

/// Contribution of plate 1 (at rest, temperature `t1`) to σxx, σxy or the
/// Poynting flux S₁ₓ.
pub fn density_plate1(
    gap: f64,
    ctx: &WaveContext,
    refl: &ReflectionSet,
    channel: Channel,
    t1: f64,
) -> Result<DensitySample> {
    check_kinematics(ctx)?;
    let occ = occupation(ctx.omega, t1)?;
    let br = brackets(ctx, refl);
    let p = PLATE_PREFACTOR;
    let evanescent = ctx.region.is_evanescent();
    let decay = if evanescent { (-2.0 * gap * ctx.w.im).exp() } else { 1.0 };
    let kernel = match (channel, evanescent) {
        (Channel::Sigma1xx, true) => p * decay * ctx.w.im * br.evan_xx1,
        (Channel::Sigma1xx, false) => -p * ctx.w.re * br.prop_xx1,
        (Channel::Sigma1xy, true) => -p * decay * ctx.u * br.evan_xy,
        (Channel::Sigma1xy, false) => -p * ctx.u * br.prop_xy,
        (Channel::Poynting1x, true) => p * decay * ctx.omega * br.evan_xy,
        (Channel::Poynting1x, false) => p * ctx.omega * br.prop_xy,
        (other, _) => return Err(Error::Channel(other.name())),
    };
    Ok(DensitySample::split(
        channel,
        ctx.region,
        kernel,
        occ.quantum,
        occ.thermal,
    ))
}

/// Contribution of plate 2 (moving, temperature `t2` in its rest frame) to
/// σxx or σxy in the lab frame.
///
/// The zero-point factor is 1; the thermal factor is the Planck occupation
/// at the co-moving frequency, `2 sgn(ω′) / (e^{|ω′|/T₂} − 1)`, which is
/// negative in the anomalous region.
pub fn density_plate2(
    gap: f64,
    ctx: &WaveContext,
    refl: &ReflectionSet,
    channel: Channel,
    t2: f64,
) -> Result<DensitySample> {
    check_kinematics(ctx)?;
    let occ = occupation(ctx.omega_p, t2)?;
    let br = brackets(ctx, refl);
    let p = PLATE_PREFACTOR;
    let evanescent = ctx.region.is_evanescent();
    let decay = if evanescent { (-2.0 * gap * ctx.w.im).exp() } else { 1.0 };
    let kernel = match (channel, evanescent) {
        (Channel::Sigma2xx, true) => p * decay * ctx.w.im * br.evan_xx2,
        (Channel::Sigma2xx, false) => -p * ctx.w.re * br.prop_xx2,
        (Channel::Sigma2xy, true) => p * decay * ctx.u * br.evan_xy,
        (Channel::Sigma2xy, false) => p * ctx.u * br.prop_xy,
        (other, _) => return Err(Error::Channel(other.name())),
    };
    Ok(DensitySample::split(channel, ctx.region, kernel, 1.0, occ.thermal))
}

/// Combined lateral stress σxy(T₁, T₂): purely thermal, driven by the
/// difference between the Planck spectra of the two plates, each in its
/// own rest frame.
pub fn density_lateral(gap: f64, ctx: &WaveContext, refl: &ReflectionSet, t1: f64, t2: f64) -> Result<DensitySample> {
    check_kinematics(ctx)?;
    if ctx.omega_p == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let br = brackets(ctx, refl);
    let n1 = planck(ctx.omega, t1);
    let n2 = ctx.omega_p.signum() * planck(ctx.omega_p.abs(), t2);
    let p = 2.0 * PLATE_PREFACTOR;
    let value = if ctx.region.is_evanescent() {
        let decay = (-2.0 * gap * ctx.w.im).exp();
        p * (n2 - n1) * decay * ctx.u * br.evan_xy
    } else {
        p * (n2 - n1) * ctx.u * br.prop_xy
    };
    Ok(DensitySample {
        value,
        region: ctx.region,
        channel: Channel::LateralCombined,
        parts: Some(DensityParts {
            quantum: 0.0,
            thermal: value,
        }),
    })
}

/// Rotated zero-point integrand of the perpendicular stress at imaginary lab
/// frequency ω = iκ.
///
/// The bracket is evaluated in the pole-safe form with cavity factors
/// `a_XY = 1 − e^{−2a|w|} r_X1 r_Y2` in the denominator, so vanishing
/// reflection coefficients are regular. The integrand is complex for β ≠ 0
/// but its imaginary part is odd in u; the real part is returned.
pub fn density_qvac_imag(
    kappa: f64,
    u: f64,
    v: f64,
    gap: f64,
    beta: f64,
    mat1: &Material,
    mat2: &Material,
) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("imaginary frequency {kappa} must be positive")));
    }
    let r = imaginary_axis_reflections(kappa, u, v, beta, mat1, mat2)?;
    let s2 = u * u + v * v;
    let decay = (kappa * kappa + s2).sqrt();
    let shear = Complex64::new(s2, -kappa * u * beta);
    let k_raw = shear * shear;
    let v_raw = -v * v * beta * beta * decay * decay;
    let scale = k_raw.norm() + v_raw.abs();
    if !(scale > 0.0) {
        return Err(Error::NormalIncidence);
    }
    let bracket = rotated_bracket(&r, (-2.0 * gap * decay).exp(), k_raw / scale, v_raw / scale)?;
    Ok(decay * bracket.re / (4.0 * PI * PI * PI))
}

/// `q [K(r_B1 r_B2 a_EE + r_E1 r_E2 a_BB) + V(r_B1 r_E2 a_EB + r_E1 r_B2 a_BE)] / (K a_EE a_BB + V a_EB a_BE)`
/// with `a_XY = 1 − q r_X1 r_Y2`.
fn rotated_bracket(r: &Reflections, q: f64, k: Complex64, v: f64) -> Result<Complex64> {
    let a_ee = 1.0 - q * r.r_e1 * r.r_e2;
    let a_bb = 1.0 - q * r.r_b1 * r.r_b2;
    let a_eb = 1.0 - q * r.r_e1 * r.r_b2;
    let a_be = 1.0 - q * r.r_b1 * r.r_e2;
    let num = k * (r.r_b1 * r.r_b2 * a_ee + r.r_e1 * r.r_e2 * a_bb)
        + v * (r.r_b1 * r.r_e2 * a_eb + r.r_e1 * r.r_b2 * a_be);
    let den = k * a_ee * a_bb + v * a_eb * a_be;
    if !(den.norm() > 1e-300) {
        return Err(Error::CavityResonance {
            magnitude: den.norm(),
            omega: 0.0,
            u: 0.0,
            v,
        });
    }
    Ok(q * num / den)
}

/// Zero-point perpendicular-stress integrand on the real frequency axis,
/// `−(1/4π³) Re[e^{2iwa} w N / D]` with the divergent free-space term dropped.
///
/// Slowly convergent and oscillatory; used to check the imaginary-axis route.
pub fn density_qvac_real(gap: f64, ctx: &WaveContext, refl: &ReflectionSet) -> Result<f64> {
    check_kinematics(ctx)?;
    let q = ctx.round_trip(gap);
    let r = &refl.r;
    let c = &refl.cavity;
    let shear = ctx.shear();
    let kin = shear * shear + ctx.mixing();
    let (k, v) = (shear * shear / kin, ctx.mixing() / kin);
    let num = k * (r.r_b1 * r.r_b2 * c.a_ee + r.r_e1 * r.r_e2 * c.a_bb)
        + v * (r.r_b1 * r.r_e2 * c.a_eb + r.r_e1 * r.r_b2 * c.a_be);
    let den = k * c.a_ee * c.a_bb + v * c.a_eb * c.a_be;
    Ok(-(q * ctx.w * num / den).re / (4.0 * PI * PI * PI))
}

/// Zero-point perpendicular-stress integrand written as separate
/// evanescent and propagating forms (the sum of the zero-point parts of the
/// two per-plate densities), including the divergent free-space term.
pub fn density_qvac_split(gap: f64, ctx: &WaveContext, refl: &ReflectionSet) -> Result<f64> {
    let one = density_plate1(gap, ctx, refl, Channel::Sigma1xx, 0.0)?;
    let two = density_plate2(gap, ctx, refl, Channel::Sigma2xx, 0.0)?;
    Ok(one.value + two.value)
}

/// Evaluates the density of any real-axis channel. `QVacImag` is rejected.
pub fn density(
    channel: Channel,
    gap: f64,
    ctx: &WaveContext,
    refl: &ReflectionSet,
    t1: f64,
    t2: f64,
) -> Result<DensitySample> {
    match channel {
        Channel::Sigma1xx | Channel::Sigma1xy | Channel::Poynting1x => {
            density_plate1(gap, ctx, refl, channel, t1)
        }
        Channel::Sigma2xx | Channel::Sigma2xy => density_plate2(gap, ctx, refl, channel, t2),
        Channel::LateralCombined => density_lateral(gap, ctx, refl, t1, t2),
        Channel::QVacImag => Err(Error::Channel(channel.name())),
    }
}
