//! Fresnel coefficients in each plate's rest frame and the cavity
//! multiple-reflection factors built from them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::{lorentz_gamma, medium_wavenumber_from_gap, WaveContext};
use crate::material::Material;

const POLE_THRESHOLD: f64 = 1e-300;
const RESONANCE_THRESHOLD: f64 = 1e-300;

/// TE/TM reflection coefficients for a wave in vacuum with normal
/// wavenumber `w` hitting a half-space with response (ε, μ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fresnel {
    pub r_e: Complex64,
    pub r_b: Complex64,
    /// Normal wavenumber inside the medium.
    pub w_medium: Complex64,
}

/// Fresnel coefficients at a frequency in the closed upper half-plane.
/// `w_sq` is the squared gap wavenumber, passed separately so callers can
/// supply it without cancellation.
pub fn fresnel(eps: Complex64, mu: Complex64, omega: Complex64, w: Complex64, w_sq: Complex64) -> Result<Fresnel> {
    let w1 = medium_wavenumber_from_gap(eps * mu, omega, w_sq);
    let den_e = mu * w + w1;
    if den_e.norm() <= POLE_THRESHOLD {
        return Err(Error::FresnelPole { which: "TE" });
    }
    let den_b = eps * w + w1;
    if den_b.norm() <= POLE_THRESHOLD {
        return Err(Error::FresnelPole { which: "TM" });
    }
    Ok(Fresnel {
        r_e: (mu * w - w1) / den_e,
        r_b: -(eps * w - w1) / den_b,
        w_medium: w1,
    })
}

/// Plate-1 coefficients, including the transmission amplitudes into the gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plate1Coefficients {
    pub r_e: Complex64,
    pub r_b: Complex64,
    /// `(t_E, t_B)`; `None` for the perfect-mirror limit.
    pub transmission: Option<(Complex64, Complex64)>,
    /// Normal wavenumber w₁ inside plate 1 (`None` for a perfect mirror).
    pub w_medium: Option<Complex64>,
    pub eps: Option<Complex64>,
    pub mu: Option<Complex64>,
}

/// Reflection and transmission at plate 1 (at rest), evaluated at the lab
/// frequency ω.
pub fn fresnel_plate1(ctx: &WaveContext, mat1: &Material) -> Result<Plate1Coefficients> {
    let minus_one = Complex64::new(-1.0, 0.0);
    if mat1.is_perfect_mirror() {
        return Ok(Plate1Coefficients {
            r_e: minus_one,
            r_b: minus_one,
            transmission: None,
            w_medium: None,
            eps: None,
            mu: None,
        });
    }
    let omega = Complex64::from(ctx.omega);
    let (eps, mu) = mat1.response(omega)?;
    let f = fresnel(eps, mu, omega, ctx.w, Complex64::from(ctx.w_sq))?;
    let t_e = 1.0 - f.r_e;
    let t_b = (eps / mu).sqrt() * (1.0 + f.r_b);
    Ok(Plate1Coefficients {
        r_e: f.r_e,
        r_b: f.r_b,
        transmission: Some((t_e, t_b)),
        w_medium: Some(f.w_medium),
        eps: Some(eps),
        mu: Some(mu),
    })
}

/// Reflection at plate 2, evaluated in its rest frame at (ω′, u′, v).
///
/// For ω′ < 0 the coefficients are the complex conjugates of those at |ω′|.
pub fn fresnel_plate2(ctx: &WaveContext, mat2: &Material) -> Result<(Complex64, Complex64)> {
    if mat2.is_perfect_mirror() {
        let m = Complex64::new(-1.0, 0.0);
        return Ok((m, m));
    }
    let flip = ctx.omega_p < 0.0;
    let omega_p = Complex64::from(ctx.omega_p.abs());
    let (eps, mu) = mat2.response(omega_p)?;
    let f = fresnel(eps, mu, omega_p, ctx.w, Complex64::from(ctx.w_sq))?;
    if flip {
        // w is imaginary here (ω′ < 0 only happens for evanescent samples)
        Ok((f.r_e.conj(), f.r_b.conj()))
    } else {
        Ok((f.r_e, f.r_b))
    }
}

/// The four reflection coefficients of the cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflections {
    pub r_e1: Complex64,
    pub r_b1: Complex64,
    pub r_e2: Complex64,
    pub r_b2: Complex64,
}

/// Cavity factors `a_XY = 1 − e^{2iwa} r_X1 r_Y2` and the shared denominator
/// `D = (s² − uβω)² a_EE a_BB + a_EB a_BE v²β²w²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityFactors {
    pub a_ee: Complex64,
    pub a_bb: Complex64,
    pub a_eb: Complex64,
    pub a_be: Complex64,
    pub d: Complex64,
}

pub fn cavity_factors(gap: f64, ctx: &WaveContext, r: &Reflections) -> Result<CavityFactors> {
    let q = ctx.round_trip(gap);
    let a_ee = 1.0 - q * r.r_e1 * r.r_e2;
    let a_bb = 1.0 - q * r.r_b1 * r.r_b2;
    let a_eb = 1.0 - q * r.r_e1 * r.r_b2;
    let a_be = 1.0 - q * r.r_b1 * r.r_e2;
    let k = ctx.shear();
    let d = k * k * a_ee * a_bb + a_eb * a_be * ctx.mixing();
    if !(d.norm() > RESONANCE_THRESHOLD) {
        return Err(Error::CavityResonance {
            magnitude: d.norm(),
            omega: ctx.omega,
            u: ctx.u,
            v: ctx.v,
        });
    }
    Ok(CavityFactors {
        a_ee,
        a_bb,
        a_eb,
        a_be,
        d,
    })
}

/// Everything the spectral densities need at one real-frequency sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionSet {
    pub r: Reflections,
    pub transmission: Option<(Complex64, Complex64)>,
    pub cavity: CavityFactors,
}

impl ReflectionSet {
    pub fn compute(gap: f64, ctx: &WaveContext, mat1: &Material, mat2: &Material) -> Result<Self> {
        let p1 = fresnel_plate1(ctx, mat1)?;
        let (r_e2, r_b2) = fresnel_plate2(ctx, mat2)?;
        let r = Reflections {
            r_e1: p1.r_e,
            r_b1: p1.r_b,
            r_e2,
            r_b2,
        };
        let cavity = cavity_factors(gap, ctx, &r)?;
        Ok(ReflectionSet {
            r,
            transmission: p1.transmission,
            cavity,
        })
    }
}

/// Reflection coefficients on the imaginary lab-frequency axis ω = iκ.
///
/// Plate 1 sees a purely imaginary frequency; plate 2 sees the complex
/// co-moving frequency ω′ = γ(iκ − βu), which lies in the upper half-plane.
pub fn imaginary_axis_reflections(
    kappa: f64,
    u: f64,
    v: f64,
    beta: f64,
    mat1: &Material,
    mat2: &Material,
) -> Result<Reflections> {
    let gamma = lorentz_gamma(beta)?;
    let decay = (kappa * kappa + u * u + v * v).sqrt();
    let w = Complex64::new(0.0, decay);
    let w_sq = Complex64::from(-decay * decay);
    let minus_one = Complex64::new(-1.0, 0.0);

    let (r_e1, r_b1) = if mat1.is_perfect_mirror() {
        (minus_one, minus_one)
    } else {
        let eps = mat1.epsilon.evaluate_imaginary(kappa)?;
        let mu = mat1.mu.evaluate_imaginary(kappa)?;
        let q1 = (eps * mu * kappa * kappa + u * u + v * v).sqrt();
        let r_e = (mu * decay - q1) / (mu * decay + q1);
        let r_b = -(eps * decay - q1) / (eps * decay + q1);
        (Complex64::from(r_e), Complex64::from(r_b))
    };

    let (r_e2, r_b2) = if mat2.is_perfect_mirror() {
        (minus_one, minus_one)
    } else {
        let omega_p = gamma * Complex64::new(-beta * u, kappa);
        let (eps, mu) = mat2.response(omega_p)?;
        let f = fresnel(eps, mu, omega_p, w, w_sq)?;
        (f.r_e, f.r_b)
    };
    Ok(Reflections {
        r_e1,
        r_b1,
        r_e2,
        r_b2,
    })
}
