//! Wave-vector kinematics for one spectral sample (ω, u, v).
//!
//! Units are natural (ħ = c = k_B = 1), lengths in units of the gap. The
//! plates are normal to x, plate 2 moves along +y with velocity fraction β.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CVec3;

/// Spectral region of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// ω > s: real normal wavenumber.
    Propagating,
    /// ω ≤ s with non-negative co-moving frequency ω′.
    Evanescent,
    /// 0 < ω < βu, so ω′ < 0 (anomalous Doppler region).
    AnomalousEvanescent,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::Propagating => "propagating",
            Region::Evanescent => "evanescent",
            Region::AnomalousEvanescent => "anomalous",
        }
    }

    pub fn is_evanescent(self) -> bool {
        !matches!(self, Region::Propagating)
    }
}

/// Square root on the branch with non-negative imaginary part.
pub fn branch_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.im < 0.0 {
        -r
    } else if r.im == 0.0 && r.re < 0.0 {
        // real result: keep the non-negative root
        -r
    } else {
        r
    }
}

/// Normal wavenumber in the gap, `w = √(ω² − s²)` with Im w ≥ 0, for complex ω.
pub fn gap_wavenumber(omega: Complex64, s: f64) -> Complex64 {
    branch_sqrt(omega * omega - s * s)
}

/// Normal wavenumber in the gap for real ω ≥ 0, avoiding cancellation near ω = s.
pub fn gap_wavenumber_real(omega: f64, s: f64) -> Complex64 {
    let w2 = (omega - s) * (omega + s);
    if w2 > 0.0 {
        Complex64::new(w2.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-w2).sqrt())
    }
}

/// Normal wavenumber inside a medium, `w₁ = √(εμω² − s²)`, Im w₁ ≥ 0.
pub fn medium_wavenumber(eps: Complex64, mu: Complex64, omega: Complex64, s: f64) -> Complex64 {
    branch_sqrt(eps * mu * omega * omega - s * s)
}

/// Same as [`medium_wavenumber`] but written as `√((εμ − 1)ω² + w²)` in terms
/// of the squared gap wavenumber, which is accurate when the medium is
/// nearly vacuum-like or the sample sits near the light line.
pub fn medium_wavenumber_from_gap(eps_mu: Complex64, omega: Complex64, w_sq: Complex64) -> Complex64 {
    branch_sqrt((eps_mu - 1.0) * omega * omega + w_sq)
}

/// Lorentz factor for a velocity fraction.
pub fn lorentz_gamma(beta: f64) -> Result<f64> {
    if !(beta.abs() < 1.0) {
        return Err(Error::Velocity(beta));
    }
    Ok(1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt())
}

/// All kinematic quantities for one real-frequency sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveContext {
    pub omega: f64,
    pub u: f64,
    pub v: f64,
    pub beta: f64,
    pub gamma: f64,
    pub s: f64,
    /// Gap normal wavenumber (real ≥ 0 or positive imaginary).
    pub w: Complex64,
    /// w², real: ω² − s².
    pub w_sq: f64,
    /// Frequency in the rest frame of plate 2.
    pub omega_p: f64,
    /// y-wavenumber in the rest frame of plate 2.
    pub u_p: f64,
    /// Transverse wavenumber in the rest frame of plate 2.
    pub s_p: f64,
    pub region: Region,
}

impl WaveContext {
    pub fn new(omega: f64, u: f64, v: f64, beta: f64) -> Result<Self> {
        let gamma = lorentz_gamma(beta)?;
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("frequency {omega} must be positive")));
        }
        if !(u.is_finite() && v.is_finite()) {
            return Err(Error::Domain("non-finite wavenumber".into()));
        }
        let s = u.hypot(v);
        let w = gap_wavenumber_real(omega, s);
        let w_sq = (omega - s) * (omega + s);
        let omega_p = gamma * (omega - beta * u);
        let u_p = gamma * (u - beta * omega);
        let s_p = u_p.hypot(v);
        let region = if omega > s {
            Region::Propagating
        } else if omega < beta * u {
            Region::AnomalousEvanescent
        } else {
            Region::Evanescent
        };
        Ok(WaveContext {
            omega,
            u,
            v,
            beta,
            gamma,
            s,
            w,
            w_sq,
            omega_p,
            u_p,
            s_p,
            region,
        })
    }

    /// `s² − uβω`, the lab-frame form of `s′² + u′βω′`.
    pub fn shear(&self) -> f64 {
        self.s * self.s - self.u * self.beta * self.omega
    }

    /// `v²β²w²` (negative for evanescent samples).
    pub fn mixing(&self) -> f64 {
        self.v * self.v * self.beta * self.beta * self.w_sq
    }

    /// Radicand `s² − 2βωu − β²(v² − ω²)` normalizing the plate-2 basis.
    pub fn frame_radicand(&self) -> f64 {
        let (o, u, v, b) = (self.omega, self.u, self.v, self.beta);
        // (u − βω)² + (1 − β²)v², non-negative by construction
        (u - b * o).powi(2) + (1.0 - b * b) * v * v
    }

    /// `e^{2iwa}` for gap width `a`.
    pub fn round_trip(&self, gap: f64) -> Complex64 {
        (Complex64::new(0.0, 2.0 * gap) * self.w).exp()
    }

    /// Right-moving (`+`) or left-moving gap wave vector `(±w, u, v)`.
    pub fn wave_vector(&self, right: bool) -> CVec3 {
        let w = if right { self.w } else { -self.w };
        [w, Complex64::from(self.u), Complex64::from(self.v)]
    }
}

/// Polarization unit vectors of the TE (E) and TM (B) plane waves, in the
/// frames co-moving with each plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationBasis {
    pub e1: CVec3,
    pub b1_plus: CVec3,
    pub b1_minus: CVec3,
    /// TM direction inside plate 1.
    pub bm1: CVec3,
    pub e2_plus: CVec3,
    pub e2_minus: CVec3,
    pub b2_plus: CVec3,
    pub b2_minus: CVec3,
}

/// Builds the polarization basis; `index1 = √(ε₁μ₁)` and `w1` describe the
/// medium of plate 1 (only `bm1` uses them).
pub fn polarization_basis(ctx: &WaveContext, index1: Complex64, w1: Complex64) -> Result<PolarizationBasis> {
    if ctx.s == 0.0 {
        return Err(Error::NormalIncidence);
    }
    let radicand = ctx.frame_radicand();
    if !(radicand > 0.0) {
        return Err(Error::DegenerateFrame(radicand));
    }
    let c = Complex64::from;
    let (o, u, v, b, s, w) = (ctx.omega, ctx.u, ctx.v, ctx.beta, ctx.s, ctx.w);
    let s2 = s * s;

    let e1 = [c(0.0), c(-v / s), c(u / s)];
    let kb = 1.0 / (o * s);
    let b1 = |sign: f64| [c(sign * s2 * kb), -w * (u * kb), -w * (v * kb)];
    let km = 1.0 / (index1 * (o * s));
    let bm1 = [-s2 * km, w1 * u * km, w1 * v * km];

    let k2 = 1.0 / (o * radicand.sqrt());
    let e2 = |sign: f64| {
        [
            w * (sign * b * v * k2),
            c(v * (-o + b * u) * k2),
            c((o * u + b * (v * v - o * o)) * k2),
        ]
    };
    let b2 = |sign: f64| {
        [
            c(sign * (-s2 + b * o * u) * k2),
            w * ((u - b * o) * k2),
            w * (v * k2),
        ]
    };
    Ok(PolarizationBasis {
        e1,
        b1_plus: b1(1.0),
        b1_minus: b1(-1.0),
        bm1,
        e2_plus: e2(1.0),
        e2_minus: e2(-1.0),
        b2_plus: b2(1.0),
        b2_minus: b2(-1.0),
    })
}
