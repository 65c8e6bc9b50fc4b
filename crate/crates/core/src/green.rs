//! Plane-wave expansion of the cavity Green tensor for a source inside
//! plate 1 and a field point in the gap.
//!
//! The force path never builds these matrices (the densities in
//! [`crate::spectral`] are already contracted); this module exists to check
//! the contractions against direct linear algebra.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::{polarization_basis, PolarizationBasis, WaveContext};
use crate::linalg::{add, dot, dyad, identity, matmul, scale, sub, CMat3, CVec3};
use crate::material::Material;
use crate::reflection::{fresnel_plate1, fresnel_plate2, Reflections};

const RESONANCE_THRESHOLD: f64 = 1e-300;

/// Transmission and reflection operators together with the data that
/// produced them.
#[derive(Debug, Clone, Copy)]
pub struct Operators {
    pub t: CMat3,
    pub r1: CMat3,
    pub r2: CMat3,
    pub basis: PolarizationBasis,
    pub reflections: Reflections,
    pub eps1: Complex64,
    pub mu1: Complex64,
    pub w1: Complex64,
}

/// Assembles `T`, `R₁` and `R₂` from their dyadic forms. Plate 1 must be a
/// real medium (a perfect mirror transmits nothing).
pub fn build_operators(ctx: &WaveContext, mat1: &Material, mat2: &Material) -> Result<Operators> {
    let p1 = fresnel_plate1(ctx, mat1)?;
    let ((t_e, t_b), w1, eps1, mu1) = match (p1.transmission, p1.w_medium, p1.eps, p1.mu) {
        (Some(t), Some(w1), Some(e), Some(m)) => (t, w1, e, m),
        _ => return Err(Error::LimitModel),
    };
    let (r_e2, r_b2) = fresnel_plate2(ctx, mat2)?;
    let basis = polarization_basis(ctx, (eps1 * mu1).sqrt(), w1)?;
    let b = &basis;

    let t = sub(&dyad(t_e, &b.e1, &b.e1), &dyad(t_b, &b.b1_plus, &b.bm1));
    let r1 = add(&dyad(p1.r_e, &b.e1, &b.e1), &dyad(p1.r_b, &b.b1_plus, &b.b1_minus));
    let r2 = add(&dyad(r_e2, &b.e2_minus, &b.e2_plus), &dyad(r_b2, &b.b2_minus, &b.b2_plus));
    Ok(Operators {
        t,
        r1,
        r2,
        basis,
        reflections: Reflections {
            r_e1: p1.r_e,
            r_b1: p1.r_b,
            r_e2,
            r_b2,
        },
        eps1,
        mu1,
        w1,
    })
}

/// Closed-form expansion of `(𝟙 − e^{2iwa} R₁R₂)⁻¹ = 𝟙 + M` and
/// `R₂(𝟙 + M) = N` in the basis `{n_E1, n_B1±}`.
#[derive(Debug, Clone, Copy)]
pub struct CavityExpansion {
    /// `n_E1 · n_E2⁺`
    pub lambda: Complex64,
    /// `n_B1⁺ · n_E2⁺`; complex for evanescent waves.
    pub nu: Complex64,
    pub rho: Complex64,
    pub c_ee: Complex64,
    pub c_bb: Complex64,
    pub c_eb: Complex64,
    pub c_be: Complex64,
    pub d_ee: Complex64,
    pub d_bb: Complex64,
    pub d_eb: Complex64,
    pub d_be: Complex64,
    pub m: CMat3,
    pub n: CMat3,
    /// `e^{2iwa}`
    pub round_trip: Complex64,
}

pub fn expand_inverse(ctx: &WaveContext, ops: &Operators, gap: f64) -> Result<CavityExpansion> {
    let b = &ops.basis;
    let r = &ops.reflections;
    let q = ctx.round_trip(gap);
    let lambda = dot(&b.e1, &b.e2_plus);
    let nu = dot(&b.b1_plus, &b.e2_plus);
    let (l2, n2) = (lambda * lambda, nu * nu);

    let den = 1.0 + q * q * r.r_e1 * r.r_e2 * r.r_b1 * r.r_b2
        - q * (r.r_e1 * r.r_e2 * l2 + r.r_b1 * r.r_b2 * l2 + r.r_e2 * r.r_b1 * n2 + r.r_e1 * r.r_b2 * n2);
    if !(den.norm() > RESONANCE_THRESHOLD) {
        return Err(Error::CavityResonance {
            magnitude: den.norm(),
            omega: ctx.omega,
            u: ctx.u,
            v: ctx.v,
        });
    }
    let rho = 1.0 / den;
    let c_ee = rho * q * r.r_e1 * (-q * r.r_e2 * r.r_b1 * r.r_b2 + r.r_e2 * l2 + r.r_b2 * n2);
    let c_bb = rho * q * r.r_b1 * (-q * r.r_b2 * r.r_e1 * r.r_e2 + r.r_b2 * l2 + r.r_e2 * n2);
    let c_be = rho * q * r.r_b1 * (r.r_e2 - r.r_b2) * lambda * nu;
    let c_eb = rho * q * r.r_e1 * (r.r_e2 - r.r_b2) * lambda * nu;

    let m = [
        dyad(c_ee, &b.e1, &b.e1),
        dyad(c_bb, &b.b1_plus, &b.b1_plus),
        dyad(c_eb, &b.e1, &b.b1_plus),
        dyad(c_be, &b.b1_plus, &b.e1),
    ]
    .iter()
    .fold(crate::linalg::zeros(), |acc, x| add(&acc, x));

    // N has left vectors {n_E1, n_B1⁻} (left-movers leaving plate 2)
    let n_direct = matmul(&ops.r2, &add(&identity(), &m));
    let project = |left: &CVec3, right: &CVec3| dot(left, &crate::linalg::apply(&n_direct, right));
    let d_from = |c: Complex64, r_x1: Complex64, left: &CVec3, right: &CVec3| {
        if r_x1.norm() > 0.0 {
            c / (q * r_x1)
        } else {
            project(left, right)
        }
    };
    let d_ee = d_from(c_ee, r.r_e1, &b.e1, &b.e1);
    let d_bb = d_from(c_bb, r.r_b1, &b.b1_minus, &b.b1_plus);
    let d_eb = d_from(c_eb, r.r_e1, &b.e1, &b.b1_plus);
    let d_be = d_from(c_be, r.r_b1, &b.b1_minus, &b.e1);
    let n = [
        dyad(d_ee, &b.e1, &b.e1),
        dyad(d_bb, &b.b1_minus, &b.b1_plus),
        dyad(d_eb, &b.e1, &b.b1_plus),
        dyad(d_be, &b.b1_minus, &b.e1),
    ]
    .iter()
    .fold(crate::linalg::zeros(), |acc, x| add(&acc, x));

    Ok(CavityExpansion {
        lambda,
        nu,
        rho,
        c_ee,
        c_bb,
        c_eb,
        c_be,
        d_ee,
        d_bb,
        d_eb,
        d_be,
        m,
        n,
        round_trip: q,
    })
}

/// Fourier-transformed Green tensor at gap position `x ∈ (0, a)` for a
/// source at depth `x_src < 0` inside plate 1.
pub fn green_tensor(
    x: f64,
    x_src: f64,
    gap: f64,
    ctx: &WaveContext,
    ops: &Operators,
    expansion: &CavityExpansion,
) -> Result<CMat3> {
    if !(x > 0.0 && x < gap) || !(x_src < 0.0) {
        return Err(Error::Domain(format!(
            "field point {x} must lie in the gap and source {x_src} inside plate 1"
        )));
    }
    let i = Complex64::i();
    let w = ctx.w;
    let source = (-i * ops.w1 * x_src).exp();
    let direct = (i * w * x).exp() * source;
    let reflected = (-i * w * (x - 2.0 * gap)).exp() * source;
    let t_plus_mt = add(&ops.t, &matmul(&expansion.m, &ops.t));
    let nt = matmul(&expansion.n, &ops.t);
    let g = add(&scale(direct, &t_plus_mt), &scale(reflected, &nt));
    Ok(scale(ops.mu1 / (2.0 * ops.w1), &g))
}

/// `ℊ₊ = (k₁⁺ ⊗ k₁⁺ + ε₁μ₁ω² 𝟙) / (2ε₁ω²w₁)`, the right-moving bare Green
/// tensor amplitude inside plate 1.
pub fn bare_amplitude(ctx: &WaveContext, ops: &Operators) -> CMat3 {
    let k1: CVec3 = [ops.w1, Complex64::from(ctx.u), Complex64::from(ctx.v)];
    let o2 = ctx.omega * ctx.omega;
    let kk = dyad(Complex64::from(1.0), &k1, &k1);
    let iso = scale(ops.eps1 * ops.mu1 * o2, &identity());
    scale(1.0 / (2.0 * ops.eps1 * o2 * ops.w1), &add(&kk, &iso))
}
