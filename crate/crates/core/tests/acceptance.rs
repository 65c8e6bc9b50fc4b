//! End-to-end acceptance checks. Each test prints a single PASS/FAIL line
//! before asserting, so `cargo test --test acceptance -- --nocapture` gives
//! a one-line-per-criterion summary.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use casimir_core::kinematics::WaveContext;
use casimir_core::quadrature::{integrate_intervals, AxisRule, Sample};
use casimir_core::reflection::ReflectionSet;
use casimir_core::spectral::{density_plate1, density_qvac_imag, density_qvac_real};
use casimir_core::validation::{run_identity_suite, SuiteOptions};
use casimir_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// tolerances pinned by the acceptance criteria
const MIRROR_REL: f64 = 1e-5;
const MIRROR_TIME: Duration = Duration::from_secs(10);
const LIFSHITZ_REL: f64 = 1e-3;
const LIFSHITZ_TIME: Duration = Duration::from_secs(120);
const QUANTUM_FRICTION_REL: f64 = 1e-6;
const ROTATION_REL: f64 = 1e-3;
const IDENTITY_TIME: Duration = Duration::from_secs(30);
const ODDNESS: f64 = 1e-12;
const FLUX_RELATION: f64 = 1e-13;
const DRAG_SIGNIFICANCE: f64 = 10.0;

fn report(criterion: u32, pass: bool, detail: String) {
    println!("{} criterion {criterion}: {detail}", if pass { "PASS" } else { "FAIL" });
}

fn drude(plasma: f64, damping: f64) -> Material {
    Material::nonmagnetic(DispersionModel::drude(plasma, damping).unwrap())
}

fn lorentz(eps_inf: f64, strength: f64, resonance: f64, damping: f64) -> Material {
    Material::nonmagnetic(DispersionModel::lorentz(eps_inf, strength, resonance, damping).unwrap())
}

/// Lossy dielectric used for the moving-plate integrals.
fn dielectric() -> Material {
    lorentz(1.0, 3.0, 1.0, 0.5)
}

#[test]
fn criterion_1_mirror_casimir_pressure() {
    let m = Material::perfect_mirror();
    let config = CavityConfig::new(0.0, Plate::new(m.clone(), 0.0), Plate::new(m, 0.0)).unwrap();
    let plan = IntegrationPlan {
        parallel: false,
        ..IntegrationPlan::default()
    };
    let start = Instant::now();
    let r = integrate_force(&config, &plan).unwrap();
    let elapsed = start.elapsed();
    let exact = -PI * PI / 240.0;
    let rel = (r.sigma_xx.total - exact).abs() / exact.abs();
    let pass = rel < MIRROR_REL && elapsed < MIRROR_TIME;
    report(
        1,
        pass,
        format!("σxx = {:.12} vs −π²/240 = {exact:.12}, rel {rel:.1e}, {elapsed:.2?}", r.sigma_xx.total),
    );
    assert!(pass);
}

mod lifshitz {
    //! Equilibrium Lifshitz pressure as a Matsubara sum, written out
    //! independently of the library.

    use std::f64::consts::PI;

    fn reflections(xi: f64, kappa: f64, plasma: f64, damping: f64) -> (f64, f64) {
        if xi == 0.0 {
            // Drude: no static TE reflection, perfect static TM reflection
            return (0.0, 1.0);
        }
        let eps = 1.0 + plasma * plasma / (xi * (xi + damping));
        let kappa1 = (kappa * kappa + (eps - 1.0) * xi * xi).sqrt();
        let te = (kappa - kappa1) / (kappa + kappa1);
        let tm = (eps * kappa - kappa1) / (eps * kappa + kappa1);
        (te, tm)
    }

    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut sum = f(a) + f(b);
        for i in 1..n {
            let x = a + i as f64 * h;
            sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        sum * h / 3.0
    }

    /// Pressure between identical Drude half-spaces at unit gap, negative
    /// when attractive. Excludes the black-body pressure of the gap.
    pub fn pressure(plasma: f64, damping: f64, temperature: f64) -> f64 {
        let mut total = 0.0;
        let mut n = 0;
        loop {
            let xi = 2.0 * PI * n as f64 * temperature;
            if xi > 40.0 {
                break;
            }
            // ∫ k dk κ f(κ) = ∫_ξ^∞ κ² f(κ) dκ
            let term = simpson(
                |kappa| {
                    if kappa == 0.0 {
                        return 0.0;
                    }
                    let (te, tm) = reflections(xi, kappa, plasma, damping);
                    let e = (-2.0 * kappa).exp();
                    let part = |r: f64| r * r * e / (1.0 - r * r * e);
                    kappa * kappa * (part(te) + part(tm))
                },
                xi,
                xi + 40.0,
                8000,
            );
            total += if n == 0 { 0.5 * term } else { term };
            n += 1;
        }
        -temperature / PI * total
    }
}

#[test]
fn criterion_2_lifshitz_reduction() {
    // gold-like Drude metal at 300 K
    const HBAR: f64 = 1.054_571_817e-34;
    const C: f64 = 299_792_458.0;
    const KB: f64 = 1.380_649e-23;
    let (plasma_si, damping_si, temp_si) = (1.37e16, 5.32e13, 300.0);
    let gaps = [0.2e-6, 0.5e-6, 1.0e-6, 1.5e-6, 2.0e-6];

    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for a in gaps {
        let plasma = plasma_si * a / C;
        let damping = damping_si * a / C;
        let t = KB * temp_si * a / (HBAR * C);
        let m = drude(plasma, damping);
        let config = CavityConfig::new(0.0, Plate::new(m.clone(), t), Plate::new(m, t)).unwrap();
        let r = integrate_force(&config, &IntegrationPlan::default()).unwrap();
        // the stress in the gap also carries the black-body pressure π²T⁴/45
        let oracle = lifshitz::pressure(plasma, damping, t) + PI * PI * t.powi(4) / 45.0;
        let rel = (r.sigma_xx.total - oracle).abs() / oracle.abs();
        worst = if rel.is_nan() { f64::INFINITY } else { worst.max(rel) };
        lines.push(format!("a={:.1}µm rel {rel:.1e}", a * 1e6));
    }
    let elapsed = start.elapsed();
    let pass = worst < LIFSHITZ_REL && elapsed < LIFSHITZ_TIME;
    report(
        2,
        pass,
        format!("Drude β=0 vs Matsubara sum: {} ({elapsed:.1?})", lines.join(", ")),
    );
    assert!(pass);
}

#[test]
fn criterion_3_no_quantum_friction() {
    let m = drude(5.0, 1.0);
    let mut lines = Vec::new();
    let mut pass = true;
    for beta in [0.1, 0.3, 0.6] {
        let config = CavityConfig::new(beta, Plate::new(m.clone(), 0.0), Plate::new(m.clone(), 0.0)).unwrap();
        let r = integrate_force(&config, &IntegrationPlan::default()).unwrap();
        let (xy, err, xx) = (r.sigma_xy.total, r.sigma_xy.error, r.sigma_xx.total);
        let ok = xy.abs() <= err && err < QUANTUM_FRICTION_REL * xx.abs() && xx < 0.0;
        pass &= ok;
        lines.push(format!("β={beta}: σxy={xy:.1e}±{err:.1e}, σxx={xx:.6e}"));
    }
    report(3, pass, format!("T=0 lateral stress: {}", lines.join("; ")));
    assert!(pass);
}

/// Disk of transverse wavevectors over which both frequency contours are
/// integrated.
const DISK: f64 = 2.0;
/// Real-axis truncation; beyond it the reflection coefficients of the
/// dielectrics below are O(10⁻⁴).
const OMEGA_MAX: f64 = 80.0;

fn nested<F>(inner: F, rel: f64) -> f64
where
    F: Fn(f64, f64) -> Sample<1> + Sync,
{
    let axis = |depth: i32| AxisRule {
        rel_tol: rel * 0.25f64.powi(depth),
        abs_tol: 1e-13,
        max_subdivisions: 200,
        cancellation: 1e-3,
    };
    let seams = [0.0, 0.5, 1.0, DISK];
    let s_intervals: Vec<(f64, f64)> = seams.windows(2).map(|w| (w[0], w[1])).collect();
    let middle = |phi: f64| {
        let f = |s: f64| {
            let mut r = inner(s, phi);
            r.value[0] *= s;
            r.error[0] *= s;
            r
        };
        integrate_intervals(&f, &s_intervals, &axis(1), false)
    };
    // the densities are even in v: integrate φ ∈ [0, π] and double
    let r = integrate_intervals(&middle, &[(0.0, FRAC_PI_2), (FRAC_PI_2, PI)], &axis(0), true);
    2.0 * r.value[0]
}

fn rotation_pair(m1: &Material, m2: &Material, beta: f64) -> (f64, f64) {
    let rel = 1e-6;
    let real = nested(
        |s, phi| {
            let (u, v) = (s * phi.cos(), s * phi.sin());
            let point = |omega: f64, jac: f64| -> Sample<1> {
                let value = WaveContext::new(omega, u, v, beta)
                    .and_then(|ctx| {
                        let refl = ReflectionSet::compute(1.0, &ctx, m1, m2)?;
                        density_qvac_real(1.0, &ctx, &refl)
                    })
                    .expect("real-axis density");
                Sample::point([value * jac])
            };
            // evanescent ω = s sin θ, with the anomalous seam ω = βu
            let mut intervals = vec![];
            let seam = (beta * phi.cos()).asin();
            if seam > 0.0 {
                intervals.push((0.0, seam));
                intervals.push((seam, FRAC_PI_2));
            } else {
                intervals.push((0.0, FRAC_PI_2));
            }
            let evanescent = integrate_intervals(
                &|th: f64| point(s * th.sin(), s * th.cos()),
                &intervals,
                &AxisRule {
                    rel_tol: rel / 16.0,
                    abs_tol: 1e-14,
                    max_subdivisions: 200,
                    cancellation: 1e-3,
                },
                false,
            );
            // propagating ω = √(s² + t²)
            let t_max = (OMEGA_MAX * OMEGA_MAX - s * s).sqrt();
            let panels: Vec<(f64, f64)> = (0..40).map(|k| (k as f64 * t_max / 40.0, (k + 1) as f64 * t_max / 40.0)).collect();
            let propagating = integrate_intervals(
                &|t: f64| {
                    let omega = (s * s + t * t).sqrt();
                    point(omega, t / omega)
                },
                &panels,
                &AxisRule {
                    rel_tol: rel / 16.0,
                    abs_tol: 1e-14,
                    max_subdivisions: 200,
                    cancellation: 1e-3,
                },
                false,
            );
            Sample::point([evanescent.value[0] + propagating.value[0]])
        },
        rel,
    );
    let imaginary = nested(
        |s, phi| {
            let (u, v) = (s * phi.cos(), s * phi.sin());
            integrate_intervals(
                &|kappa: f64| Sample::point([density_qvac_imag(kappa, u, v, 1.0, beta, m1, m2).expect("imaginary-axis density")]),
                &[(0.0, 1.0), (1.0, 5.0), (5.0, 30.0)],
                &AxisRule {
                    rel_tol: rel / 16.0,
                    abs_tol: 1e-14,
                    max_subdivisions: 200,
                    cancellation: 1e-3,
                },
                false,
            )
        },
        rel,
    );
    (real, imaginary)
}

#[test]
fn criterion_4_contour_rotation() {
    let beta = 0.3;
    let configs = [
        ("identical dielectrics", dielectric(), dielectric()),
        ("unequal dielectrics", lorentz(1.0, 2.0, 2.0, 0.3), lorentz(1.0, 5.0, 0.7, 0.8)),
    ];
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, m1, m2) in configs {
        let (real, imaginary) = rotation_pair(&m1, &m2, beta);
        let rel = (real - imaginary).abs() / imaginary.abs();
        pass &= rel < ROTATION_REL;
        lines.push(format!("{name}: real {real:.8e} imag {imaginary:.8e} rel {rel:.1e}"));
    }
    report(4, pass, format!("β={beta}, s ≤ {DISK}: {}", lines.join("; ")));
    assert!(pass);
}

#[test]
fn criterion_5_identity_suite() {
    let start = Instant::now();
    let report_ = run_identity_suite(&SuiteOptions::default());
    let control = run_identity_suite(&SuiteOptions {
        samples: 1000,
        perturb_long_identity: true,
        ..SuiteOptions::default()
    });
    let elapsed = start.elapsed();
    for c in &report_.checks {
        println!("    {c}");
    }
    let all = report_.passed();
    let enough = report_.checks.iter().all(|c| c.samples >= 10_000);
    let control_fails = !control.get("long_identity").unwrap().passed();
    let pass = all && enough && control_fails && elapsed < IDENTITY_TIME;
    report(
        5,
        pass,
        format!(
            "{} identities at ≥10⁴ samples, negative control {}, {elapsed:.2?}",
            report_.checks.len(),
            if control_fails { "rejected" } else { "NOT rejected" }
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_symmetry_in_beta() {
    let (m1, m2) = (dielectric(), lorentz(2.0, 1.5, 1.5, 0.4));
    let plan = IntegrationPlan::default().with_rel_tol(1e-5);
    let forward = CavityConfig::new(0.25, Plate::new(m1.clone(), 0.4), Plate::new(m2.clone(), 0.2)).unwrap();
    let a = integrate_force(&forward, &plan).unwrap();
    let b = integrate_force(&forward.reversed(), &plan).unwrap();
    let xx_gap = (a.sigma_xx.total - b.sigma_xx.total).abs();
    let xx_err = a.sigma_xx.error + b.sigma_xx.error;
    let xy_gap = (a.sigma_xy.total + b.sigma_xy.total).abs();
    let xy_err = a.sigma_xy.error + b.sigma_xy.error;

    // pointwise: the plate-1 lateral density is odd under (u, β) → (−u, −β)
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let omega = rng.gen_range(0.01..4.0);
        let (u, v) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let beta = rng.gen_range(-0.9..0.9);
        let t1 = rng.gen_range(0.0..1.0);
        let eval = |u: f64, beta: f64| {
            let ctx = WaveContext::new(omega, u, v, beta).ok()?;
            let refl = ReflectionSet::compute(1.0, &ctx, &m1, &m2).ok()?;
            density_plate1(1.0, &ctx, &refl, Channel::Sigma1xy, t1).ok().map(|d| d.value)
        };
        if let (Some(p), Some(q)) = (eval(u, beta), eval(-u, -beta)) {
            let scale = p.abs().max(q.abs());
            if scale > 0.0 {
                worst = worst.max((p + q).abs() / scale);
            }
        }
    }
    let pass = xx_gap <= xx_err && xy_gap <= xy_err && worst < ODDNESS;
    report(
        6,
        pass,
        format!(
            "β=±0.25: |Δσxx|={xx_gap:.1e} (err {xx_err:.1e}), |σxy(β)+σxy(−β)|={xy_gap:.1e} (err {xy_err:.1e}), pointwise oddness {worst:.1e}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_flux_stress_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    while samples < 10_000 {
        let m1 = if rng.gen_bool(0.5) {
            drude(rng.gen_range(0.5..10.0), rng.gen_range(0.05..2.0))
        } else {
            lorentz(rng.gen_range(1.0..3.0), rng.gen_range(0.5..5.0), rng.gen_range(0.5..3.0), rng.gen_range(0.05..1.0))
        };
        let m2 = drude(rng.gen_range(0.5..10.0), rng.gen_range(0.05..2.0));
        let omega = rng.gen_range(0.01..5.0);
        let (u, v) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let beta = rng.gen_range(-0.9..0.9);
        let t1 = rng.gen_range(0.0..2.0);
        let Ok(ctx) = WaveContext::new(omega, u, v, beta) else { continue };
        let Ok(refl) = ReflectionSet::compute(1.0, &ctx, &m1, &m2) else { continue };
        let flux = density_plate1(1.0, &ctx, &refl, Channel::Poynting1x, t1).unwrap().value;
        let stress = density_plate1(1.0, &ctx, &refl, Channel::Sigma1xy, t1).unwrap().value;
        let expected = -(omega / u) * stress;
        let scale = flux.abs().max(expected.abs());
        if scale > 0.0 {
            worst = worst.max((flux - expected).abs() / scale);
        }
        samples += 1;
    }
    let pass = worst < FLUX_RELATION;
    report(7, pass, format!("S₁ₓ = −(ω/u) σ₁ₓᵧ pointwise over {samples} samples, max rel {worst:.1e}"));
    assert!(pass);
}

#[test]
fn criterion_8_equal_temperature_drag() {
    let t = 0.5;
    let beta = 0.3;
    let config = CavityConfig::new(beta, Plate::new(dielectric(), t), Plate::new(dielectric(), t)).unwrap();
    let plan = IntegrationPlan::default().with_rel_tol(1e-3);
    let r = integrate_force(&config, &plan).unwrap();
    let (xy, err) = (r.sigma_xy.total, r.sigma_xy.error);
    // keeping plate 2 moving against the drag costs power σxy·β ≥ 0 (per unit
    // area, in units of c): the lateral stress on plate 1 points along the
    // motion of plate 2, opposing the motion of plate 1 relative to plate 2
    let power = xy * beta;
    let pass = xy.abs() > DRAG_SIGNIFICANCE * err && power > 0.0;
    report(
        8,
        pass,
        format!("T₁=T₂={t}, β={beta}: σxy = {xy:.6e} ± {err:.1e} (along +y, with plate 2), dissipated power {power:.3e}"),
    );
    assert!(pass);
}
