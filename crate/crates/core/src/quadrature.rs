//! Adaptive integration of the spectral densities.
//!
//! Every axis is integrated with an adaptive 21-point Gauss-Kronrod rule;
//! the three axes are nested, and the node values of an outer axis carry
//! the error estimates of the inner integrals, which are propagated with
//! the Kronrod weights. Only the outermost axis evaluates its nodes
//! concurrently; results are collected in node order and panels are summed
//! in a fixed order, so the output does not depend on the worker count.
//!
//! Real-frequency (thermal) channels use polar transverse coordinates
//! `u = s cos φ`, `v = s sin φ`. The frequency axis is split into an
//! evanescent piece `ω = s sin θ` and a propagating piece `ω = √(s² + t²)`,
//! which removes the square-root kinks at the light line ω = s; the
//! anomalous-Doppler line ω = βu is a panel boundary in θ.
//!
//! Normal-stress results (channels [`Channel::is_normal`] and
//! [`StressResult::sigma_xx`]) are reported as the pressure on plate 1:
//! negative values are attractive.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::cavity::CavityConfig;
use crate::error::{Error, Result};
use crate::kinematics::WaveContext;
use crate::reflection::ReflectionSet;
use crate::spectral::{density, density_qvac_imag, Channel};

// Gauss-Kronrod nodes and weights, quoted to full published precision
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Integrand value (or inner-integral estimate) with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    /// Integral of |f| (for a point, |f| itself).
    pub l1: [f64; N],
    pub evaluations: u64,
    pub excluded: u64,
    pub converged: bool,
}

impl<const N: usize> Sample<N> {
    pub fn point(value: [f64; N]) -> Self {
        Sample {
            value,
            error: [0.0; N],
            l1: value.map(f64::abs),
            evaluations: 1,
            excluded: 0,
            converged: true,
        }
    }

    /// A point where the density could not be evaluated; counted as zero.
    pub fn excluded() -> Self {
        Sample {
            value: [0.0; N],
            error: [0.0; N],
            l1: [0.0; N],
            evaluations: 1,
            excluded: 1,
            converged: true,
        }
    }

    pub fn zero() -> Self {
        Sample {
            value: [0.0; N],
            error: [0.0; N],
            l1: [0.0; N],
            evaluations: 0,
            excluded: 0,
            converged: true,
        }
    }

    fn scaled(mut self, factor: f64) -> Self {
        for c in 0..N {
            self.value[c] *= factor;
            self.error[c] *= factor.abs();
            self.l1[c] *= factor.abs();
        }
        self
    }

}

/// Stopping rule of one adaptive axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRule {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Fraction of ∫|f| below which cancellation is not resolved further.
    pub cancellation: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    /// Discretization error of this panel's rule.
    error: [f64; N],
    /// Error carried in from inner integrals (not reducible here).
    inherited: [f64; N],
    l1: [f64; N],
    roundoff: [f64; N],
    evaluations: u64,
    excluded: u64,
    converged: bool,
}

fn abscissae(a: f64, b: f64) -> [f64; 21] {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut x = [center; 21];
    for j in 0..10 {
        x[2 * j] = center - half * XGK[j];
        x[2 * j + 1] = center + half * XGK[j];
    }
    x
}

fn rule<const N: usize>(a: f64, b: f64, f: &[Sample<N>]) -> Panel<N> {
    let half = 0.5 * (b - a);
    let abs_half = half.abs();
    let mut panel = Panel {
        a,
        b,
        value: [0.0; N],
        error: [0.0; N],
        inherited: [0.0; N],
        l1: [0.0; N],
        roundoff: [0.0; N],
        evaluations: f.iter().map(|s| s.evaluations).sum(),
        excluded: f.iter().map(|s| s.excluded).sum(),
        converged: f.iter().all(|s| s.converged),
    };
    for c in 0..N {
        let center = f[20].value[c];
        let mut kronrod = WGK[10] * center;
        let mut gauss = 0.0;
        let mut abs = WGK[10] * f[20].l1[c];
        let mut inner = WGK[10] * f[20].error[c];
        for j in 0..10 {
            let (lo, hi) = (f[2 * j].value[c], f[2 * j + 1].value[c]);
            kronrod += WGK[j] * (lo + hi);
            abs += WGK[j] * (f[2 * j].l1[c] + f[2 * j + 1].l1[c]);
            inner += WGK[j] * (f[2 * j].error[c] + f[2 * j + 1].error[c]);
            if j % 2 == 1 {
                gauss += WG[j / 2] * (lo + hi);
            }
        }
        let mean = 0.5 * kronrod;
        let mut asc = WGK[10] * (center - mean).abs();
        for j in 0..10 {
            asc += WGK[j] * ((f[2 * j].value[c] - mean).abs() + (f[2 * j + 1].value[c] - mean).abs());
        }
        let (resabs, resasc) = (abs * abs_half, asc * abs_half);
        let mut err = ((kronrod - gauss) * half).abs();
        if resasc != 0.0 && err != 0.0 {
            err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
        }
        let roundoff = 50.0 * f64::EPSILON * resabs;
        panel.value[c] = kronrod * half;
        panel.error[c] = err.max(roundoff);
        panel.inherited[c] = inner * abs_half;
        panel.l1[c] = resabs;
        panel.roundoff[c] = roundoff;
    }
    panel
}

fn evaluate_panel<const N: usize, F>(f: &F, a: f64, b: f64, parallel: bool) -> Panel<N>
where
    F: Fn(f64) -> Sample<N> + Sync,
{
    let x = abscissae(a, b);
    let values: Vec<Sample<N>> = if parallel {
        x.par_iter().map(|&xi| f(xi)).collect()
    } else {
        x.iter().map(|&xi| f(xi)).collect()
    };
    rule(a, b, &values)
}

/// Adaptive integration of a vector-valued function over a union of
/// disjoint intervals.
///
/// The panel with the largest error relative to its component tolerance is
/// bisected until every component satisfies
/// `err ≤ max(abs_tol, rel_tol · max(|I|, cancellation · ∫|f|))` or is
/// limited by rounding, or until `max_subdivisions` bisections have been
/// spent, in which case the result is flagged as not converged. Only the
/// rule error of this axis drives the refinement; errors reported by the
/// node values (inner integrals) are added to the returned estimate.
pub fn integrate_intervals<const N: usize, F>(
    f: &F,
    intervals: &[(f64, f64)],
    axis: &AxisRule,
    parallel: bool,
) -> Sample<N>
where
    F: Fn(f64) -> Sample<N> + Sync,
{
    integrate_with_floor(f, intervals, axis, &[axis.abs_tol; N], parallel)
}

/// As [`integrate_intervals`], with a per-component absolute tolerance.
fn integrate_with_floor<const N: usize, F>(
    f: &F,
    intervals: &[(f64, f64)],
    axis: &AxisRule,
    floor: &[f64; N],
    parallel: bool,
) -> Sample<N>
where
    F: Fn(f64) -> Sample<N> + Sync,
{
    let mut panels: Vec<Panel<N>> = intervals
        .iter()
        .filter(|(a, b)| b > a)
        .map(|&(a, b)| evaluate_panel(f, a, b, parallel))
        .collect();
    if panels.is_empty() {
        return Sample::zero();
    }
    let mut evaluations: u64 = panels.iter().map(|p| p.evaluations).sum();
    let mut excluded: u64 = panels.iter().map(|p| p.excluded).sum();
    let mut splits = 0;
    let converged = loop {
        let mut total = [0.0; N];
        let mut error = [0.0; N];
        let mut l1 = [0.0; N];
        let mut roundoff = [0.0; N];
        for p in &panels {
            for c in 0..N {
                total[c] += p.value[c];
                error[c] += p.error[c];
                l1[c] += p.l1[c];
                roundoff[c] += p.roundoff[c];
            }
        }
        let tol: [f64; N] = std::array::from_fn(|c| {
            let scale = total[c].abs().max(axis.cancellation * l1[c]);
            floor[c].max(axis.rel_tol * scale).max(2.0 * roundoff[c])
        });
        if (0..N).all(|c| error[c] <= tol[c]) {
            break true;
        }
        if splits >= axis.max_subdivisions {
            break false;
        }
        // worst panel relative to the component tolerances; ties go to the
        // earliest panel so the subdivision tree is deterministic
        let mut worst = 0;
        let mut worst_ratio = -1.0;
        for (i, p) in panels.iter().enumerate() {
            let ratio = (0..N)
                .filter(|&c| tol[c] > 0.0)
                .map(|c| p.error[c] / tol[c])
                .fold(0.0, f64::max);
            if ratio > worst_ratio {
                worst = i;
                worst_ratio = ratio;
            }
        }
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            break false;
        }
        let left = evaluate_panel(f, p.a, mid, parallel);
        let right = evaluate_panel(f, mid, p.b, parallel);
        evaluations += left.evaluations + right.evaluations;
        excluded += left.excluded + right.excluded;
        panels[worst] = left;
        panels.insert(worst + 1, right);
        splits += 1;
    };

    let mut out = Sample {
        value: [0.0; N],
        error: [0.0; N],
        l1: [0.0; N],
        evaluations,
        excluded,
        converged,
    };
    for p in &panels {
        for c in 0..N {
            out.value[c] += p.value[c];
            out.error[c] += p.error[c] + p.inherited[c];
            out.l1[c] += p.l1[c];
        }
        out.converged &= p.converged;
    }
    out
}

/// Numerical controls for the force and flux integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationPlan {
    /// Relative tolerance of the zero-point (imaginary-axis) integral.
    pub rel_tol_qvac: f64,
    /// Relative tolerance of the thermal (real-axis) integrals.
    pub rel_tol_thermal: f64,
    pub abs_tol: f64,
    /// Bisection budget per adaptive axis.
    pub max_subdivisions: usize,
    /// Integrate v ≥ 0 only and double (the densities are even in v).
    pub fold_v: bool,
    /// Planck cutoff Λ: frequencies with ħω > Λ k_B T in the emitter's rest
    /// frame are dropped.
    pub planck_cutoff: f64,
    /// Evanescent cutoff: waves with 2a|w| above this are dropped.
    pub decay_cutoff: f64,
    pub cancellation: f64,
    /// Evaluate the outermost axis concurrently.
    pub parallel: bool,
}

impl Default for IntegrationPlan {
    fn default() -> Self {
        IntegrationPlan {
            rel_tol_qvac: 1e-6,
            rel_tol_thermal: 1e-4,
            abs_tol: 0.0,
            max_subdivisions: 200,
            fold_v: true,
            planck_cutoff: 40.0,
            decay_cutoff: 50.0,
            cancellation: 1e-3,
            parallel: true,
        }
    }
}

impl IntegrationPlan {
    /// Overrides both relative tolerances.
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol_qvac = rel_tol;
        self.rel_tol_thermal = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.rel_tol_qvac) || !positive(self.rel_tol_thermal) {
            return Err(Error::Config("relative tolerances must be positive".into()));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::Config("absolute tolerance must be non-negative".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        if !positive(self.planck_cutoff) || !positive(self.decay_cutoff) {
            return Err(Error::Config("cutoffs must be positive".into()));
        }
        if !(self.cancellation >= 0.0 && self.cancellation <= 1.0) {
            return Err(Error::Config("cancellation must lie in [0, 1]".into()));
        }
        Ok(())
    }

    /// Rule for nesting depth `depth` (0 = outermost). Inner axes run at a
    /// tighter tolerance so that their propagated errors stay below the
    /// outer target.
    fn axis(&self, rel_tol: f64, depth: i32) -> AxisRule {
        AxisRule {
            rel_tol: rel_tol * INNER_TIGHTENING.powi(depth),
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            cancellation: self.cancellation,
        }
    }

    /// Outer angular panels; φ = π/2 (u = 0) separates u > 0, where the
    /// anomalous region lies for β > 0, from u < 0.
    fn phi_intervals(&self) -> (Vec<(f64, f64)>, f64) {
        if self.fold_v {
            (vec![(0.0, FRAC_PI_2), (FRAC_PI_2, PI)], 2.0)
        } else {
            let q = FRAC_PI_2;
            (vec![(0.0, q), (q, 2.0 * q), (2.0 * q, 3.0 * q), (3.0 * q, 4.0 * q)], 1.0)
        }
    }
}

/// One integrated channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: u64,
    pub converged: bool,
    /// Sample points dropped because the density could not be evaluated.
    pub excluded: u64,
}

impl ChannelResult {
    fn from_sample<const N: usize>(s: &Sample<N>, c: usize, sign: f64) -> Self {
        ChannelResult {
            value: sign * s.value[c],
            error: s.error[c],
            evaluations: s.evaluations,
            converged: s.converged,
            excluded: s.excluded,
        }
    }
}

/// Frequency window of the thermal integrals.
#[derive(Debug, Clone, Copy)]
struct Window {
    /// Planck cutoff of plate 1 in the lab frame (0 when it is cold or
    /// not involved).
    omega1: f64,
    /// Half-width of plate 2's window in ω′, mapped to the lab frame.
    half2: f64,
    plate2: bool,
    beta: f64,
    s_max: f64,
    s_seams: [f64; 2],
}

impl Window {
    fn new(config: &CavityConfig, plan: &IntegrationPlan, plate1: bool, plate2: bool) -> Option<Self> {
        let gamma = config.gamma();
        let b = config.beta.abs();
        let t1 = if plate1 { config.plate1.temperature } else { 0.0 };
        let t2 = if plate2 { config.plate2.temperature } else { 0.0 };
        if t1 == 0.0 && t2 == 0.0 {
            return None;
        }
        let omega1 = plan.planck_cutoff * t1;
        let c = plan.planck_cutoff * t2 / gamma;
        let decay = 0.5 * plan.decay_cutoff / config.gap;
        // smallest s beyond which every window frequency is evanescent with
        // 2a|w| ≥ decay_cutoff
        let s1 = (omega1 * omega1 + decay * decay).sqrt();
        let s2 = if t2 > 0.0 {
            (b * c + (b * b * c * c + (1.0 - b * b) * (c * c + decay * decay)).sqrt()) / (1.0 - b * b)
        } else {
            0.0
        };
        Some(Window {
            omega1,
            half2: c,
            plate2: t2 > 0.0,
            beta: config.beta,
            s_max: s1.max(s2),
            s_seams: [omega1, if t2 > 0.0 { c * gamma * gamma * (1.0 + b) } else { 0.0 }],
        })
    }

    /// `[ω_lo, ω_hi]` at transverse wavevector component u.
    fn omega_range(&self, u: f64) -> (f64, f64) {
        let mut hi = self.omega1;
        let mut lo = f64::INFINITY;
        if self.plate2 {
            hi = hi.max(self.beta * u + self.half2);
            lo = (self.beta * u - self.half2).max(0.0);
        }
        if self.omega1 > 0.0 {
            lo = 0.0;
        }
        (lo, hi)
    }

    fn s_intervals(&self) -> Vec<(f64, f64)> {
        let mut cuts: Vec<f64> = self
            .s_seams
            .iter()
            .copied()
            .filter(|&x| x > 0.0 && x < self.s_max)
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut edges = vec![0.0];
        edges.extend(cuts);
        edges.push(self.s_max);
        edges.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

const INNER_TIGHTENING: f64 = 0.25;
const PILOT_REL_TOL: f64 = 1e-2;
const PILOT_SUBDIVISIONS: usize = 20;

/// Offset separating the evanescent (θ) and propagating (t) parts of the
/// inner parameter.
const PROPAGATING_OFFSET: f64 = 2.0;

/// Nested real-axis integration of `N` densities evaluated together.
fn integrate_real_axis<const N: usize, D>(
    config: &CavityConfig,
    plan: &IntegrationPlan,
    window: &Window,
    dens: &D,
) -> Sample<N>
where
    D: Fn(&WaveContext, &ReflectionSet) -> Result<[f64; N]> + Sync,
{
    // Pilot pass: a coarse estimate of each component's magnitude sets
    // absolute floors, so that the inner axes do not chase relative accuracy
    // in corners that contribute nothing to the total.
    let pilot_plan = IntegrationPlan {
        rel_tol_thermal: (10.0 * plan.rel_tol_thermal).min(PILOT_REL_TOL),
        max_subdivisions: plan.max_subdivisions.min(PILOT_SUBDIVISIONS),
        ..*plan
    };
    let pilot = real_axis_pass(config, &pilot_plan, window, dens, &[plan.abs_tol; N]);
    let target: [f64; N] = std::array::from_fn(|c| {
        let scale = pilot.value[c].abs().max(plan.cancellation * pilot.l1[c]);
        plan.abs_tol.max(0.5 * plan.rel_tol_thermal * scale)
    });
    let mut out = real_axis_pass(config, plan, window, dens, &target);
    out.evaluations += pilot.evaluations;
    out
}

fn real_axis_pass<const N: usize, D>(
    config: &CavityConfig,
    plan: &IntegrationPlan,
    window: &Window,
    dens: &D,
    target: &[f64; N],
) -> Sample<N>
where
    D: Fn(&WaveContext, &ReflectionSet) -> Result<[f64; N]> + Sync,
{
    let outer = plan.axis(plan.rel_tol_thermal, 0);
    let mid_axis = plan.axis(plan.rel_tol_thermal, 1);
    let axis = plan.axis(plan.rel_tol_thermal, 2);
    let (phis, fold) = plan.phi_intervals();
    // split the absolute budget evenly over the measure of each outer axis
    let phi_measure = fold * PI;
    let s_measure = 0.5 * window.s_max * window.s_max;
    let outer_floor = *target;
    let mid_floor = target.map(|t| INNER_TIGHTENING * t / phi_measure);
    let floor = mid_floor.map(|t| INNER_TIGHTENING * t / s_measure);
    let gap = config.gap;
    let beta = config.beta;
    let (mat1, mat2) = (&config.plate1.material, &config.plate2.material);

    let point = |omega: f64, u: f64, v: f64| -> Option<[f64; N]> {
        let ctx = WaveContext::new(omega, u, v, beta).ok()?;
        let refl = ReflectionSet::compute(gap, &ctx, mat1, mat2).ok()?;
        let value = dens(&ctx, &refl).ok()?;
        value.iter().all(|x| x.is_finite()).then_some(value)
    };

    let inner = |s: f64, phi: f64| -> Sample<N> {
        let (u, v) = (s * phi.cos(), s * phi.sin());
        let (lo, hi) = window.omega_range(u);
        if !(hi > lo) {
            return Sample::zero();
        }
        let mut intervals = Vec::with_capacity(3);
        // evanescent ω = s sin θ
        if lo < s {
            let th_lo = (lo / s).min(1.0).asin();
            let th_hi = (hi / s).min(1.0).asin();
            let seam = (beta * phi.cos()).asin();
            if seam > th_lo && seam < th_hi {
                intervals.push((th_lo, seam));
                intervals.push((seam, th_hi));
            } else {
                intervals.push((th_lo, th_hi));
            }
        }
        // propagating ω = √(s² + t²)
        if hi > s {
            let t_lo = if lo > s { (lo * lo - s * s).sqrt() } else { 0.0 };
            let t_hi = (hi * hi - s * s).sqrt();
            intervals.push((PROPAGATING_OFFSET + t_lo, PROPAGATING_OFFSET + t_hi));
        }
        let f = |x: f64| -> Sample<N> {
            let (omega, jac) = if x < PROPAGATING_OFFSET {
                (s * x.sin(), s * x.cos())
            } else {
                let t = x - PROPAGATING_OFFSET;
                let omega = (s * s + t * t).sqrt();
                (omega, t / omega)
            };
            match point(omega, u, v) {
                Some(val) => Sample::point(val.map(|y| y * jac)),
                None => Sample::excluded(),
            }
        };
        integrate_with_floor(&f, &intervals, &axis, &floor, false)
    };

    let middle = |phi: f64| -> Sample<N> {
        let f = |s: f64| inner(s, phi).scaled(s);
        integrate_with_floor(&f, &window.s_intervals(), &mid_axis, &mid_floor, false)
    };

    let outer_floor = outer_floor.map(|t| t / fold);
    integrate_with_floor(&middle, &phis, &outer, &outer_floor, plan.parallel).scaled(fold)
}

/// Zero-point part of the normal stress, integrated along imaginary
/// frequencies in spherical coordinates `κ = ρ cos θ`, `s = ρ sin θ`.
/// Returned in the stress convention of the densities.
fn integrate_qvac(config: &CavityConfig, plan: &IntegrationPlan) -> Sample<1> {
    let outer = plan.axis(plan.rel_tol_qvac, 0);
    let mid_axis = plan.axis(plan.rel_tol_qvac, 1);
    let axis = plan.axis(plan.rel_tol_qvac, 2);
    let (mat1, mat2) = (&config.plate1.material, &config.plate2.material);
    if mat1.is_vacuum() || mat2.is_vacuum() {
        return Sample::zero();
    }
    let gap = config.gap;
    let beta = config.beta;
    let rho_max = plan.decay_cutoff / gap;

    let middle = |phi: f64| -> Sample<1> {
        let (c, sn) = (phi.cos(), phi.sin());
        let theta_f = |theta: f64| -> Sample<1> {
            let (kt, st) = (theta.cos(), theta.sin());
            let rho_f = |rho: f64| -> Sample<1> {
                let (kappa, s) = (rho * kt, rho * st);
                match density_qvac_imag(kappa, s * c, s * sn, gap, beta, mat1, mat2) {
                    Ok(d) if d.is_finite() => Sample::point([d * rho * rho * st]),
                    _ => Sample::excluded(),
                }
            };
            integrate_intervals(&rho_f, &[(0.0, 1.0 / gap), (1.0 / gap, rho_max)], &axis, false)
        };
        integrate_intervals(&theta_f, &[(0.0, FRAC_PI_2)], &mid_axis, false)
    };
    let (phis, fold) = plan.phi_intervals();
    integrate_intervals(&middle, &phis, &outer, plan.parallel).scaled(fold)
}

fn sign_of(channel: Channel) -> f64 {
    if channel.is_normal() {
        -1.0
    } else {
        1.0
    }
}

/// Integrates one channel over its full domain.
///
/// Real-frequency channels return their thermal (Planck) part only: the
/// zero-point part of the normal stress is obtained on the imaginary axis
/// ([`Channel::QVacImag`]), and the zero-point parts of the lateral stress
/// and of the energy flux cancel between the plates.
pub fn integrate_channel(channel: Channel, config: &CavityConfig, plan: &IntegrationPlan) -> Result<ChannelResult> {
    config.validate()?;
    plan.validate()?;
    let sign = sign_of(channel);
    if channel == Channel::QVacImag {
        return Ok(ChannelResult::from_sample(&integrate_qvac(config, plan), 0, sign));
    }
    let Some(window) = Window::new(config, plan, channel.uses_plate1(), channel.uses_plate2()) else {
        return Ok(ChannelResult::from_sample(&Sample::<1>::zero(), 0, sign));
    };
    let (t1, t2) = (config.plate1.temperature, config.plate2.temperature);
    let gap = config.gap;
    let dens = |ctx: &WaveContext, refl: &ReflectionSet| -> Result<[f64; 1]> {
        Ok([density(channel, gap, ctx, refl, t1, t2)?.thermal()])
    };
    let s = integrate_real_axis(config, plan, &window, &dens);
    Ok(ChannelResult::from_sample(&s, 0, sign))
}

/// Value split by origin: zero-point fluctuations and the thermal radiation
/// of each plate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Parts {
    pub qvac: f64,
    pub thermal1: f64,
    pub thermal2: f64,
}

impl Parts {
    pub fn sum(&self) -> f64 {
        self.qvac + self.thermal1 + self.thermal2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Component {
    pub total: f64,
    pub error: f64,
    pub parts: Parts,
    pub part_errors: Parts,
}

/// Normal pressure, lateral stress and energy flux on plate 1, in units of
/// ħc/a⁴ (stresses) and ħc²/a⁴ (flux).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressResult {
    /// Normal pressure on plate 1; negative values are attractive.
    pub sigma_xx: Component,
    /// Lateral stress on plate 1 along +y (the direction of motion of
    /// plate 2 for β > 0). Its total is the combined thermal integral; the
    /// per-plate parts are integrated alongside it.
    pub sigma_xy: Component,
    /// Thermal energy flux emitted by plate 1 towards plate 2.
    pub poynting_1x: f64,
    pub poynting_1x_err: f64,
    pub evaluations: u64,
    pub converged: bool,
    pub excluded: u64,
}

/// Computes the normal pressure, the lateral stress and the energy flux.
pub fn integrate_force(config: &CavityConfig, plan: &IntegrationPlan) -> Result<StressResult> {
    config.validate()?;
    plan.validate()?;
    let qvac = integrate_qvac(config, plan);
    let (t1, t2) = (config.plate1.temperature, config.plate2.temperature);
    let gap = config.gap;

    let thermal = match Window::new(config, plan, true, true) {
        None => Sample::<6>::zero(),
        Some(window) => {
            let dens = |ctx: &WaveContext, refl: &ReflectionSet| -> Result<[f64; 6]> {
                let th = |c: Channel| Ok::<f64, Error>(density(c, gap, ctx, refl, t1, t2)?.thermal());
                Ok([
                    th(Channel::Sigma1xx)?,
                    th(Channel::Sigma2xx)?,
                    th(Channel::Sigma1xy)?,
                    th(Channel::Sigma2xy)?,
                    th(Channel::LateralCombined)?,
                    th(Channel::Poynting1x)?,
                ])
            };
            integrate_real_axis(config, plan, &window, &dens)
        }
    };

    let parts_xx = Parts {
        qvac: -qvac.value[0],
        thermal1: -thermal.value[0],
        thermal2: -thermal.value[1],
    };
    let errors_xx = Parts {
        qvac: qvac.error[0],
        thermal1: thermal.error[0],
        thermal2: thermal.error[1],
    };
    let sigma_xx = Component {
        total: parts_xx.sum(),
        error: errors_xx.sum(),
        parts: parts_xx,
        part_errors: errors_xx,
    };
    let sigma_xy = Component {
        total: thermal.value[4],
        error: thermal.error[4],
        parts: Parts {
            qvac: 0.0,
            thermal1: thermal.value[2],
            thermal2: thermal.value[3],
        },
        part_errors: Parts {
            qvac: 0.0,
            thermal1: thermal.error[2],
            thermal2: thermal.error[3],
        },
    };
    Ok(StressResult {
        sigma_xx,
        sigma_xy,
        poynting_1x: thermal.value[5],
        poynting_1x_err: thermal.error[5],
        evaluations: qvac.evaluations + thermal.evaluations,
        converged: qvac.converged && thermal.converged,
        excluded: qvac.excluded + thermal.excluded,
    })
}

/// Thermal energy flux S₁ₓ radiated by plate 1 into the gap.
pub fn integrate_heat(config: &CavityConfig, plan: &IntegrationPlan) -> Result<ChannelResult> {
    integrate_channel(Channel::Poynting1x, config, plan)
}
