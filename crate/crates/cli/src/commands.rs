//! The subcommands, each producing a [`Table`] in SI units.

use casimir_core::kinematics::WaveContext;
use casimir_core::reflection::ReflectionSet;
use casimir_core::spectral::{density, density_qvac_imag};
use casimir_core::validation::{run_identity_suite, SuiteOptions};
use casimir_core::{integrate_force, integrate_heat, CavityConfig, Channel, StressResult};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Table};

/// A finished command: the table, and whether every row is trustworthy
/// (converged integrals, passing checks).
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub ok: bool,
}

const POINT_COLUMNS: [&str; 4] = ["gap_m", "beta", "T1_K", "T2_K"];

const FORCE_COLUMNS: [&str; 9] = [
    "sigma_xx_Pa",
    "sigma_xx_err_Pa",
    "sigma_xx_qvac_Pa",
    "sigma_xx_thermal1_Pa",
    "sigma_xx_thermal2_Pa",
    "sigma_xy_Pa",
    "sigma_xy_err_Pa",
    "sigma_xy_thermal1_Pa",
    "sigma_xy_thermal2_Pa",
];

const HEAT_COLUMNS: [&str; 2] = ["S1x_W_m2", "S1x_err_W_m2"];

const STATUS_COLUMNS: [&str; 4] = ["evaluations", "excluded", "converged", "status"];

fn columns(groups: &[&[&'static str]]) -> Vec<&'static str> {
    groups.iter().flat_map(|g| g.iter().copied()).collect()
}

fn point_cells(c: &RunConfig) -> Vec<Cell> {
    vec![
        c.gap.into(),
        c.beta.into(),
        c.plate1.temperature.into(),
        c.plate2.temperature.into(),
    ]
}

fn status_cells(evaluations: u64, excluded: u64, converged: bool) -> Vec<Cell> {
    let status = if converged { "ok" } else { "not converged" };
    vec![evaluations.into(), excluded.into(), converged.into(), status.into()]
}

fn failed_cells(width: usize, err: &CliError) -> Vec<Cell> {
    let mut cells = vec![Cell::Real(f64::NAN); width];
    cells.extend([0u64.into(), 0u64.into(), false.into(), err.to_string().into()]);
    cells
}

fn stress_cells(c: &RunConfig, r: &StressResult) -> Vec<Cell> {
    let u = c.units();
    let (xx, xy) = (&r.sigma_xx, &r.sigma_xy);
    [
        xx.total,
        xx.error,
        xx.parts.qvac,
        xx.parts.thermal1,
        xx.parts.thermal2,
        xy.total,
        xy.error,
        xy.parts.thermal1,
        xy.parts.thermal2,
    ]
    .into_iter()
    .map(|x| u.stress(x).into())
    .collect()
}

fn cavity_and_plan(c: &RunConfig) -> Result<(CavityConfig, casimir_core::IntegrationPlan), CliError> {
    Ok((c.cavity()?, c.plan()))
}

/// Stress on plate 1, one row per sweep point.
pub fn force(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut table = Table::new(columns(&[&POINT_COLUMNS, &FORCE_COLUMNS, &STATUS_COLUMNS]));
    let mut ok = true;
    for point in config.points()? {
        let mut row = point_cells(&point);
        match cavity_and_plan(&point).and_then(|(c, p)| Ok(integrate_force(&c, &p)?)) {
            Ok(r) => {
                ok &= r.converged;
                row.extend(stress_cells(&point, &r));
                row.extend(status_cells(r.evaluations, r.excluded, r.converged));
            }
            Err(e) => {
                ok = false;
                row.extend(failed_cells(FORCE_COLUMNS.len(), &e));
            }
        }
        table.push(row);
    }
    Ok(Outcome { table, ok })
}

/// Energy flux radiated by plate 1 into the gap.
pub fn heat(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut table = Table::new(columns(&[&POINT_COLUMNS, &HEAT_COLUMNS, &STATUS_COLUMNS]));
    let mut ok = true;
    for point in config.points()? {
        let mut row = point_cells(&point);
        match cavity_and_plan(&point).and_then(|(c, p)| Ok(integrate_heat(&c, &p)?)) {
            Ok(r) => {
                ok &= r.converged;
                let u = point.units();
                row.extend([u.flux(r.value).into(), u.flux(r.error).into()]);
                row.extend(status_cells(r.evaluations, r.excluded, r.converged));
            }
            Err(e) => {
                ok = false;
                row.extend(failed_cells(HEAT_COLUMNS.len(), &e));
            }
        }
        table.push(row);
    }
    Ok(Outcome { table, ok })
}

/// Stress and flux over the configured sweep.
pub fn sweep(config: &RunConfig) -> Result<Outcome, CliError> {
    if config.sweep.is_none() {
        return Err(CliError::Invalid("the sweep command needs a [sweep] section".into()));
    }
    let mut table = Table::new(columns(&[
        &POINT_COLUMNS,
        &FORCE_COLUMNS,
        &HEAT_COLUMNS,
        &STATUS_COLUMNS,
    ]));
    let mut ok = true;
    for point in config.points()? {
        let mut row = point_cells(&point);
        match cavity_and_plan(&point).and_then(|(c, p)| Ok(integrate_force(&c, &p)?)) {
            Ok(r) => {
                ok &= r.converged;
                let u = point.units();
                row.extend(stress_cells(&point, &r));
                row.extend([u.flux(r.poynting_1x).into(), u.flux(r.poynting_1x_err).into()]);
                row.extend(status_cells(r.evaluations, r.excluded, r.converged));
            }
            Err(e) => {
                ok = false;
                row.extend(failed_cells(FORCE_COLUMNS.len() + HEAT_COLUMNS.len(), &e));
            }
        }
        table.push(row);
    }
    Ok(Outcome { table, ok })
}

/// Integrand of one channel on a grid, in reduced units. Points where the
/// density cannot be evaluated are reported as NaN rows with the reason.
///
/// `value` is what the integrator sees: the thermal part for real-axis
/// channels and the rotated zero-point integrand for `qvac_imag`.
pub fn spectrum(config: &RunConfig) -> Result<Outcome, CliError> {
    let spec = config
        .spectrum
        .as_ref()
        .ok_or_else(|| CliError::Invalid("the spectrum command needs a [spectrum] section".into()))?;
    let channel = spec.channel()?;
    let cavity = config.cavity()?;
    let (omegas, us, vs) = (spec.omega.values()?, spec.u.values()?, spec.v.values()?);
    let mut table = Table::new(vec!["omega", "u", "v", "region", "value", "quantum", "thermal", "status"]);
    for &omega in &omegas {
        for &u in &us {
            for &v in &vs {
                let mut row: Vec<Cell> = vec![omega.into(), u.into(), v.into()];
                match evaluate_density(channel, &cavity, omega, u, v) {
                    Ok((region, value, quantum, thermal)) => {
                        row.extend([region.into(), value.into(), quantum.into(), thermal.into(), "ok".into()])
                    }
                    Err(e) => {
                        let region = WaveContext::new(omega, u, v, cavity.beta)
                            .map_or("", |c| c.region.name());
                        let region = if channel == Channel::QVacImag { "imaginary" } else { region };
                        row.extend([region.into(), f64::NAN.into(), f64::NAN.into(), f64::NAN.into()]);
                        row.push(e.to_string().into());
                    }
                }
                table.push(row);
            }
        }
    }
    Ok(Outcome { table, ok: true })
}

fn evaluate_density(
    channel: Channel,
    cavity: &CavityConfig,
    omega: f64,
    u: f64,
    v: f64,
) -> casimir_core::Result<(&'static str, f64, f64, f64)> {
    let (m1, m2) = (&cavity.plate1.material, &cavity.plate2.material);
    if channel == Channel::QVacImag {
        let value = density_qvac_imag(omega, u, v, cavity.gap, cavity.beta, m1, m2)?;
        return Ok(("imaginary", value, value, 0.0));
    }
    let ctx = WaveContext::new(omega, u, v, cavity.beta)?;
    let refl = ReflectionSet::compute(cavity.gap, &ctx, m1, m2)?;
    let d = density(
        channel,
        cavity.gap,
        &ctx,
        &refl,
        cavity.plate1.temperature,
        cavity.plate2.temperature,
    )?;
    // the zero-point stress is integrated on the imaginary axis, so the
    // real-axis integrand proper is the thermal part; the pointwise zero-point
    // part (including the free-space term) is reported alongside
    let (quantum, thermal) = d.parts.map_or((f64::NAN, d.value), |p| (p.quantum, p.thermal));
    Ok((d.region.name(), thermal, quantum, thermal))
}

/// The algebraic identity suite.
pub fn validate(options: &SuiteOptions) -> Outcome {
    let report = run_identity_suite(options);
    let mut table = Table::new(vec!["name", "description", "samples", "max_deviation", "tolerance", "passed"]);
    for c in &report.checks {
        table.push(vec![
            c.name.into(),
            c.description.into(),
            (c.samples as u64).into(),
            c.max_deviation.into(),
            c.tolerance.into(),
            c.passed().into(),
        ]);
    }
    Outcome {
        table,
        ok: report.passed(),
    }
}
