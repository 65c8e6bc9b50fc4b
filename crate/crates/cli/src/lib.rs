//! Command-line front end: reads a TOML run configuration in SI units,
//! evaluates it with `casimir-core` and writes CSV or JSON tables.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod units;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use casimir_core::validation::SuiteOptions;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::commands::Outcome;
use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Forces and heat flux between moving plates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Run configuration (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Relative tolerance for every integral, overriding the config.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,

    /// Absolute tolerance in reduced units, overriding the config.
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,

    /// Worker threads (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output file (default: standard output).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Normal and lateral stress on plate 1.
    Force,
    /// Energy flux radiated by plate 1.
    Heat,
    /// Integrand of one channel on a grid.
    Spectrum,
    /// Stress and flux over the configured sweep.
    Sweep,
    /// Run the algebraic identity suite.
    Validate {
        #[arg(long, default_value_t = SuiteOptions::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = SuiteOptions::default().seed)]
        seed: u64,
        /// Flip a sign in one identity, to check that failures are detected.
        #[arg(long, hide = true)]
        perturb: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Force => "force",
            Command::Heat => "heat",
            Command::Spectrum => "spectrum",
            Command::Sweep => "sweep",
            Command::Validate { .. } => "validate",
        }
    }
}

/// Exit status for a completed run whose results are not all trustworthy.
pub const EXIT_INCOMPLETE: u8 = 2;

/// Loads the configuration and applies command-line overrides, so that the
/// recorded inputs describe exactly what was run.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Invalid(format!("{} needs --config PATH", cli.command.name())))?;
    let mut config = RunConfig::load(path)?;
    if let Some(t) = cli.rel_tol {
        config.plan.rel_tol = Some(t);
        config.plan.rel_tol_qvac = None;
        config.plan.rel_tol_thermal = None;
    }
    if let Some(t) = cli.abs_tol {
        config.plan.abs_tol = Some(t);
    }
    if let Some(f) = cli.format {
        config.output.format = f;
    }
    if let Some(p) = &cli.out {
        config.output.path = Some(p.clone());
    }
    config.validate()?;
    Ok(config)
}

fn meta(command: &str, outcome: &Outcome, config: Option<&RunConfig>) -> Value {
    let mut meta = json!({
        "program": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "ok": outcome.ok,
        "units": {
            "gap_m": "m",
            "T1_K": "K",
            "T2_K": "K",
            "sigma": "Pa, on plate 1; sigma_xx < 0 is attractive, sigma_xy along +y",
            "S1x": "W/m^2, from plate 1 into the gap",
            "spectrum": "reduced: omega in c/a, u and v in 1/a, densities in hbar c / a^4 per unit volume of (omega, u, v); value is the integrated (thermal) part, quantum the pointwise zero-point part",
        },
    });
    if let Some(c) = config {
        let p = c.plan();
        meta["plan"] = json!({
            "rel_tol_qvac": p.rel_tol_qvac,
            "rel_tol_thermal": p.rel_tol_thermal,
            "abs_tol": p.abs_tol,
            "max_subdivisions": p.max_subdivisions,
            "fold_v": p.fold_v,
            "planck_cutoff": p.planck_cutoff,
            "decay_cutoff": p.decay_cutoff,
            "cancellation": p.cancellation,
        });
    }
    meta
}

fn write_outcome(
    outcome: &Outcome,
    format: Format,
    path: Option<&PathBuf>,
    meta: Value,
    inputs: Vec<Value>,
) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p).map_err(|e| CliError::Io { path: p.clone(), source: e })?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match format {
        Format::Csv => outcome.table.write_csv(&mut sink)?,
        Format::Json => outcome.table.write_json(&mut sink, meta, inputs)?,
    }
    sink.flush()?;
    Ok(())
}

/// Runs a parsed command line; returns whether every result is trustworthy.
pub fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let name = cli.command.name();
    if let Command::Validate { samples, seed, perturb } = cli.command {
        let options = SuiteOptions {
            samples,
            seed,
            perturb_long_identity: perturb,
        };
        let outcome = commands::validate(&options);
        for row in &outcome.table.rows {
            let pass = matches!(row[5], output::Cell::Flag(true));
            eprintln!(
                "{} {} max deviation {}",
                if pass { "PASS" } else { "FAIL" },
                row[0].to_csv_field(),
                row[3].to_csv_field()
            );
        }
        let mut meta = meta(name, &outcome, None);
        meta["samples"] = json!(samples);
        meta["seed"] = json!(seed);
        write_outcome(&outcome, cli.format.unwrap_or_default(), cli.out.as_ref(), meta, vec![])?;
        return Ok(outcome.ok);
    }

    let config = resolve_config(cli)?;
    let outcome = match cli.command {
        Command::Force => commands::force(&config)?,
        Command::Heat => commands::heat(&config)?,
        Command::Spectrum => commands::spectrum(&config)?,
        Command::Sweep => commands::sweep(&config)?,
        Command::Validate { .. } => unreachable!(),
    };
    let meta = meta(name, &outcome, Some(&config));
    let inputs = vec![serde_json::to_value(&config)?];
    write_outcome(
        &outcome,
        config.output.format,
        config.output.path.as_ref(),
        meta,
        inputs,
    )?;
    if !outcome.ok {
        eprintln!("warning: some results did not converge; see the `converged` column");
    }
    Ok(outcome.ok)
}
