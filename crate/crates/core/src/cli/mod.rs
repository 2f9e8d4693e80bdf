//! `vdw` command-line front end.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 numerical
//! failure, 3 verification failure.

pub mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::error::Error as NumericalError;
use crate::kernel::matsubara_frequency;
use crate::materials::StaticPermittivity;
use crate::pressure::{pressure_in_layer, PressureResult};
use crate::verify::{Suite, VerificationReport, VerifyOptions, DEFAULT_SEED};

pub use config::{parse_config, parse_config_str, ConfigError, RunConfig, Spacing, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "vdw",
    version,
    about = "Van der Waals pressure in planar multilayers"
)]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pressure in one layer of the configured stack.
    Pressure {
        #[arg(long)]
        config: PathBuf,
        /// 1-based layer index.
        #[arg(long, default_value_t = 1)]
        layer: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Pressure against thickness of the `[sweep]` layer.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Weighted per-frequency contributions to the pressure.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        layer: usize,
        /// Sum exactly `n = 0..=n_max` instead of stopping adaptively.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Permittivity and permeability of a material on the imaginary axis.
    Material {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        name: String,
        /// Log-spaced frequencies after the `ξ = 0` row.
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        /// all, fd, gap, dlp, hamaker, idealmetal, reduction, divergence, baseline
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Randomized cases per suite.
        #[arg(long, default_value_t = 4)]
        count: usize,
        /// Override every tolerance; 0 forces failure.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Write the reports as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("numerical failure: {0}")]
    Numerical(#[from] NumericalError),
    #[error("verification failed:\n{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Output { .. } => 1,
            CliError::Numerical(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

/// Runs `args`, printing to stdout/stderr, and returns the exit code.
pub fn run(args: &Args) -> i32 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match execute(args, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs `args`, writing normal output to `out`.
pub fn execute(args: &Args, out: &mut dyn Write) -> Result<(), CliError> {
    match &args.command {
        Command::Pressure { config, layer, csv } => {
            cmd_pressure(config, *layer, csv.as_deref(), out)
        }
        Command::Sweep { config, csv } => cmd_sweep(config, csv.as_deref(), out),
        Command::Spectrum {
            config,
            layer,
            n_max,
            csv,
        } => cmd_spectrum(config, *layer, *n_max, csv.as_deref(), out),
        Command::Material {
            config,
            name,
            points,
            csv,
        } => cmd_material(config, name, *points, csv.as_deref(), out),
        Command::Verify {
            suite,
            seed,
            count,
            tolerance,
            report,
        } => cmd_verify(
            suite,
            VerifyOptions {
                seed: *seed,
                count: *count,
                tolerance_override: *tolerance,
            },
            report.as_deref(),
            out,
        ),
    }
}

fn io_err(path: &str) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Output {
        path: path.to_string(),
        source,
    }
}

/// Writes `body` to `path`, or to `out` when no path is given.
fn emit(path: Option<&Path>, out: &mut dyn Write, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let name = p.display().to_string();
            let file = File::create(p).map_err(io_err(&name))?;
            let mut w = BufWriter::new(file);
            w.write_all(body.as_bytes()).map_err(io_err(&name))?;
            w.flush().map_err(io_err(&name))
        }
        None => out.write_all(body.as_bytes()).map_err(io_err("<stdout>")),
    }
}

fn check_layer(cfg: &RunConfig, layer: usize) -> Result<(), CliError> {
    let n = cfg.stack.layers.len();
    if layer == 0 || layer > n {
        return Err(CliError::Usage(format!(
            "--layer must lie in 1..={n}, got {layer}"
        )));
    }
    Ok(())
}

/// Pressure in layer `layer` of the configured stack.
pub fn layer_pressure(cfg: &RunConfig, layer: usize) -> Result<PressureResult, CliError> {
    check_layer(cfg, layer)?;
    Ok(pressure_in_layer(
        &cfg.stack,
        layer,
        &cfg.matsubara,
        &cfg.quadrature,
    )?)
}

fn cmd_pressure(
    config: &Path,
    layer: usize,
    csv: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let cfg = parse_config(config)?;
    let p = layer_pressure(&cfg, layer)?;
    let text = format!(
        "layer = {layer}\nthickness_m = {:.16e}\npressure_Pa = {:.16e}\nn_terms = {}\ntruncation_error_Pa = {:.16e}\nquadrature_error_Pa = {:.16e}\n",
        cfg.stack.layers[layer - 1].thickness,
        p.value,
        p.n_used,
        p.truncation_error,
        p.quadrature_error
    );
    emit(None, out, &text)?;
    if let Some(path) = csv {
        let body = format!(
            "layer,z_m_m,pressure_Pa,n_terms,truncation_error_Pa,quadrature_error_Pa\n{layer},{:.16e},{:.16e},{},{:.16e},{:.16e}\n",
            cfg.stack.layers[layer - 1].thickness,
            p.value,
            p.n_used,
            p.truncation_error,
            p.quadrature_error
        );
        emit(Some(path), out, &body)?;
    }
    Ok(())
}

pub const SWEEP_HEADER: &str = "z_m_m,pressure_Pa,n_terms,truncation_error_Pa,quadrature_error_Pa";

/// CSV body of a thickness sweep. Points are computed in parallel and
/// written in grid order.
pub fn sweep_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Usage("configuration has no [sweep] section".into()))?;
    let rows: Vec<String> = sweep
        .thicknesses()
        .into_par_iter()
        .map(|z| {
            let mut stack = cfg.stack.clone();
            stack.layers[sweep.layer - 1].thickness = z;
            pressure_in_layer(&stack, sweep.layer, &cfg.matsubara, &cfg.quadrature).map(|p| {
                format!(
                    "{z:.16e},{:.16e},{},{:.16e},{:.16e}\n",
                    p.value, p.n_used, p.truncation_error, p.quadrature_error
                )
            })
        })
        .collect::<Result<_, _>>()?;
    let mut body = String::from(SWEEP_HEADER);
    body.push('\n');
    for r in rows {
        body.push_str(&r);
    }
    Ok(body)
}

fn cmd_sweep(config: &Path, csv: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = parse_config(config)?;
    let body = sweep_csv(&cfg)?;
    emit(csv, out, &body)
}

pub const SPECTRUM_HEADER: &str = "n,xi_rad_per_s,contribution_Pa";

pub fn spectrum_csv(
    cfg: &RunConfig,
    layer: usize,
    n_max: Option<usize>,
) -> Result<String, CliError> {
    check_layer(cfg, layer)?;
    let mats = match n_max {
        Some(n) => cfg.matsubara.with_fixed_terms(n + 1),
        None => cfg.matsubara,
    };
    let p = pressure_in_layer(&cfg.stack, layer, &mats, &cfg.quadrature)?;
    let mut body = String::from(SPECTRUM_HEADER);
    body.push('\n');
    for t in &p.per_n {
        body.push_str(&format!("{},{:.16e},{:.16e}\n", t.n, t.xi, t.contribution));
    }
    Ok(body)
}

fn cmd_spectrum(
    config: &Path,
    layer: usize,
    n_max: Option<usize>,
    csv: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let cfg = parse_config(config)?;
    let body = spectrum_csv(&cfg, layer, n_max)?;
    emit(csv, out, &body)
}

pub const MATERIAL_HEADER: &str = "xi_rad_per_s,epsilon,mu";

/// `ξ = 0` followed by `points` log-spaced frequencies from the first
/// Matsubara frequency to `1e19` rad/s.
pub fn material_csv(cfg: &RunConfig, name: &str, points: usize) -> Result<String, CliError> {
    let m = cfg
        .material(name)
        .ok_or_else(|| CliError::Usage(format!("unknown material `{name}`")))?;
    let mut body = String::from(MATERIAL_HEADER);
    body.push('\n');
    let eps0 = match m.static_permittivity() {
        StaticPermittivity::Finite(e) => format!("{e:.16e}"),
        StaticPermittivity::Divergent { .. } => "inf".to_string(),
    };
    body.push_str(&format!(
        "{:.16e},{eps0},{:.16e}\n",
        0.0,
        m.eval_permeability(0.0)
    ));
    let lo = matsubara_frequency(1, cfg.temperature).ln();
    let hi = 1e19f64.ln();
    for i in 0..points {
        let f = if points == 1 {
            0.0
        } else {
            i as f64 / (points - 1) as f64
        };
        let xi = (lo + f * (hi - lo)).exp();
        let eps = m.eval_permittivity(xi)?;
        body.push_str(&format!(
            "{xi:.16e},{eps:.16e},{:.16e}\n",
            m.eval_permeability(xi)
        ));
    }
    Ok(body)
}

fn cmd_material(
    config: &Path,
    name: &str,
    points: usize,
    csv: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let cfg = parse_config(config)?;
    let body = material_csv(&cfg, name, points)?;
    emit(csv, out, &body)
}

pub fn run_verification(
    suite: &str,
    options: &VerifyOptions,
) -> Result<Vec<VerificationReport>, CliError> {
    let suites = Suite::parse_selection(suite).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(t) = options.tolerance_override {
        if t.is_nan() || t < 0.0 {
            return Err(CliError::Usage(format!(
                "--tolerance must be >= 0, got {t}"
            )));
        }
    }
    suites
        .into_iter()
        .map(|s| s.run(options).map_err(CliError::from))
        .collect()
}

fn cmd_verify(
    suite: &str,
    options: VerifyOptions,
    report: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let reports = run_verification(suite, &options)?;
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_string());
    }
    emit(None, out, &text)?;
    if let Some(path) = report {
        let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
        emit(Some(path), out, &(json + "\n"))?;
    }
    let failing: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.failures()
                .map(move |c| format!("  {}: {}", r.suite, c.description))
        })
        .collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failing.join("\n")))
    }
}
