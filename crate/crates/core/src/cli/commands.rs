use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use super::config::{RunConfig, Spacing, TemperatureMode, ThermalRange};
use crate::casimir::casimir_energy_report;
use crate::error::{Error, Result};
use crate::metric::MetricComponents;
use crate::oracle::{self, fixtures, FixtureRecord};
use crate::system::PlateSystem;
use crate::thermal::{thermodynamics, SeriesControl, ThermalPoint, ThermoReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INVALID_METRIC: u8 = 3;
pub const EXIT_FLOOR_OMISSION: u8 = 4;

pub const MAX_TERMS_ENV: &str = "CASIMIR_MAX_TERMS";

pub const CSV_HEADER: &str = "one_over_beta_tilde,F_scaled,U_scaled,S_scaled,Cv_scaled,F_total,U,S,Cv";

const UNITS_NOTE: &str =
    "units: natural (hbar = c = k_B = 1); hbar*c = 197.3269804 MeV fm, k_B = 8.617333262e-5 eV/K (not applied)";

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Casimir energy between plates in stationary spacetimes")]
pub struct Cli {
    /// Run configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the metric signature over its domain.
    Validate,
    /// Zero-temperature energies.
    Energy(Observer),
    /// Thermodynamics at a single temperature.
    Thermal(Observer),
    /// Thermodynamics over a temperature range, written as CSV.
    Sweep(SweepArgs),
    /// Reference computations written as fixture records.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Args)]
pub struct Observer {
    /// Observer position, overriding the config's observer_z.
    #[arg(long, allow_hyphen_values = true)]
    pub observer_z: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub observer: Observer,
    /// CSV destination, overriding the config; stdout when neither is set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of sweep points, overriding the config.
    #[arg(long)]
    pub points: Option<usize>,
    /// Logarithmic spacing of sweep points.
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Exponential-cutoff mode sum extrapolated to zero cutoff (flat space).
    Cutoff {
        #[arg(long = "L")]
        separation: f64,
        /// Comma-separated decreasing cutoffs; default L·{0.10, ..., 0.04}.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extended-precision thermal bracket.
    Thermal {
        /// One or more comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        beta_tilde: Vec<f64>,
        #[arg(long, default_value_t = oracle::DEFAULT_DIGITS)]
        digits: usize,
        #[arg(long, default_value_t = oracle::DEFAULT_MAX_TERMS)]
        max_terms: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PDE, normalization and orthogonality residuals of the mode functions.
    Modes {
        /// Config file with a [metric] block (constant components).
        #[arg(long)]
        metric: PathBuf,
        /// Plate separation; defaults to the file's [cavity] L, else 1.
        #[arg(long = "L")]
        separation: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Numbers with `precision` significant digits in scientific notation.
pub fn sci(x: f64, precision: usize) -> String {
    format!("{:.*e}", precision.saturating_sub(1), x)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } => EXIT_USAGE,
        Error::InvalidMetric { .. } => EXIT_INVALID_METRIC,
        _ => EXIT_FAILURE,
    }
}

fn series_override(mut series: SeriesControl, env: Option<String>) -> Result<SeriesControl> {
    if let Some(raw) = env {
        let terms: usize = raw
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{MAX_TERMS_ENV} must be a positive integer, got '{raw}'")))?;
        series = SeriesControl::new(terms, series.term_tolerance)?;
    }
    Ok(series)
}

fn load(config: Option<&Path>, observer_z: Option<f64>) -> Result<RunConfig> {
    let path = config.ok_or_else(|| Error::InvalidInput("this command needs --config <path>".into()))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(z) = observer_z {
        cfg.cavity = cfg.cavity.with_observer(z);
    }
    cfg.series = series_override(cfg.series, std::env::var(MAX_TERMS_ENV).ok())?;
    Ok(cfg)
}

pub fn cmd_validate(cfg: &RunConfig, out: &mut dyn Write) -> Result<u8> {
    let p = cfg.output.precision;
    let report = cfg.metric.validate();
    writeln!(out, "{UNITS_NOTE}")?;
    writeln!(out, "metric: {}", cfg.metric.name())?;
    let d = cfg.metric.domain();
    if d.is_bounded() {
        writeln!(out, "domain: [{}, {}] ({} samples)", d.min, d.max, report.samples)?;
    } else {
        writeln!(out, "domain: unbounded (constant components, checked at z = 0)")?;
    }
    if let Some((lo, hi)) = report.dragged_g00_range {
        writeln!(out, "ĝ00 range: [{}, {}]", sci(lo, p), sci(hi, p))?;
    }
    if let Some(det) = report.det_neg_at_origin {
        writeln!(out, "−det(g) at z = 0: {}", sci(det, p))?;
    }
    if !report.is_valid() {
        for (z, condition) in &report.failures {
            writeln!(out, "violation: {condition} fails at z = {z}")?;
        }
        writeln!(out, "invalid; {} of {} samples fail", report.failures.len(), report.samples)?;
        return Ok(EXIT_INVALID_METRIC);
    }
    let mut summary = String::from("valid");
    if let Some(det) = report.det_neg_at_origin {
        summary.push_str(&format!("; −g = {det}"));
    }
    match report.dragged_g00_range {
        Some((lo, hi)) if lo == hi => summary.push_str(&format!("; ĝ00 = {lo}")),
        Some((lo, hi)) => summary.push_str(&format!("; ĝ00 ∈ [{lo}, {hi}]")),
        None => {}
    }
    writeln!(out, "{summary}")?;
    Ok(EXIT_OK)
}

pub fn cmd_energy(cfg: &RunConfig, out: &mut dyn Write) -> Result<u8> {
    let p = cfg.output.precision;
    let r = casimir_energy_report(&cfg.metric, &cfg.cavity)?;
    writeln!(out, "{UNITS_NOTE}")?;
    writeln!(out, "metric: {}", cfg.metric.name())?;
    writeln!(out, "L_p = {}", sci(r.geometry.length, p))?;
    writeln!(out, "S_p = {}", sci(r.geometry.area, p))?;
    writeln!(out, "E_p = {}", sci(r.e_p, p))?;
    writeln!(out, "redshift factor = {}", sci(r.redshift_factor, p))?;
    writeln!(out, "E_0 = {}", sci(r.e_0, p))?;
    writeln!(out, "E_z = {} (z = {})", sci(r.e_z, p), r.observer_z)?;
    Ok(EXIT_OK)
}

fn thermal_point(system: &PlateSystem, mode: TemperatureMode, value: f64) -> Result<ThermalPoint> {
    match mode {
        TemperatureMode::Coordinate => ThermalPoint::from_coordinate(system, value),
        TemperatureMode::Proper => ThermalPoint::from_proper(system, value),
        TemperatureMode::Reduced => ThermalPoint::from_beta_tilde(system, 1.0 / value),
    }
}

pub fn cmd_thermal(cfg: &RunConfig, out: &mut dyn Write) -> Result<u8> {
    let p = cfg.output.precision;
    let thermal = cfg.thermal.ok_or_else(|| Error::InvalidInput("thermal needs a [thermal] block".into()))?;
    let ThermalRange::Single(value) = thermal.range else {
        return Err(Error::InvalidInput("thermal takes a single 'value'; use sweep for ranges".into()));
    };
    let system = PlateSystem::new(cfg.metric.clone(), cfg.cavity)?;
    let point = thermal_point(&system, thermal.mode, value)?;
    let r = thermodynamics(&system, &point, &cfg.series)?;
    writeln!(out, "{UNITS_NOTE}")?;
    writeln!(out, "metric: {}", cfg.metric.name())?;
    writeln!(out, "T = {}", sci(point.temperature, p))?;
    writeln!(out, "T_p = {}", sci(point.proper_temperature, p))?;
    writeln!(out, "1/beta_tilde = {}", sci(point.inverse_beta_tilde(), p))?;
    writeln!(out, "sqrt(-g) = {}", sci(r.sqrt_det_neg, p))?;
    writeln!(out, "E_z = {} (z = {})", sci(r.energy.e_z, p), r.energy.observer_z)?;
    writeln!(out, "Delta_T F_p = {}", sci(r.proper.free_energy, p))?;
    writeln!(out, "Delta_T U_p = {}", sci(r.proper.internal_energy, p))?;
    writeln!(out, "Delta_T S_p = {}", sci(r.proper.entropy, p))?;
    writeln!(out, "Delta_T C_p = {}", sci(r.proper.heat_capacity, p))?;
    writeln!(out, "F = {}", sci(r.free_energy, p))?;
    writeln!(out, "U = {}", sci(r.internal_energy, p))?;
    writeln!(out, "S = {}", sci(r.entropy, p))?;
    writeln!(out, "C_V = {}", sci(r.heat_capacity, p))?;
    writeln!(out, "black-body free energy (subtracted) = {}", sci(r.blackbody_free_energy, p))?;
    Ok(EXIT_OK)
}

fn csv_row(r: &ThermoReport, p: usize) -> String {
    let s = &r.scaled;
    [
        r.point.inverse_beta_tilde(),
        s.free_energy,
        s.internal_energy,
        s.entropy,
        s.heat_capacity,
        r.free_energy,
        r.internal_energy,
        r.entropy,
        r.heat_capacity,
    ]
    .iter()
    .map(|&x| sci(x, p))
    .collect::<Vec<_>>()
    .join(",")
}

/// Writes the sweep CSV to `out`; floor omissions are reported on `diag`.
pub fn cmd_sweep(
    cfg: &RunConfig,
    points: Option<usize>,
    log: bool,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> Result<u8> {
    let p = cfg.output.precision;
    let thermal = cfg.thermal.ok_or_else(|| Error::InvalidInput("sweep needs a [thermal] block".into()))?;
    let range = match thermal.range {
        ThermalRange::Sweep { from, to, points: n, spacing } => ThermalRange::Sweep {
            from,
            to,
            points: points.unwrap_or(n),
            spacing: if log { Spacing::Log } else { spacing },
        },
        single => single,
    };
    if points == Some(0) {
        return Err(Error::InvalidInput("--points must be at least 1".into()));
    }
    let system = PlateSystem::new(cfg.metric.clone(), cfg.cavity)?;
    let values = range.values();
    let rows: Vec<Result<Option<String>>> = values
        .par_iter()
        .map(|&v| {
            let point = thermal_point(&system, thermal.mode, v)?;
            match thermodynamics(&system, &point, &cfg.series) {
                Ok(r) => Ok(Some(csv_row(&r, p))),
                Err(Error::AccuracyFloor { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    let mut omitted = 0;
    for (v, row) in values.iter().zip(rows) {
        match row? {
            Some(line) => {
                text.push_str(&line);
                text.push('\n');
            }
            None => {
                omitted += 1;
                writeln!(diag, "warning: point {v} lies below the beta_tilde accuracy floor; row omitted")?;
            }
        }
    }
    out.write_all(text.as_bytes())?;
    if omitted > 0 {
        writeln!(diag, "warning: {omitted} of {} rows omitted", values.len())?;
        return Ok(EXIT_FLOOR_OMISSION);
    }
    Ok(EXIT_OK)
}

fn emit(records: &[FixtureRecord], out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fixtures::write_file(path, records),
        None => Ok(stdout.write_all(fixtures::render(records).as_bytes())?),
    }
}

pub fn cmd_oracle(cmd: &OracleCommand, out: &mut dyn Write, diag: &mut dyn Write) -> Result<u8> {
    writeln!(diag, "{UNITS_NOTE}")?;
    match cmd {
        OracleCommand::Cutoff { separation, lambdas, out: path } => {
            let grid = lambdas.clone().unwrap_or_else(|| oracle::default_lambdas(*separation));
            let sweep = oracle::cutoff_casimir_energy_per_area(*separation, &grid)?;
            if sweep.flagged {
                writeln!(diag, "warning: cutoff fit residual {:e} exceeds threshold", sweep.fit_residual)?;
            }
            emit(&[oracle::cutoff_record(&sweep)], path.as_deref(), out)?;
        }
        OracleCommand::Thermal { beta_tilde, digits, max_terms, out: path } => {
            let records = oracle::thermal_records(beta_tilde, *digits, *max_terms)?;
            emit(&records, path.as_deref(), out)?;
        }
        OracleCommand::Modes { metric, separation, out: path } => {
            let model = super::config::load_metric(metric)?;
            if !model.is_constant() {
                return Err(Error::InvalidInput("mode oracle needs constant metric components".into()));
            }
            let c: MetricComponents = model.components_at(0.0)?;
            let l = match separation {
                Some(l) => *l,
                None => super::config::load_separation(metric)?.unwrap_or(1.0),
            };
            let record = oracle::mode_record(model.name(), &c, l)?;
            emit(&[record], path.as_deref(), out)?;
        }
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, diag: &mut dyn Write) -> Result<u8> {
    let config = cli.config.as_deref();
    match &cli.command {
        Command::Validate => cmd_validate(&load(config, None)?, out),
        Command::Energy(o) => cmd_energy(&load(config, o.observer_z)?, out),
        Command::Thermal(o) => cmd_thermal(&load(config, o.observer_z)?, out),
        Command::Sweep(args) => {
            let cfg = load(config, args.observer.observer_z)?;
            writeln!(diag, "{UNITS_NOTE}")?;
            match args.out.as_ref().or(cfg.output.csv.as_ref()) {
                Some(path) => {
                    let mut buf = Vec::new();
                    let code = cmd_sweep(&cfg, args.points, args.log, &mut buf, diag)?;
                    std::fs::write(path, buf)?;
                    Ok(code)
                }
                None => cmd_sweep(&cfg, args.points, args.log, out, diag),
            }
        }
        Command::Oracle(cmd) => cmd_oracle(cmd, out, diag),
    }
}

/// Entry point shared by the binary; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, diag: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(diag, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli, out, diag) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            exit_code(&e)
        }
    }
}
