//! Independent reference computations. Nothing here calls the series code
//! in [`crate::thermal`] or the closed-form inverse metric.

pub mod blackbody;
pub mod cutoff;
pub mod fixtures;
pub mod highprec;
pub mod modes;

use rayon::prelude::*;

pub use blackbody::blackbody_free_energy_quadrature;
pub use cutoff::{cutoff_casimir_energy_per_area, default_lambdas, CutoffSweep};
pub use fixtures::FixtureRecord;
pub use highprec::{highprec_thermal, highprec_thermal_bracket, HighPrecisionBracket, HighPrecisionThermal};
pub use modes::{mode_norm_check, mode_residuals, orthogonality_check, pde_residual, ModeResiduals};

use crate::error::Result;
use crate::metric::MetricComponents;

pub const DEFAULT_DIGITS: usize = 50;
pub const DEFAULT_MAX_TERMS: usize = highprec::MIN_TERMS;

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(";")
}

/// One record for a cutoff sweep. The bound is the distance between the
/// extrapolated value and the smallest-cutoff energy.
pub fn cutoff_record(sweep: &CutoffSweep) -> FixtureRecord {
    let last = *sweep.energies.last().expect("sweep has cutoff values");
    FixtureRecord::new("cutoff_energy_per_area")
        .with("L", sweep.separation)
        .with("value", format!("{:.15e}", sweep.extrapolated))
        .with("bound", format!("{:.3e}", (sweep.extrapolated - last).abs()))
        .with("fit_residual", format!("{:.3e}", sweep.fit_residual))
        .with("flagged", sweep.flagged)
        .with("degree", cutoff::FIT_DEGREE)
        .with("lambdas", join(&sweep.lambdas))
}

pub fn thermal_record(t: &HighPrecisionThermal) -> FixtureRecord {
    FixtureRecord::new("thermal_bracket")
        .with("beta_tilde", t.beta_tilde)
        .with("value", &t.bracket)
        .with("bound", &t.bound)
        .with("free_energy_scaled", &t.free_energy_scaled)
        .with("entropy_scaled", format!("{:.17e}", t.entropy_scaled))
        .with("heat_capacity_scaled", format!("{:.17e}", t.heat_capacity_scaled))
        .with("digits", t.digits)
        .with("max_terms", t.max_terms)
        .with("full_terms", t.full_terms)
}

/// Thermal oracle records for several β̃, evaluated in parallel and
/// returned in input order.
pub fn thermal_records(beta_tildes: &[f64], digits: usize, max_terms: usize) -> Result<Vec<FixtureRecord>> {
    beta_tildes.par_iter().map(|&bt| highprec_thermal(bt, digits, max_terms).map(|t| thermal_record(&t))).collect()
}

pub fn mode_record(label: &str, c: &MetricComponents, separation: f64) -> Result<FixtureRecord> {
    let r = mode_residuals(c, separation)?;
    Ok(FixtureRecord::new("mode_residuals")
        .with("metric", label)
        .with("g", format!("{};{};{};{};{}", c.g00, c.g11, c.g22, c.g33, c.g03))
        .with("L", separation)
        .with("value", format!("{:.3e}", r.worst()))
        .with("bound", "0")
        .with("pde", format!("{:.3e}", r.pde))
        .with("norm", format!("{:.3e}", r.norm))
        .with("orthogonality", format!("{:.3e}", r.orthogonality))
        .with("boundary", format!("{:.3e}", r.boundary)))
}
