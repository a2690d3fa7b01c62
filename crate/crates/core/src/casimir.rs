//! Zero-temperature renormalized Casimir energy seen by stationary observers.
//!
//! The flat-space value `E_p = −π² S_p / (1440 L_p³)` is built from the
//! proper geometry. An observer at the origin sees it rescaled by
//! `√(g00/ĝ00)`; an observer at `z` additionally by `g00(0)/g00(z)`, so that
//! `g00(z)·E_z` is the same for every observer.

use std::f64::consts::PI;

use crate::error::Result;
use crate::geometry::{proper_geometry, CavitySpec, ProperGeometry};
use crate::metric::MetricModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub geometry: ProperGeometry,
    /// Flat-space energy of the cavity with the same proper size.
    pub e_p: f64,
    /// Energy seen by the observer at the origin.
    pub e_0: f64,
    /// Energy seen by the observer at `observer_z`.
    pub e_z: f64,
    pub observer_z: f64,
    /// `√(g00/ĝ00)` at the origin.
    pub redshift_factor: f64,
}

impl EnergyReport {
    /// `L_p³ E / S_p` for the given energy.
    pub fn scaled(&self, energy: f64) -> f64 {
        energy * self.geometry.length.powi(3) / self.geometry.area
    }
}

pub fn casimir_energy_flat(geom: &ProperGeometry) -> f64 {
    -PI * PI * geom.area / (1440.0 * geom.length.powi(3))
}

/// `√(g00/ĝ00)` at z = 0. Exactly 1 for static metrics.
pub fn redshift_factor(model: &MetricModel) -> Result<f64> {
    let c = model.components_at(0.0)?;
    if c.is_static() {
        return Ok(1.0);
    }
    Ok((c.g00 / c.dragged_g00()).sqrt())
}

pub fn casimir_energy_origin(model: &MetricModel, cavity: &CavitySpec) -> Result<EnergyReport> {
    let at_origin = CavitySpec { observer_z: 0.0, ..*cavity };
    casimir_energy_report(model, &at_origin)
}

/// Energy seen by a stationary observer at coordinate `z`.
pub fn casimir_energy_at(model: &MetricModel, cavity: &CavitySpec, z: f64) -> Result<f64> {
    let moved = CavitySpec { observer_z: z, ..*cavity };
    Ok(casimir_energy_report(model, &moved)?.e_z)
}

/// Full report for the cavity's own `observer_z`.
pub fn casimir_energy_report(model: &MetricModel, cavity: &CavitySpec) -> Result<EnergyReport> {
    let geometry = proper_geometry(model, cavity)?;
    energy_from_geometry(model, geometry, cavity.observer_z)
}

pub(crate) fn energy_from_geometry(
    model: &MetricModel,
    geometry: ProperGeometry,
    observer_z: f64,
) -> Result<EnergyReport> {
    let origin = model.components_at(0.0)?;
    let observer = model.components_at(observer_z)?;
    let redshift_factor = redshift_factor(model)?;
    let e_p = casimir_energy_flat(&geometry);
    let e_0 = redshift_factor * e_p;
    let e_z = if observer_z == 0.0 { e_0 } else { origin.g00 / observer.g00 * e_0 };
    Ok(EnergyReport { geometry, e_p, e_0, e_z, observer_z, redshift_factor })
}
