//! Proper size of the cavity measured with the spatial metric.

use crate::error::{Error, Result};
use crate::metric::MetricModel;
use crate::quadrature::{integrate_checked, Tolerance};

/// Relative disagreement allowed between the adaptive and the fixed rule.
const CROSS_CHECK_REL: f64 = 1e-8;

/// Plates sit at `z = ±L/2`; the transverse plate is the coordinate
/// rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavitySpec {
    pub separation: f64,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub observer_z: f64,
}

impl CavitySpec {
    pub fn new(separation: f64, x_range: (f64, f64), y_range: (f64, f64)) -> Result<Self> {
        let cavity = CavitySpec { separation, x_range, y_range, observer_z: 0.0 };
        cavity.check_shape()?;
        Ok(cavity)
    }

    /// Plates of coordinate separation `separation` over the unit square.
    pub fn unit_square(separation: f64) -> Result<Self> {
        Self::new(separation, (0.0, 1.0), (0.0, 1.0))
    }

    pub fn with_observer(mut self, z: f64) -> Self {
        self.observer_z = z;
        self
    }

    fn check_shape(&self) -> Result<()> {
        if !(self.separation > 0.0) || !self.separation.is_finite() {
            return Err(Error::InvalidCavity(format!("plate separation must be positive, got {}", self.separation)));
        }
        if !(self.x_range.1 > self.x_range.0) {
            return Err(Error::InvalidCavity("x-range must be increasing".into()));
        }
        if !(self.y_range.1 > self.y_range.0) {
            return Err(Error::InvalidCavity("y-range must be increasing".into()));
        }
        if !self.observer_z.is_finite() {
            return Err(Error::InvalidCavity("observer z must be finite".into()));
        }
        Ok(())
    }

    /// Checks the shape and that plates and observer sit inside the metric
    /// domain, then validates the metric between the plates.
    pub fn check_against(&self, model: &MetricModel) -> Result<()> {
        self.check_shape()?;
        let half = 0.5 * self.separation;
        let domain = model.domain();
        for z in [-half, half] {
            if !domain.contains(z) {
                return Err(Error::InvalidCavity(format!(
                    "plate at z = {z} lies outside the metric domain [{}, {}]",
                    domain.min, domain.max
                )));
            }
        }
        if !domain.contains(self.observer_z) {
            return Err(Error::OutOfDomain { z: self.observer_z, min: domain.min, max: domain.max });
        }
        model.validate_interval(-half, half)?;
        model.components_at(self.observer_z)?;
        Ok(())
    }

    pub fn coordinate_area(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) * (self.y_range.1 - self.y_range.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProperGeometry {
    pub length: f64,
    pub area: f64,
    pub volume: f64,
}

impl ProperGeometry {
    pub fn new(length: f64, area: f64) -> Result<Self> {
        if !(length > 0.0 && area > 0.0) || !(length.is_finite() && area.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "proper length and area must be positive, got L_p = {length}, S_p = {area}"
            )));
        }
        Ok(ProperGeometry { length, area, volume: area * length })
    }

    pub fn unit() -> Self {
        ProperGeometry { length: 1.0, area: 1.0, volume: 1.0 }
    }
}

/// `L_p = ∫ √(−g33 + g03²/g00) dz` over the plate gap, with the full
/// z-dependence of the components.
pub fn proper_length(model: &MetricModel, cavity: &CavitySpec) -> Result<f64> {
    cavity.check_against(model)?;
    let half = 0.5 * cavity.separation;
    if model.is_constant() {
        let c = model.components_at(0.0)?;
        return Ok(cavity.separation * (-c.g33 + c.g03 * c.g03 / c.g00).sqrt());
    }
    let integrand = |z: f64| {
        let c = model.raw_components(z);
        (-c.g33 + c.g03 * c.g03 / c.g00).sqrt()
    };
    let value = integrate_checked(integrand, -half, half, &Tolerance::default(), CROSS_CHECK_REL)?;
    Ok(value)
}

/// `S_p = √(g11 g22)|_{z=0}` times the coordinate area.
pub fn proper_area(model: &MetricModel, cavity: &CavitySpec) -> Result<f64> {
    cavity.check_against(model)?;
    let c = model.components_at(0.0)?;
    Ok((c.g11 * c.g22).sqrt() * cavity.coordinate_area())
}

pub fn proper_geometry(model: &MetricModel, cavity: &CavitySpec) -> Result<ProperGeometry> {
    ProperGeometry::new(proper_length(model, cavity)?, proper_area(model, cavity)?)
}
