use crate::casimir::{energy_from_geometry, EnergyReport};
use crate::error::Result;
use crate::geometry::{proper_geometry, CavitySpec, ProperGeometry};
use crate::metric::{MetricComponents, MetricModel};

/// A validated metric/cavity pair with its temperature-independent
/// quantities evaluated once.
#[derive(Debug, Clone)]
pub struct PlateSystem {
    pub model: MetricModel,
    pub cavity: CavitySpec,
    pub geometry: ProperGeometry,
    pub energy: EnergyReport,
    /// Components at z = 0, used for everything taken at zero order.
    pub origin: MetricComponents,
}

impl PlateSystem {
    pub fn new(model: MetricModel, cavity: CavitySpec) -> Result<Self> {
        let geometry = proper_geometry(&model, &cavity)?;
        let energy = energy_from_geometry(&model, geometry, cavity.observer_z)?;
        let origin = model.components_at(0.0)?;
        Ok(PlateSystem { model, cavity, geometry, energy, origin })
    }

    /// `√(−det g)` at z = 0.
    pub fn sqrt_det_neg(&self) -> f64 {
        self.origin.sqrt_det_neg()
    }
}
