//! Casimir energy and its thermal corrections for a massless scalar field
//! between two parallel Dirichlet plates in a stationary spacetime.
//!
//! The metric is `g_μν(z)` with signature (+,−,−,−), plates at `z = ±L/2`
//! and a single time–z cross term `g03`. Zero-temperature energies come from
//! the proper geometry of the cavity and the stationary redshift; thermal
//! corrections are series in `β̃ = 1/(2 T_p L_p)`.

// negated comparisons are deliberate: they reject NaN along with bad values
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod casimir;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod metric;
pub mod modes;
pub mod oracle;
pub mod quadrature;
pub mod system;
pub mod thermal;

pub use casimir::{casimir_energy_at, casimir_energy_origin, casimir_energy_report, redshift_factor, EnergyReport};
pub use error::{Error, Result};
pub use geometry::{proper_geometry, CavitySpec, ProperGeometry};
pub use metric::{MetricComponents, MetricModel, Polynomial, ValidationReport, ZDomain};
pub use modes::{mode_data, mode_frequency, mode_norm_sq, mode_phase_rate, ModeData, ModeSpec};
pub use system::PlateSystem;
pub use thermal::{thermodynamics, SeriesControl, ThermalPoint, ThermoReport};
