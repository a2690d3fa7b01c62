//! Stationary metrics depending on the plate-normal coordinate only.
//!
//! The line element is
//!
//! ```text
//! ds² = g00(z) dt² + g11(z) dx² + g22(z) dy² + g33(z) dz² + 2 g03(z) dt dz
//! ```
//!
//! with signature (+, −, −, −). Component functions are polynomials in `z`
//! (constants being the degree-zero case), either given explicitly or taken
//! from the small built-in catalog.

use std::fmt;

use crate::error::{Error, Result};

/// Number of uniform samples used when validating a model over a z-interval.
pub const VALIDATION_GRID: usize = 129;

/// Covariant components at a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricComponents {
    pub g00: f64,
    pub g11: f64,
    pub g22: f64,
    pub g33: f64,
    pub g03: f64,
}

/// Contravariant components `g^{μν}` of a [`MetricComponents`] value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseComponents {
    pub g00: f64,
    pub g11: f64,
    pub g22: f64,
    pub g33: f64,
    pub g03: f64,
}

impl MetricComponents {
    /// Validated point value. Errors report the point as `z = 0`; use
    /// [`MetricComponents::at_point`] to attach a different location.
    pub fn new(g00: f64, g11: f64, g22: f64, g33: f64, g03: f64) -> Result<Self> {
        Self::at_point(g00, g11, g22, g33, g03, 0.0)
    }

    pub fn at_point(g00: f64, g11: f64, g22: f64, g33: f64, g03: f64, z: f64) -> Result<Self> {
        let c = MetricComponents { g00, g11, g22, g33, g03 };
        c.check(z)?;
        Ok(c)
    }

    pub fn minkowski() -> Self {
        MetricComponents { g00: 1.0, g11: -1.0, g22: -1.0, g33: -1.0, g03: 0.0 }
    }

    fn check(&self, z: f64) -> Result<()> {
        let fail = |condition| Err(Error::InvalidMetric { z, condition });
        let all_finite = [self.g00, self.g11, self.g22, self.g33, self.g03].iter().all(|v| v.is_finite());
        if !all_finite {
            return fail("finiteness of all components");
        }
        if !(self.g00 > 0.0) {
            return fail("g00 > 0");
        }
        if !(self.g11 < 0.0) {
            return fail("g11 < 0");
        }
        if !(self.g22 < 0.0) {
            return fail("g22 < 0");
        }
        if !(self.g33 < 0.0) {
            return fail("g33 < 0");
        }
        if !(self.t_z_discriminant() > 0.0) {
            return fail("g03² − g00·g33 > 0");
        }
        if !(self.dragged_g00() > 0.0) {
            return fail("ĝ00 = g00 − g03²/g33 > 0");
        }
        if !(self.det_neg() > 0.0) {
            return fail("−det(g) > 0");
        }
        Ok(())
    }

    /// `D = g03² − g00·g33`, the negated determinant of the t–z block.
    pub fn t_z_discriminant(&self) -> f64 {
        self.g03 * self.g03 - self.g00 * self.g33
    }

    pub fn inverse(&self) -> InverseComponents {
        let d = self.t_z_discriminant();
        InverseComponents {
            g00: -self.g33 / d,
            g11: 1.0 / self.g11,
            g22: 1.0 / self.g22,
            g33: -self.g00 / d,
            g03: self.g03 / d,
        }
    }

    /// `−det(g) = g11·g22·(g03² − g00·g33)`.
    pub fn det_neg(&self) -> f64 {
        self.g11 * self.g22 * self.t_z_discriminant()
    }

    pub fn sqrt_det_neg(&self) -> f64 {
        self.det_neg().sqrt()
    }

    /// 00-component seen in the dragging frame, `g00 − g03²/g33`.
    pub fn dragged_g00(&self) -> f64 {
        self.g00 - self.g03 * self.g03 / self.g33
    }

    pub fn is_static(&self) -> bool {
        self.g03 == 0.0
    }

    /// Full 4×4 matrix in (t, x, y, z) order.
    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        [
            [self.g00, 0.0, 0.0, self.g03],
            [0.0, self.g11, 0.0, 0.0],
            [0.0, 0.0, self.g22, 0.0],
            [self.g03, 0.0, 0.0, self.g33],
        ]
    }
}

impl InverseComponents {
    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        [
            [self.g00, 0.0, 0.0, self.g03],
            [0.0, self.g11, 0.0, 0.0],
            [0.0, 0.0, self.g22, 0.0],
            [self.g03, 0.0, 0.0, self.g33],
        ]
    }
}

pub fn inverse_components(c: &MetricComponents) -> InverseComponents {
    c.inverse()
}

pub fn det_neg(c: &MetricComponents) -> f64 {
    c.det_neg()
}

pub fn dragged_g00(c: &MetricComponents) -> f64 {
    c.dragged_g00()
}

/// Real polynomial in `z`, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(Vec<f64>);

impl Polynomial {
    pub fn new(coefficients: Vec<f64>) -> Self {
        if coefficients.is_empty() {
            Polynomial(vec![0.0])
        } else {
            Polynomial(coefficients)
        }
    }

    pub fn constant(value: f64) -> Self {
        Polynomial(vec![value])
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.0
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().skip(1).all(|&c| c == 0.0)
    }
}

/// Closed interval of z-coordinates on which a model is declared valid.
/// Either end may be infinite for constant models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZDomain {
    pub min: f64,
    pub max: f64,
}

impl ZDomain {
    pub const UNBOUNDED: ZDomain = ZDomain { min: f64::NEG_INFINITY, max: f64::INFINITY };

    pub fn new(min: f64, max: f64) -> Result<Self> {
        if min.is_nan() || max.is_nan() || !(max > min) {
            return Err(Error::InvalidInput(format!("empty z-domain [{min}, {max}]")));
        }
        Ok(ZDomain { min, max })
    }

    pub fn contains(&self, z: f64) -> bool {
        z >= self.min && z <= self.max
    }

    pub fn is_bounded(&self) -> bool {
        self.min.is_finite() && self.max.is_finite()
    }
}

/// A stationary metric given by five component functions of `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricModel {
    name: String,
    g00: Polynomial,
    g11: Polynomial,
    g22: Polynomial,
    g33: Polynomial,
    g03: Polynomial,
    domain: ZDomain,
}

/// Summary of a grid validation pass.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub samples: usize,
    pub failures: Vec<(f64, &'static str)>,
    /// Range of ĝ00 over the samples that passed.
    pub dragged_g00_range: Option<(f64, f64)>,
    /// `−det(g)` at z = 0, when z = 0 is inside the domain and valid there.
    pub det_neg_at_origin: Option<f64>,
    pub dragged_g00_at_origin: Option<f64>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl MetricModel {
    pub fn polynomial(name: impl Into<String>, components: [Polynomial; 5], domain: ZDomain) -> Result<Self> {
        let [g00, g11, g22, g33, g03] = components;
        let model = MetricModel { name: name.into(), g00, g11, g22, g33, g03, domain };
        if !model.domain.is_bounded() && !model.is_constant() {
            return Err(Error::InvalidInput("z-dependent metric components need a bounded z-domain".into()));
        }
        Ok(model)
    }

    /// Constant components in the order (g00, g11, g22, g33, g03).
    pub fn constant(name: impl Into<String>, values: [f64; 5]) -> Self {
        let [g00, g11, g22, g33, g03] = values.map(Polynomial::constant);
        MetricModel { name: name.into(), g00, g11, g22, g33, g03, domain: ZDomain::UNBOUNDED }
    }

    pub fn minkowski() -> Self {
        Self::constant("minkowski", [1.0, -1.0, -1.0, -1.0, 0.0])
    }

    /// Weak-field static metric with `g00 = 1 + 2φ` and spatial components
    /// `−(1 − 2φ)`. Valid signature for `−1/2 < φ < 1/2`.
    pub fn static_conformal(phi: f64) -> Result<Self> {
        if !(phi.abs() < 0.5) {
            return Err(Error::InvalidInput(format!("static-conformal requires |phi| < 0.5, got {phi}")));
        }
        let s = -(1.0 - 2.0 * phi);
        Ok(Self::constant("static-conformal", [1.0 + 2.0 * phi, s, s, s, 0.0]))
    }

    /// Constant rotating metric with `g11 = g22 = g33 = −1`, `g03 = drag` and
    /// `g00 = 1 − drag²`, so that `−det(g) = 1` and `ĝ00 = 1`.
    /// Requires `0 < |drag| < 1`.
    pub fn rotating_unit_det(drag: f64) -> Result<Self> {
        if !(drag.abs() < 1.0) || drag == 0.0 {
            return Err(Error::InvalidInput(format!("rotating-unit-det requires 0 < |drag| < 1, got {drag}")));
        }
        Ok(Self::constant("rotating-unit-det", [1.0 - drag * drag, -1.0, -1.0, -1.0, drag]))
    }

    pub const DEFAULT_PHI: f64 = 0.01;
    pub const DEFAULT_DRAG: f64 = 0.5;

    /// Looks up a catalog entry. `param` is `phi` for "static-conformal" and
    /// `drag` for "rotating-unit-det"; ignored for "minkowski".
    pub fn from_catalog(name: &str, param: Option<f64>) -> Result<Self> {
        match name {
            "minkowski" => Ok(Self::minkowski()),
            "static-conformal" => Self::static_conformal(param.unwrap_or(Self::DEFAULT_PHI)),
            "rotating-unit-det" => Self::rotating_unit_det(param.unwrap_or(Self::DEFAULT_DRAG)),
            other => Err(Error::InvalidInput(format!("unknown catalog metric '{other}'"))),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> ZDomain {
        self.domain
    }

    pub fn is_constant(&self) -> bool {
        [&self.g00, &self.g11, &self.g22, &self.g33, &self.g03].iter().all(|p| p.is_constant())
    }

    fn raw_at(&self, z: f64) -> [f64; 5] {
        [self.g00.eval(z), self.g11.eval(z), self.g22.eval(z), self.g33.eval(z), self.g03.eval(z)]
    }

    pub(crate) fn raw_components(&self, z: f64) -> MetricComponents {
        let [g00, g11, g22, g33, g03] = self.raw_at(z);
        MetricComponents { g00, g11, g22, g33, g03 }
    }

    pub fn components_at(&self, z: f64) -> Result<MetricComponents> {
        if !self.domain.contains(z) {
            return Err(Error::OutOfDomain { z, min: self.domain.min, max: self.domain.max });
        }
        let [g00, g11, g22, g33, g03] = self.raw_at(z);
        MetricComponents::at_point(g00, g11, g22, g33, g03, z)
    }

    /// Checks the signature invariants on [`VALIDATION_GRID`] uniform samples
    /// of `[a, b]`, stopping at the first failure.
    pub fn validate_interval(&self, a: f64, b: f64) -> Result<()> {
        for z in grid(a, b, VALIDATION_GRID) {
            self.components_at(z)?;
        }
        Ok(())
    }

    /// Validates the whole declared domain. Unbounded domains only occur for
    /// constant models, which are checked at z = 0.
    pub fn validate(&self) -> ValidationReport {
        let samples: Vec<f64> = if self.domain.is_bounded() {
            grid(self.domain.min, self.domain.max, VALIDATION_GRID).collect()
        } else {
            vec![0.0]
        };
        let mut failures = Vec::new();
        let mut range: Option<(f64, f64)> = None;
        for &z in &samples {
            match self.components_at(z) {
                Ok(c) => {
                    let h = c.dragged_g00();
                    range = Some(match range {
                        None => (h, h),
                        Some((lo, hi)) => (lo.min(h), hi.max(h)),
                    });
                }
                Err(Error::InvalidMetric { z, condition }) => failures.push((z, condition)),
                Err(_) => failures.push((z, "z inside domain")),
            }
        }
        let origin = self.components_at(0.0).ok();
        ValidationReport {
            samples: samples.len(),
            failures,
            dragged_g00_range: range,
            det_neg_at_origin: origin.map(|c| c.det_neg()),
            dragged_g00_at_origin: origin.map(|c| c.dragged_g00()),
        }
    }
}

impl fmt::Display for MetricComponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g00={}, g11={}, g22={}, g33={}, g03={})", self.g00, self.g11, self.g22, self.g33, self.g03)
    }
}

fn grid(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { b } else { a + h * i as f64 })
}
