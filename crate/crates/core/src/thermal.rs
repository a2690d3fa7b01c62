//! Thermal corrections to the Casimir free energy and the thermodynamics
//! derived from them.
//!
//! Everything is expressed through the dimensionless inverse temperature
//! `β̃ = 1/(2 T_p L_p)` and the bracket
//!
//! ```text
//! B(β̃) = Σ_{m≥1} [ coth(πmβ̃)/(mβ̃)³ + π/((mβ̃)² sinh²(πmβ̃)) ]
//! ```
//!
//! The renormalized proper correction is
//! `Δ_T F_p = −S_p/(32π L_p³) · (B(β̃) − π³/(45 β̃⁴))`; observed quantities
//! carry an extra factor `√(−g)` evaluated at z = 0.
//!
//! Entropy is `S = −∂F/∂T_p` throughout, so `Δ_T S_p = −∂Δ_T F_p/∂T_p`,
//! which is non-negative.

use std::f64::consts::PI;

use accurate::sum::Sum2;
use accurate::traits::*;

use crate::casimir::EnergyReport;
use crate::error::{Error, Result};
use crate::geometry::ProperGeometry;
use crate::system::PlateSystem;

/// ζ(3) to 30 significant digits.
pub const ZETA3: f64 = 1.202_056_903_159_594_285_399_738_161_51;
/// ζ(4) = π⁴/90 to 30 significant digits.
pub const ZETA4: f64 = 1.082_323_233_711_138_191_516_003_696_54;

/// Smallest β̃ accepted by the double-precision evaluation.
pub const BETA_TILDE_FLOOR: f64 = 0.01;

/// Beyond `π m β̃ > EXP_THRESHOLD` the terms equal `1/(mβ̃)³` to far below
/// double precision and the rest of the series is summed in closed form.
pub const EXP_THRESHOLD: f64 = 37.0;

/// Relative tolerance of the built-in analytic-vs-finite-difference check.
pub const DERIVATIVE_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Cap on the number of explicitly summed terms.
    pub max_terms: usize,
    /// Largest admissible bound on the neglected remainder, relative to the sum.
    pub term_tolerance: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl { max_terms: 500, term_tolerance: 1e-16 }
    }
}

impl SeriesControl {
    pub fn new(max_terms: usize, term_tolerance: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::InvalidInput("max_terms must be >= 1".into()));
        }
        if !(term_tolerance > 0.0) {
            return Err(Error::InvalidInput("term tolerance must be positive".into()));
        }
        Ok(SeriesControl { max_terms, term_tolerance })
    }
}

/// Bracket value and its first two β̃-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketSum {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    /// Number of terms summed explicitly before the closed-form tail.
    pub explicit_terms: usize,
    /// Bound on the exponentially small part dropped with the tail.
    pub remainder_bound: f64,
}

/// One term as a function of `x = mβ̃`, with its first two derivatives.
fn term(x: f64) -> (f64, f64, f64) {
    let px = PI * x;
    let c = 1.0 / px.tanh();
    let sh = px.sinh();
    let s2 = 1.0 / (sh * sh);
    let (x2, x3) = (x * x, x * x * x);
    let (x4, x5) = (x3 * x, x3 * x2);
    let pi2 = PI * PI;
    let pi3 = pi2 * PI;
    let g = c / x3 + PI * s2 / x2;
    let g1 = -3.0 * c / x4 - 3.0 * PI * s2 / x3 - 2.0 * pi2 * c * s2 / x2;
    let g2 = 12.0 * c / x5
        + 12.0 * PI * s2 / x4
        + 10.0 * pi2 * c * s2 / x3
        + 2.0 * pi3 * s2 * s2 / x2
        + 4.0 * pi3 * c * c * s2 / x2;
    (g, g1, g2)
}

/// `Σ_{m≥n} 1/m³`.
fn zeta3_tail(n: usize) -> f64 {
    // below 25 the Euler–Maclaurin remainder exceeds 1e-16 relative
    if n < 25 {
        let head = (1..n).map(|m| (m as f64).powi(-3)).sum_with_accumulator::<Sum2<_>>();
        return ZETA3 - head;
    }
    // Euler–Maclaurin through the N^-12 term
    let x = n as f64;
    let r = 1.0 / x;
    let r2 = r * r;
    r2 * (0.5 + r * 0.5 + r2 * (0.25 + r2 * (-1.0 / 12.0 + r2 * (1.0 / 12.0 + r2 * (-0.15 + r2 * (5.0 / 12.0))))))
}

fn check_floor(beta_tilde: f64) -> Result<()> {
    if !(beta_tilde >= BETA_TILDE_FLOOR) || !beta_tilde.is_finite() {
        return Err(Error::AccuracyFloor { beta_tilde, floor: BETA_TILDE_FLOOR });
    }
    Ok(())
}

fn bracket_unchecked(beta_tilde: f64, ctl: &SeriesControl) -> Result<BracketSum> {
    let exp_terms = (EXP_THRESHOLD / (PI * beta_tilde)).floor() as usize;
    let explicit = exp_terms.min(ctl.max_terms);
    let (mut s0, mut s1, mut s2) = (Sum2::zero(), Sum2::zero(), Sum2::zero());
    for m in 1..=explicit {
        let mf = m as f64;
        let (g, g1, g2) = term(mf * beta_tilde);
        s0 += g;
        s1 += mf * g1;
        s2 += mf * mf * g2;
    }
    let tail = zeta3_tail(explicit + 1);
    let b3 = beta_tilde.powi(3);
    s0 += tail / b3;
    s1 += -3.0 * tail / (b3 * beta_tilde);
    s2 += 12.0 * tail / (b3 * beta_tilde * beta_tilde);

    let remainder_bound = if explicit < exp_terms {
        let x = (explicit + 1) as f64 * beta_tilde;
        let e = (-2.0 * PI * x).exp();
        let first = 2.0 * e / (1.0 - e) / x.powi(3) + 4.0 * PI * e / ((1.0 - e) * (1.0 - e)) / (x * x);
        first / (1.0 - (-2.0 * PI * beta_tilde).exp())
    } else {
        0.0
    };
    let value = s0.sum();
    if remainder_bound > ctl.term_tolerance * value.abs() {
        return Err(Error::SeriesTruncation { terms: explicit, bound: remainder_bound });
    }
    Ok(BracketSum { value, d1: s1.sum(), d2: s2.sum(), explicit_terms: explicit, remainder_bound })
}

/// The bracket with its β̃-derivatives. Requires `β̃ ≥ BETA_TILDE_FLOOR`.
pub fn bracket(beta_tilde: f64, ctl: &SeriesControl) -> Result<BracketSum> {
    check_floor(beta_tilde)?;
    bracket_unchecked(beta_tilde, ctl)
}

pub fn bracket_sum(beta_tilde: f64, ctl: &SeriesControl) -> Result<f64> {
    Ok(bracket(beta_tilde, ctl)?.value)
}

/// `π³/(45 β̃⁴)`, the black-body part of the bracket.
pub fn blackbody_bracket(beta_tilde: f64) -> f64 {
    PI.powi(3) / (45.0 * beta_tilde.powi(4))
}

/// Renormalized bracket `R = B − π³/(45β̃⁴)` and its β̃-derivatives.
fn renormalized_parts(b: &BracketSum, beta_tilde: f64) -> (f64, f64, f64) {
    let bb = blackbody_bracket(beta_tilde);
    (b.value - bb, b.d1 + 4.0 * bb / beta_tilde, b.d2 - 20.0 * bb / (beta_tilde * beta_tilde))
}

/// Thermal correction before renormalization, `√(−g)·S_p/(32π L_p³)·(ζ(3)/β̃³ − B)`.
pub fn thermal_free_energy_raw(
    sqrt_det_neg: f64,
    geom: &ProperGeometry,
    beta_tilde: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    let b = bracket_sum(beta_tilde, ctl)?;
    let k = sqrt_det_neg * geom.area / (32.0 * PI * geom.length.powi(3));
    Ok(k * (ZETA3 / beta_tilde.powi(3) - b))
}

/// Renormalized proper correction `Δ_T F_p`.
pub fn thermal_free_energy_renormalized(beta_tilde: f64, geom: &ProperGeometry, ctl: &SeriesControl) -> Result<f64> {
    let b = bracket(beta_tilde, ctl)?;
    let (r, _, _) = renormalized_parts(&b, beta_tilde);
    Ok(-geom.area / (32.0 * PI * geom.length.powi(3)) * r)
}

/// Terms of the expansion for `L_p → ∞` at fixed proper temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticTerms {
    pub t4: f64,
    pub t3: f64,
    pub constant: f64,
}

pub fn asymptotic_expansion(geom: &ProperGeometry, proper_temperature: f64) -> AsymptoticTerms {
    let t = proper_temperature;
    AsymptoticTerms {
        t4: blackbody_free_energy(t, geom.volume),
        t3: geom.area * ZETA3 * t.powi(3) / (4.0 * PI),
        constant: -PI * PI * geom.area / (720.0 * geom.length.powi(3)),
    }
}

/// Black-body free energy `−π² V T⁴ / 90`.
pub fn blackbody_free_energy(proper_temperature: f64, volume: f64) -> f64 {
    -PI * PI * volume * proper_temperature.powi(4) / 90.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPoint {
    /// Coordinate temperature, constant through the cavity.
    pub temperature: f64,
    pub proper_temperature: f64,
    pub beta_tilde: f64,
}

impl ThermalPoint {
    fn build(temperature: f64, proper_temperature: f64, beta_tilde: f64) -> Result<Self> {
        if !(temperature > 0.0 && proper_temperature > 0.0 && beta_tilde > 0.0)
            || !(temperature.is_finite() && proper_temperature.is_finite() && beta_tilde.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "temperatures must be positive and finite (T = {temperature}, T_p = {proper_temperature})"
            )));
        }
        Ok(ThermalPoint { temperature, proper_temperature, beta_tilde })
    }

    /// From the coordinate temperature; `T_p = T/√g00(0)`.
    pub fn from_coordinate(system: &PlateSystem, temperature: f64) -> Result<Self> {
        let tp = temperature / system.origin.g00.sqrt();
        Self::build(temperature, tp, 1.0 / (2.0 * tp * system.geometry.length))
    }

    pub fn from_proper(system: &PlateSystem, proper_temperature: f64) -> Result<Self> {
        let t = proper_temperature * system.origin.g00.sqrt();
        let bt = 1.0 / (2.0 * proper_temperature * system.geometry.length);
        Self::build(t, proper_temperature, bt)
    }

    pub fn from_beta_tilde(system: &PlateSystem, beta_tilde: f64) -> Result<Self> {
        let tp = 1.0 / (2.0 * beta_tilde * system.geometry.length);
        Self::build(tp * system.origin.g00.sqrt(), tp, beta_tilde)
    }

    /// `1/β̃ = 2 T_p L_p`.
    pub fn inverse_beta_tilde(&self) -> f64 {
        1.0 / self.beta_tilde
    }
}

/// Renormalized proper corrections `Δ_T X_p` (no determinant factor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProperCorrections {
    pub free_energy: f64,
    pub internal_energy: f64,
    pub entropy: f64,
    pub heat_capacity: f64,
}

/// The corrections in the dimensionless units of the plots:
/// energies times `L_p³/S_p`, entropy and heat capacity times `L_p²/S_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledCorrections {
    pub free_energy: f64,
    pub internal_energy: f64,
    pub entropy: f64,
    pub heat_capacity: f64,
}

impl ScaledCorrections {
    fn from_renormalized(r: f64, r1: f64, r2: f64, beta_tilde: f64) -> Self {
        let k = 1.0 / (32.0 * PI);
        let b2 = beta_tilde * beta_tilde;
        ScaledCorrections {
            free_energy: -k * r,
            internal_energy: -k * (r + beta_tilde * r1),
            entropy: -2.0 * k * b2 * r1,
            heat_capacity: 2.0 * k * b2 * (2.0 * r1 + beta_tilde * r2),
        }
    }

    fn to_proper(self, geom: &ProperGeometry) -> ProperCorrections {
        let l2 = geom.length * geom.length;
        let energy = geom.area / (l2 * geom.length);
        let entropy = geom.area / l2;
        ProperCorrections {
            free_energy: self.free_energy * energy,
            internal_energy: self.internal_energy * energy,
            entropy: self.entropy * entropy,
            heat_capacity: self.heat_capacity * entropy,
        }
    }
}

/// Scaled corrections as functions of β̃ alone.
pub fn scaled_corrections(beta_tilde: f64, ctl: &SeriesControl) -> Result<ScaledCorrections> {
    let b = bracket(beta_tilde, ctl)?;
    let (r, r1, r2) = renormalized_parts(&b, beta_tilde);
    Ok(ScaledCorrections::from_renormalized(r, r1, r2, beta_tilde))
}

pub fn proper_corrections(beta_tilde: f64, geom: &ProperGeometry, ctl: &SeriesControl) -> Result<ProperCorrections> {
    Ok(scaled_corrections(beta_tilde, ctl)?.to_proper(geom))
}

/// Analytic and finite-difference values of the scaled entropy and heat
/// capacity at one β̃.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeCheck {
    pub entropy: f64,
    pub entropy_fd: f64,
    pub heat_capacity: f64,
    pub heat_capacity_fd: f64,
}

impl DerivativeCheck {
    pub fn entropy_error(&self) -> f64 {
        (self.entropy - self.entropy_fd).abs() / self.entropy.abs()
    }

    /// Heat-capacity error relative to `max(|C|, |S|)`; both share units and
    /// C vanishes exponentially at high temperature while S does not.
    pub fn heat_capacity_error(&self) -> f64 {
        let scale = self.heat_capacity.abs().max(self.entropy.abs());
        (self.heat_capacity - self.heat_capacity_fd).abs() / scale
    }
}

/// Compares the term-by-term derivatives with five-point central
/// differences: `R′` against differences of `R`, and `R″` against
/// differences of the analytic `R′`. Differencing `R` twice would amplify
/// the rounding left by the black-body cancellation by `1/h²`.
pub fn derivative_check(beta_tilde: f64, ctl: &SeriesControl) -> Result<DerivativeCheck> {
    check_floor(beta_tilde)?;
    let parts = |bt: f64| -> Result<(f64, f64, f64)> { Ok(renormalized_parts(&bracket_unchecked(bt, ctl)?, bt)) };
    let h = beta_tilde * 1e-3;
    let stencil = |f: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
        Ok((-f(beta_tilde + 2.0 * h)? + 8.0 * f(beta_tilde + h)? - 8.0 * f(beta_tilde - h)? + f(beta_tilde - 2.0 * h)?)
            / (12.0 * h))
    };
    let d1 = stencil(&|bt| Ok(parts(bt)?.0))?;
    let d2 = stencil(&|bt| Ok(parts(bt)?.1))?;
    let (r0, _, _) = parts(beta_tilde)?;
    let analytic = scaled_corrections(beta_tilde, ctl)?;
    let fd = ScaledCorrections::from_renormalized(r0, d1, d2, beta_tilde);
    Ok(DerivativeCheck {
        entropy: analytic.entropy,
        entropy_fd: fd.entropy,
        heat_capacity: analytic.heat_capacity,
        heat_capacity_fd: fd.heat_capacity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoReport {
    pub point: ThermalPoint,
    pub sqrt_det_neg: f64,
    pub energy: EnergyReport,
    pub proper: ProperCorrections,
    pub scaled: ScaledCorrections,
    /// `F = E_z + √(−g)·Δ_T F_p`.
    pub free_energy: f64,
    /// `U = E_z + √(−g)·Δ_T U_p`.
    pub internal_energy: f64,
    /// `S = −∂F/∂T_p`.
    pub entropy: f64,
    /// `C_V = ∂U/∂T_p`.
    pub heat_capacity: f64,
    /// Black-body free energy removed by the renormalization, with the
    /// determinant factor.
    pub blackbody_free_energy: f64,
}

impl ThermoReport {
    /// `|U − F − T_p S|` relative to the largest of the three terms. `U`
    /// alone is not a usable scale: it tends to zero at high temperature.
    pub fn identity_residual(&self) -> f64 {
        let ts = self.point.proper_temperature * self.entropy;
        let scale = self.internal_energy.abs().max(self.free_energy.abs()).max(ts.abs());
        (self.internal_energy - self.free_energy - ts).abs() / scale
    }
}

/// Full thermodynamics at one temperature. The term-by-term derivatives are
/// cross-checked against finite differences on every call.
pub fn thermodynamics(system: &PlateSystem, point: &ThermalPoint, ctl: &SeriesControl) -> Result<ThermoReport> {
    let bt = point.beta_tilde;
    let scaled = scaled_corrections(bt, ctl)?;
    let check = derivative_check(bt, ctl)?;
    if check.entropy_error() > DERIVATIVE_CHECK_TOL || check.heat_capacity_error() > DERIVATIVE_CHECK_TOL {
        return Err(Error::Consistency(format!(
            "analytic and finite-difference derivatives disagree at beta_tilde = {bt}: {check:?}"
        )));
    }
    let geom = &system.geometry;
    let proper = scaled.to_proper(geom);
    let root = system.sqrt_det_neg();
    let e_z = system.energy.e_z;
    Ok(ThermoReport {
        point: *point,
        sqrt_det_neg: root,
        energy: system.energy,
        proper,
        scaled,
        free_energy: e_z + root * proper.free_energy,
        internal_energy: e_z + root * proper.internal_energy,
        entropy: root * proper.entropy,
        heat_capacity: root * proper.heat_capacity,
        blackbody_free_energy: root * blackbody_free_energy(point.proper_temperature, geom.volume),
    })
}

/// Least-squares slope of `ln|Δ_T F_p|` against `ln(1/β̃)` on `samples`
/// log-spaced points of `[from, to]` (values of `1/β̃`).
pub fn high_temperature_exponent(from: f64, to: f64, samples: usize, ctl: &SeriesControl) -> Result<f64> {
    if !(to > from && from > 0.0) || samples < 2 {
        return Err(Error::InvalidInput("need 0 < from < to and at least two samples".into()));
    }
    let mut pts = Vec::with_capacity(samples);
    for i in 0..samples {
        let tau = from * (to / from).powf(i as f64 / (samples - 1) as f64);
        let f = scaled_corrections(1.0 / tau, ctl)?.free_energy;
        pts.push((tau.ln(), f.abs().ln()));
    }
    let n = samples as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CavitySpec;
    use crate::metric::MetricModel;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    fn flat_system() -> PlateSystem {
        PlateSystem::new(MetricModel::minkowski(), CavitySpec::unit_square(1.0).unwrap()).unwrap()
    }

    #[test]
    fn zeta_constants() {
        assert!((ZETA4 - PI.powi(4) / 90.0).abs() < 1e-15);
        let direct = (1..200_000).map(|m| (m as f64).powi(-3)).sum_with_accumulator::<Sum2<_>>();
        assert!((ZETA3 - direct - zeta3_tail(200_000)).abs() < 1e-15);
    }

    #[test]
    fn tail_formula_matches_direct_summation() {
        for n in [11usize, 24, 25, 57, 400] {
            let partial = (n..2_000_000).map(|m| (m as f64).powi(-3)).sum_with_accumulator::<Sum2<_>>();
            let direct = partial + zeta3_tail(2_000_000);
            let tail = zeta3_tail(n);
            assert!((tail - direct).abs() < 4e-16 + 1e-15 * tail, "n = {n}");
            let switch = ZETA3 - (1..n).map(|m| (m as f64).powi(-3)).sum_with_accumulator::<Sum2<_>>();
            assert!((tail - switch).abs() < 4e-16, "n = {n}");
        }
    }

    #[test]
    fn term_derivatives_match_finite_differences() {
        for x in [0.01, 0.1, 0.5, 1.3, 4.0] {
            let h = x * 1e-4;
            let (_, g1, g2) = term(x);
            let f = |y| term(y).0;
            let d1 = (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
            let f1 = |y| term(y).1;
            let d2 = (f1(x - 2.0 * h) - 8.0 * f1(x - h) + 8.0 * f1(x + h) - f1(x + 2.0 * h)) / (12.0 * h);
            assert!((g1 - d1).abs() < 1e-8 * g1.abs(), "x = {x}");
            assert!((g2 - d2).abs() < 1e-8 * g2.abs(), "x = {x}");
        }
    }

    #[test]
    fn large_beta_tilde_reduces_to_zeta3() {
        let bt = 50.0;
        let b = bracket_sum(bt, &ctl()).unwrap();
        let expected = ZETA3 / bt.powi(3);
        assert!((b - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn floor_is_enforced() {
        assert!(matches!(bracket_sum(0.009, &ctl()), Err(Error::AccuracyFloor { .. })));
        assert!(matches!(bracket_sum(f64::NAN, &ctl()), Err(Error::AccuracyFloor { .. })));
        assert!(bracket_sum(BETA_TILDE_FLOOR, &ctl()).is_ok());
    }

    #[test]
    fn default_control_covers_the_floor() {
        // 500 explicit terms reach πmβ̃ ≈ 15.7 at the floor; the remainder
        // bound is far below tolerance
        let b = bracket(BETA_TILDE_FLOOR, &ctl()).unwrap();
        assert_eq!(b.explicit_terms, 500);
        assert!(b.remainder_bound < 1e-16 * b.value);
        let long = bracket(BETA_TILDE_FLOOR, &SeriesControl::new(5000, 1e-16).unwrap()).unwrap();
        assert!((b.value - long.value).abs() < 1e-15 * long.value);
    }

    #[test]
    fn too_few_terms_is_an_error() {
        let r = bracket_sum(0.05, &SeriesControl::new(3, 1e-16).unwrap());
        assert!(matches!(r, Err(Error::SeriesTruncation { terms: 3, .. })));
    }

    #[test]
    fn truncation_soundness() {
        for bt in [0.1, 0.2, 0.5, 1.0, 3.0] {
            let a = proper_corrections(bt, &ProperGeometry::unit(), &SeriesControl::new(500, 1e-16).unwrap()).unwrap();
            let b = proper_corrections(bt, &ProperGeometry::unit(), &SeriesControl::new(1000, 1e-16).unwrap()).unwrap();
            for (x, y) in [
                (a.free_energy, b.free_energy),
                (a.internal_energy, b.internal_energy),
                (a.entropy, b.entropy),
                (a.heat_capacity, b.heat_capacity),
            ] {
                assert!((x - y).abs() <= 1e-12 * y.abs());
            }
        }
    }

    #[test]
    fn low_temperature_closed_form() {
        // exponential corrections are O(e^{-2π β̃}) ≈ 5e-28 at β̃ = 10
        let geom = ProperGeometry::new(1.3, 0.7).unwrap();
        let bt = 10.0;
        let tp = 1.0 / (2.0 * bt * geom.length);
        let f = thermal_free_energy_renormalized(bt, &geom, &ctl()).unwrap();
        let closed = -ZETA3 * geom.area * tp.powi(3) / (4.0 * PI) + PI * PI * geom.volume * tp.powi(4) / 90.0;
        assert!((f - closed).abs() < 1e-13 * closed.abs());
    }

    #[test]
    fn raw_minus_asymptotic_is_renormalized() {
        let geom = ProperGeometry::new(0.9, 1.7).unwrap();
        for bt in [0.05, 0.3, 2.0] {
            let tp = 1.0 / (2.0 * bt * geom.length);
            let raw = thermal_free_energy_raw(1.0, &geom, bt, &ctl()).unwrap();
            let asym = asymptotic_expansion(&geom, tp);
            let ren = thermal_free_energy_renormalized(bt, &geom, &ctl()).unwrap();
            let scale = raw.abs() + asym.t4.abs() + asym.t3.abs();
            assert!((raw - asym.t4 - asym.t3 - ren).abs() < 1e-13 * scale);
        }
    }

    #[test]
    fn blackbody_and_asymptotic_terms() {
        let bb = blackbody_free_energy(1.0, 1.0);
        assert!((bb + 0.109_662_271_1).abs() < 1e-10);
        assert!((blackbody_free_energy(2.0, 1.0) - 16.0 * bb).abs() < 1e-15);
        let terms = asymptotic_expansion(&ProperGeometry::unit(), 1.0);
        assert_eq!(terms.t4, -PI * PI / 90.0);
        assert_eq!(terms.t4, blackbody_free_energy(1.0, 1.0));
        let cold = asymptotic_expansion(&ProperGeometry::unit(), 1e-9);
        assert!(cold.t4.abs() < 1e-30 && cold.t3.abs() < 1e-20);
    }

    #[test]
    fn thermodynamic_identity_and_sign() {
        let sys = flat_system();
        for tau in [0.05, 0.3, 0.628, 1.0, 2.5, 5.0] {
            let p = ThermalPoint::from_beta_tilde(&sys, 1.0 / tau).unwrap();
            let r = thermodynamics(&sys, &p, &ctl()).unwrap();
            assert!(r.identity_residual() < 1e-14, "tau = {tau}");
            assert!(r.entropy >= 0.0);
        }
    }

    #[test]
    fn thermal_point_conversions() {
        let sys = PlateSystem::new(
            MetricModel::constant("c", [4.0, -1.0, -1.0, -2.25, 0.0]),
            CavitySpec::unit_square(2.0).unwrap(),
        )
        .unwrap();
        // L_p = 2·1.5 = 3, T_p = T/2
        let p = ThermalPoint::from_coordinate(&sys, 1.0).unwrap();
        assert_eq!(p.proper_temperature, 0.5);
        assert!((p.beta_tilde - 1.0 / 3.0).abs() < 1e-16);
        assert!((p.beta_tilde * 2.0 * p.proper_temperature * 3.0 - 1.0).abs() < 1e-15);
        let q = ThermalPoint::from_proper(&sys, 0.5).unwrap();
        assert_eq!(q.temperature, 1.0);
        let r = ThermalPoint::from_beta_tilde(&sys, p.beta_tilde).unwrap();
        assert!((r.temperature - 1.0).abs() < 1e-15);
        assert!(ThermalPoint::from_proper(&sys, 0.0).is_err());
    }

    #[test]
    fn derivative_check_at_the_floor() {
        let c = derivative_check(BETA_TILDE_FLOOR, &ctl()).unwrap();
        assert!(c.entropy_error() < DERIVATIVE_CHECK_TOL);
        assert!(c.heat_capacity_error() < DERIVATIVE_CHECK_TOL);
    }
}
