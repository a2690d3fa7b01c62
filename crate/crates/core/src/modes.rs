//! Confined scalar modes `sin(nπz/L)·exp(−iωt + i kx x + i ky y)·f(z)` with
//! the metric frozen at its z = 0 value.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::metric::MetricComponents;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub n: u32,
    pub kx: f64,
    pub ky: f64,
}

impl ModeSpec {
    pub fn new(n: u32, kx: f64, ky: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("mode index n must be >= 1".into()));
        }
        Ok(ModeSpec { n, kx, ky })
    }

    /// Longitudinal wave number `nπ/L`.
    pub fn kz(&self, separation: f64) -> f64 {
        f64::from(self.n) * PI / separation
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeData {
    pub omega: f64,
    pub norm_sq: f64,
    /// Coefficient `q` in the longitudinal phase `f(z) = exp(i q z)`.
    pub phase_rate: f64,
}

/// `ω_n = √(g^33² / (g^03² − g^00 g^33)) · √((g^11/g^33) kx² + (g^22/g^33) ky² + (nπ/L)²)`.
pub fn mode_frequency(c: &MetricComponents, separation: f64, mode: &ModeSpec) -> Result<f64> {
    if !(separation > 0.0) {
        return Err(Error::InvalidInput(format!("separation must be positive, got {separation}")));
    }
    let inv = c.inverse();
    let radicand = inv.g03 * inv.g03 - inv.g00 * inv.g33;
    if !(radicand > 0.0) {
        return Err(Error::InvalidMetric { z: 0.0, condition: "g^03² − g^00·g^33 > 0" });
    }
    let prefactor = (inv.g33 * inv.g33 / radicand).sqrt();
    let kz = mode.kz(separation);
    let wave = inv.g11 / inv.g33 * mode.kx * mode.kx + inv.g22 / inv.g33 * mode.ky * mode.ky + kz * kz;
    Ok(prefactor * wave.sqrt())
}

/// `N² = g00·√(−g00 g11 g22 g33) / (−g·(2π)²·L·ω)`.
pub fn mode_norm_sq(c: &MetricComponents, separation: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
    }
    let numerator = c.g00 * (-c.g00 * c.g11 * c.g22 * c.g33).sqrt();
    Ok(numerator / (c.det_neg() * (2.0 * PI).powi(2) * separation * omega))
}

/// `ω·g^03/g^33`; zero for static metrics.
pub fn mode_phase_rate(c: &MetricComponents, omega: f64) -> f64 {
    let inv = c.inverse();
    omega * inv.g03 / inv.g33
}

pub fn mode_data(c: &MetricComponents, separation: f64, mode: &ModeSpec) -> Result<ModeData> {
    let omega = mode_frequency(c, separation, mode)?;
    Ok(ModeData { omega, norm_sq: mode_norm_sq(c, separation, omega)?, phase_rate: mode_phase_rate(c, omega) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rotating() -> MetricComponents {
        MetricComponents::new(2.0, -1.0, -1.0, -1.0, 1.0).unwrap()
    }

    #[test]
    fn flat_dispersion() {
        let flat = MetricComponents::minkowski();
        let w = mode_frequency(&flat, PI, &ModeSpec::new(1, 0.0, 0.0).unwrap()).unwrap();
        assert!((w - 1.0).abs() < 1e-15);
        for (n, kx, ky, l) in [(1, 0.3, -2.0, 1.0), (4, 1.5, 0.0, 0.7), (2, -3.0, 4.0, 2.5)] {
            let m = ModeSpec::new(n, kx, ky).unwrap();
            let expected = (kx * kx + ky * ky + m.kz(l).powi(2)).sqrt();
            let w = mode_frequency(&flat, l, &m).unwrap();
            assert!((w - expected).abs() < 1e-14 * expected);
        }
    }

    #[test]
    fn rotating_frequency_closed_form() {
        // g^μν = (1/3, −1, −1, −2/3, 1/3): prefactor √((4/9)/(1/9 + 2/9)) = √(4/3)
        let w = mode_frequency(&rotating(), 1.0, &ModeSpec::new(1, 0.0, 0.0).unwrap()).unwrap();
        assert!((w - (4.0f64 / 3.0).sqrt() * PI).abs() < 1e-14);
    }

    #[test]
    fn normalization_examples() {
        let flat = MetricComponents::minkowski();
        let four_pi_sq = (2.0 * PI).powi(2);
        assert!((mode_norm_sq(&flat, 1.0, 1.0).unwrap() - 1.0 / four_pi_sq).abs() < 1e-17);
        assert!((mode_norm_sq(&flat, 2.0, 1.0).unwrap() - 0.5 / four_pi_sq).abs() < 1e-17);
        let expected = 2.0 * 2f64.sqrt() / (3.0 * four_pi_sq);
        assert!((mode_norm_sq(&rotating(), 1.0, 1.0).unwrap() - expected).abs() < 1e-16);
        assert!(mode_norm_sq(&flat, 1.0, 0.0).is_err());
    }

    #[test]
    fn phase_rate_examples() {
        assert_eq!(mode_phase_rate(&MetricComponents::minkowski(), 5.0), 0.0);
        assert!((mode_phase_rate(&rotating(), 1.0) + 0.5).abs() < 1e-15);
        let s = MetricComponents::new(1.3, -0.8, -1.1, -0.9, 0.0).unwrap();
        assert_eq!(mode_phase_rate(&s, 2.7), 0.0);
    }

    #[test]
    fn zero_index_rejected() {
        assert!(ModeSpec::new(0, 0.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn frequency_monotone(
            g00 in 0.1f64..3.0, g11 in -3.0f64..-0.1, g22 in -3.0f64..-0.1,
            g33 in -3.0f64..-0.1, g03 in -2.0f64..2.0,
            n in 1u32..20, kx in 0.0f64..10.0, ky in 0.0f64..10.0, dk in 0.01f64..1.0,
        ) {
            let c = MetricComponents::new(g00, g11, g22, g33, g03).unwrap();
            let w = |n, kx, ky| mode_frequency(&c, 1.3, &ModeSpec { n, kx, ky }).unwrap();
            let base = w(n, kx, ky);
            prop_assert!(base > 0.0);
            prop_assert!(w(n + 1, kx, ky) > base);
            prop_assert!(w(n, kx + dk, ky) > base);
            prop_assert!(w(n, -(kx + dk), ky) > base);
            prop_assert!(w(n, kx, ky + dk) > base);
            let d = mode_data(&c, 1.3, &ModeSpec { n, kx, ky }).unwrap();
            prop_assert!(d.norm_sq > 0.0);
        }
    }
}
