//! Direct quadrature of the black-body free energy
//! `F = V·T ∫ d³k/(2π)³ ln(1 − e^{−|k|/T})` in spherical coordinates.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive, Tolerance};

/// Radial cutoff in units of `T`; the integrand is below `e^{−60}` beyond it.
const RADIAL_CUTOFF: f64 = 60.0;

pub fn blackbody_free_energy_quadrature(temperature: f64, volume: f64) -> Result<f64> {
    if !(temperature > 0.0 && volume > 0.0) {
        return Err(Error::InvalidInput("temperature and volume must be positive".into()));
    }
    let tol = Tolerance::new(0.0, 1e-12);
    let mut failed = false;
    let mut radial = |k: f64| {
        if k == 0.0 {
            return 0.0;
        }
        // ln(1 − e^{−x}) without cancellation at small x
        let log = (-(-k / temperature).exp_m1()).ln();
        let mut polar = |_cos_theta: f64| {
            let azimuthal = adaptive(|_phi| k * k * log, 0.0, 2.0 * PI, &tol);
            failed |= !azimuthal.converged;
            azimuthal.value
        };
        let inner = adaptive(&mut polar, -1.0, 1.0, &tol);
        failed |= !inner.converged;
        inner.value
    };
    let outer = adaptive(&mut radial, 0.0, RADIAL_CUTOFF * temperature, &tol);
    if failed || !outer.converged {
        return Err(Error::Quadrature("black-body integral did not converge".into()));
    }
    Ok(volume * temperature * outer.value / (2.0 * PI).powi(3))
}
