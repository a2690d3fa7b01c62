//! Flat-space Casimir energy per unit area from an exponentially cut-off
//! mode sum, extrapolated to zero cutoff.
//!
//! With cutoff `λ`, the energy per area of the Dirichlet modes is
//! `(1/4π) Σ_{n≥1} F(nπ/L)` where
//!
//! ```text
//! F(κ) = ∫₀^∞ k √(k²+κ²) e^{−λ√(k²+κ²)} dk = e^{−λκ} (κ²/λ + 2κ/λ² + 2/λ³).
//! ```
//!
//! The free-space continuum `(L/π) ∫₀^∞ F(κ) dκ = 6L/(πλ⁴)` is subtracted,
//! and so is the single-plate surface term `−F(0)/2 = −1/λ³`, which is
//! independent of `L`. What remains is an even power series in `λ` whose
//! constant term is the renormalized energy.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use accurate::sum::Sum2;
use accurate::traits::*;

/// Polynomial degree of the extrapolation fit.
pub const FIT_DEGREE: usize = 4;
/// Minimum number of cutoff values.
pub const MIN_CUTOFFS: usize = 6;
/// Relative fit residual above which the sweep is flagged.
pub const RESIDUAL_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffSweep {
    pub separation: f64,
    /// Strictly decreasing cutoff lengths.
    pub lambdas: Vec<f64>,
    /// Regularized energy per area at each cutoff.
    pub energies: Vec<f64>,
    /// Boundary sum `(1/4π) Σ F(nπ/L)` at each cutoff.
    pub mode_sums: Vec<f64>,
    /// Continuum `(1/4π)(L/π)∫F` at each cutoff.
    pub continuum: Vec<f64>,
    pub extrapolated: f64,
    /// RMS fit residual relative to `|extrapolated|`.
    pub fit_residual: f64,
    pub flagged: bool,
}

/// Cut-off transverse integral `F(κ)`.
pub fn cutoff_kernel(kappa: f64, lambda: f64) -> f64 {
    (-lambda * kappa).exp() * (kappa * kappa / lambda + 2.0 * kappa / (lambda * lambda) + 2.0 / lambda.powi(3))
}

/// `L·{0.10, 0.09, …, 0.04}`.
pub fn default_lambdas(separation: f64) -> Vec<f64> {
    (4..=10).rev().map(|i| separation * i as f64 / 100.0).collect()
}

fn mode_sum(separation: f64, lambda: f64) -> f64 {
    let a = PI / separation;
    let mut sum = Sum2::zero();
    let mut n = 1u64;
    loop {
        let t = cutoff_kernel(a * n as f64, lambda);
        sum += t;
        // terms decay monotonically once nπλ/L exceeds 2
        if a * n as f64 * lambda > 2.0 && t < 1e-20 * sum.sum() {
            break;
        }
        n += 1;
    }
    sum.sum()
}

pub fn cutoff_casimir_energy_per_area(separation: f64, lambdas: &[f64]) -> Result<CutoffSweep> {
    if !(separation > 0.0) {
        return Err(Error::InvalidInput(format!("separation must be positive, got {separation}")));
    }
    if lambdas.len() < MIN_CUTOFFS {
        return Err(Error::InvalidInput(format!("need at least {MIN_CUTOFFS} cutoff values")));
    }
    if lambdas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidInput("cutoff values must be strictly decreasing".into()));
    }
    if lambdas.iter().any(|&l| !(l > 0.0 && l <= separation / 10.0 * (1.0 + 1e-12))) {
        return Err(Error::InvalidInput("cutoff values must lie in (0, L/10]".into()));
    }
    let norm = 1.0 / (4.0 * PI);
    let mut energies = Vec::with_capacity(lambdas.len());
    let mut mode_sums = Vec::with_capacity(lambdas.len());
    let mut continuum = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let sum = mode_sum(separation, lambda);
        let cont = 6.0 * separation / (PI * lambda.powi(4));
        let surface = 0.5 * cutoff_kernel(0.0, lambda);
        let reg = Sum2::zero() + sum + (-cont) + surface;
        energies.push(norm * reg.sum());
        mode_sums.push(norm * sum);
        continuum.push(norm * cont);
    }

    let scale = lambdas[0];
    let rows = lambdas.len();
    let design = DMatrix::from_fn(rows, FIT_DEGREE + 1, |i, j| (lambdas[i] / scale).powi(j as i32));
    let rhs = DVector::from_column_slice(&energies);
    let coeffs = design
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Oracle(format!("cutoff fit failed: {e}")))?;
    let extrapolated = coeffs[0];
    let residuals = &design * &coeffs - &rhs;
    let rms = (residuals.norm_squared() / rows as f64).sqrt();
    let fit_residual = rms / extrapolated.abs();
    Ok(CutoffSweep {
        separation,
        lambdas: lambdas.to_vec(),
        energies,
        mode_sums,
        continuum,
        extrapolated,
        fit_residual,
        flagged: !(fit_residual <= RESIDUAL_THRESHOLD),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{adaptive, Tolerance};

    fn target(l: f64) -> f64 {
        -PI * PI / (1440.0 * l.powi(3))
    }

    #[test]
    fn kernel_matches_quadrature() {
        for (kappa, lambda) in [(0.0, 0.1), (3.0, 0.05), (10.0, 0.2)] {
            let f = |k: f64| {
                let w = (k * k + kappa * kappa).sqrt();
                k * w * (-lambda * w).exp()
            };
            let q = adaptive(f, 0.0, 2000.0 / lambda.max(0.1), &Tolerance::new(0.0, 1e-13));
            let closed = cutoff_kernel(kappa, lambda);
            assert!((q.value - closed).abs() < 1e-11 * closed, "kappa={kappa} lambda={lambda}");
        }
    }

    #[test]
    fn extrapolates_to_flat_energy() {
        for l in [0.5, 1.0, 2.0] {
            let s = cutoff_casimir_energy_per_area(l, &default_lambdas(l)).unwrap();
            assert!(!s.flagged, "residual {}", s.fit_residual);
            assert!((s.extrapolated - target(l)).abs() < 1e-3 * target(l).abs());
        }
    }

    #[test]
    fn scaling_with_separation() {
        let a = cutoff_casimir_energy_per_area(1.0, &default_lambdas(1.0)).unwrap();
        let b = cutoff_casimir_energy_per_area(2.0, &default_lambdas(2.0)).unwrap();
        assert!((b.extrapolated - a.extrapolated / 8.0).abs() < 1e-6 * a.extrapolated.abs());
    }

    #[test]
    fn pieces_diverge_difference_does_not() {
        let lambdas = [0.1, 0.05, 0.025, 0.0125, 0.01, 0.008];
        let s = cutoff_casimir_energy_per_area(1.0, &lambdas).unwrap();
        for (i, lambda) in lambdas.iter().enumerate() {
            let l4 = lambda.powi(4);
            // each piece ∝ λ⁻⁴ with coefficient 6/(4π²)
            let c = 6.0 / (4.0 * PI * PI);
            assert!((s.continuum[i] * l4 - c).abs() < 1e-12);
            assert!((s.mode_sums[i] * l4 - c).abs() < 0.1 * c);
            // the bare difference is dominated by the surface term −1/(4πλ³)
            let bare = s.mode_sums[i] - s.continuum[i];
            let surface = -1.0 / (4.0 * PI * lambda.powi(3));
            assert!((bare - surface).abs() < 0.01 * surface.abs());
            // the regularized energy stays near the limit
            assert!((s.energies[i] - target(1.0)).abs() < 0.05 * target(1.0).abs());
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(cutoff_casimir_energy_per_area(1.0, &[0.1, 0.09, 0.08]).is_err());
        assert!(cutoff_casimir_energy_per_area(1.0, &[0.2, 0.09, 0.08, 0.07, 0.06, 0.05]).is_err());
        assert!(cutoff_casimir_energy_per_area(1.0, &[0.05, 0.06, 0.07, 0.08, 0.09, 0.1]).is_err());
    }
}
