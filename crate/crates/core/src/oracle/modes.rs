//! Brute-force checks of the confined mode solutions for constant metrics.
//!
//! The inverse metric is obtained here by numerical 4×4 inversion rather
//! than from the closed forms in [`crate::metric`]. Modes are written with
//! the sine anchored on the plates,
//! `φ = N·sin(nπ(z + L/2)/L)·e^{iqz}·e^{−iωt + i kx x + i ky y}`.
//!
//! The scalar product uses the surface measure `√g_s` with `g_s = −g/g00`
//! and the unit normal `n^μ = g^{μ0}/√g^00`:
//!
//! ```text
//! (φ₁, φ₂) = i ∫ d³x √g_s n^μ (φ₁* ∂_μ φ₂ − φ₂ ∂_μ φ₁*)
//! ```
//!
//! For a constant metric `√g_s n^μ` is a constant multiple of the conserved
//! Klein–Gordon current density, so distinct frequencies are orthogonal.
//! Continuum normalization `δ²(k − k')` corresponds to a finite box of area
//! `A` carrying the factor `(2π)²/A`.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::metric::MetricComponents;
use crate::modes::{mode_data, ModeData, ModeSpec};
use crate::quadrature::{adaptive, Tolerance};

/// Transverse nodes per direction for the periodic trapezoid rule.
const TRANSVERSE_NODES: usize = 8;
/// Interior points sampled by the PDE residual.
pub const PDE_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy)]
pub struct ModeField {
    pub mode: ModeSpec,
    pub data: ModeData,
    pub separation: f64,
}

/// Field value and its first and second partial derivatives at a point,
/// indexed as (t, x, y, z).
struct Jet {
    value: Complex64,
    d1: [Complex64; 4],
    d2: [[Complex64; 4]; 4],
}

impl ModeField {
    pub fn new(c: &MetricComponents, separation: f64, mode: ModeSpec) -> Result<Self> {
        Ok(ModeField { mode, data: mode_data(c, separation, &mode)?, separation })
    }

    pub fn value(&self, p: [f64; 4]) -> Complex64 {
        self.jet(p).value
    }

    fn jet(&self, [t, x, y, z]: [f64; 4]) -> Jet {
        let i = Complex64::i();
        let kappa = self.mode.kz(self.separation);
        let arg = kappa * (z + 0.5 * self.separation);
        let (s, c) = arg.sin_cos();
        let q = self.data.phase_rate;
        let w = self.data.omega;
        let phase =
            Complex64::from_polar(self.data.norm_sq.sqrt(), -w * t + self.mode.kx * x + self.mode.ky * y + q * z);
        let value = phase * s;
        // constant wave numbers in t, x, y; z carries the sine
        let k = [-i * w, i * self.mode.kx, i * self.mode.ky];
        let dz = phase * (i * q * s + kappa * c);
        let dzz = phase * ((-q * q - kappa * kappa) * s + 2.0 * i * q * kappa * c);
        let mut d1 = [Complex64::new(0.0, 0.0); 4];
        let mut d2 = [[Complex64::new(0.0, 0.0); 4]; 4];
        for a in 0..3 {
            d1[a] = k[a] * value;
            for b in 0..3 {
                d2[a][b] = k[a] * k[b] * value;
            }
            d2[a][3] = k[a] * dz;
            d2[3][a] = d2[a][3];
        }
        d1[3] = dz;
        d2[3][3] = dzz;
        Jet { value, d1, d2 }
    }
}

fn numeric_inverse(c: &MetricComponents) -> Result<Matrix4<f64>> {
    let m = c.to_matrix();
    Matrix4::from_fn(|i, j| m[i][j]).try_inverse().ok_or_else(|| Error::Oracle("metric matrix is singular".into()))
}

fn require_constant_valid(c: &MetricComponents) -> Result<()> {
    MetricComponents::new(c.g00, c.g11, c.g22, c.g33, c.g03).map(|_| ())
}

/// Largest relative residual of `g^{μν}∂_μ∂_ν φ` over quasi-random interior
/// points, each normalized by `Σ |g^{μν}| |∂_μ∂_ν φ|`.
pub fn pde_residual(c: &MetricComponents, separation: f64, mode: ModeSpec) -> Result<f64> {
    require_constant_valid(c)?;
    let inv = numeric_inverse(c)?;
    let field = ModeField::new(c, separation, mode)?;
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut worst: f64 = 0.0;
    for j in 1..=PDE_SAMPLES {
        let u = |k: f64| (j as f64 * phi * k).fract();
        let p = [3.0 * u(1.0), 2.0 * u(2.0) - 1.0, 2.0 * u(3.0) - 1.0, separation * (u(5.0) - 0.5)];
        let jet = field.jet(p);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let term = inv[(a, b)] * jet.d2[a][b];
                sum += term;
                scale += term.norm();
            }
        }
        if scale > 0.0 {
            worst = worst.max(sum.norm() / scale);
        }
    }
    Ok(worst)
}

/// Values at both plates, which must vanish.
pub fn boundary_values(c: &MetricComponents, separation: f64, mode: ModeSpec) -> Result<[f64; 2]> {
    let field = ModeField::new(c, separation, mode)?;
    let h = 0.5 * separation;
    Ok([field.value([0.7, 0.3, -0.2, -h]).norm(), field.value([0.7, 0.3, -0.2, h]).norm()])
}

fn box_length(k: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        2.0 * PI / k.abs()
    }
}

/// Scalar product of two modes sharing the same transverse wave numbers,
/// over one transverse period, at time `t`.
pub fn scalar_product(c: &MetricComponents, separation: f64, a: ModeSpec, b: ModeSpec, t: f64) -> Result<Complex64> {
    require_constant_valid(c)?;
    if a.kx != b.kx || a.ky != b.ky {
        return Err(Error::Oracle("scalar product needs matching transverse wave numbers".into()));
    }
    let inv = numeric_inverse(c)?;
    let g_s = c.det_neg() / c.g00;
    let g00_up = inv[(0, 0)];
    let weight: [f64; 4] = std::array::from_fn(|mu| g_s.sqrt() * inv[(mu, 0)] / g00_up.sqrt());
    let fa = ModeField::new(c, separation, a)?;
    let fb = ModeField::new(c, separation, b)?;
    let (lx, ly) = (box_length(a.kx), box_length(a.ky));
    let h = 0.5 * separation;
    let tol = Tolerance::new(1e-15, 1e-13);
    let mut total = Complex64::new(0.0, 0.0);
    let cell = lx * ly / (TRANSVERSE_NODES * TRANSVERSE_NODES) as f64;
    for ix in 0..TRANSVERSE_NODES {
        let x = lx * ix as f64 / TRANSVERSE_NODES as f64;
        for iy in 0..TRANSVERSE_NODES {
            let y = ly * iy as f64 / TRANSVERSE_NODES as f64;
            let density = |z: f64| {
                let ja = fa.jet([t, x, y, z]);
                let jb = fb.jet([t, x, y, z]);
                let mut acc = Complex64::new(0.0, 0.0);
                for (mu, w) in weight.iter().enumerate() {
                    acc += w * (ja.value.conj() * jb.d1[mu] - jb.value * ja.d1[mu].conj());
                }
                Complex64::i() * acc
            };
            let re = adaptive(|z| density(z).re, -h, h, &tol);
            let im = adaptive(|z| density(z).im, -h, h, &tol);
            if !(re.converged && im.converged) {
                return Err(Error::Quadrature("scalar product z-integral did not converge".into()));
            }
            total += cell * Complex64::new(re.value, im.value);
        }
    }
    Ok(total)
}

/// `|(φ, φ)·(2π)²/A − 1|` for the normalized mode.
pub fn mode_norm_check(c: &MetricComponents, separation: f64, mode: ModeSpec) -> Result<f64> {
    let p = scalar_product(c, separation, mode, mode, 0.0)?;
    let area = box_length(mode.kx) * box_length(mode.ky);
    Ok((p * (2.0 * PI).powi(2) / area - 1.0).norm())
}

/// Box-normalized overlap of two modes differing only in `n`.
pub fn orthogonality_check(c: &MetricComponents, separation: f64, a: ModeSpec, b: ModeSpec) -> Result<f64> {
    let p = scalar_product(c, separation, a, b, 0.3)?;
    let area = box_length(a.kx) * box_length(a.ky);
    Ok((p * (2.0 * PI).powi(2) / area).norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeResiduals {
    pub pde: f64,
    pub norm: f64,
    pub orthogonality: f64,
    pub boundary: f64,
}

impl ModeResiduals {
    pub fn worst(&self) -> f64 {
        self.pde.max(self.norm).max(self.orthogonality).max(self.boundary)
    }
}

/// All mode checks over a small fixed set of modes.
pub fn mode_residuals(c: &MetricComponents, separation: f64) -> Result<ModeResiduals> {
    let modes = [ModeSpec::new(1, 0.0, 0.0)?, ModeSpec::new(2, 1.5, 0.0)?, ModeSpec::new(3, 0.7, -2.0)?];
    let mut r = ModeResiduals { pde: 0.0, norm: 0.0, orthogonality: 0.0, boundary: 0.0 };
    for m in modes {
        r.pde = r.pde.max(pde_residual(c, separation, m)?);
        r.norm = r.norm.max(mode_norm_check(c, separation, m)?);
        let [lo, hi] = boundary_values(c, separation, m)?;
        r.boundary = r.boundary.max(lo).max(hi);
        let other = ModeSpec::new(m.n + 1, m.kx, m.ky)?;
        r.orthogonality = r.orthogonality.max(orthogonality_check(c, separation, m, other)?);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotating() -> MetricComponents {
        MetricComponents::new(2.0, -1.0, -1.0, -1.0, 1.0).unwrap()
    }

    #[test]
    fn minkowski_ground_mode_is_unit_normalized() {
        let m = ModeSpec::new(1, 0.0, 0.0).unwrap();
        assert!(mode_norm_check(&MetricComponents::minkowski(), 1.0, m).unwrap() < 1e-8);
    }

    #[test]
    fn stationary_ground_mode_is_unit_normalized() {
        let m = ModeSpec::new(1, 0.0, 0.0).unwrap();
        assert!(mode_norm_check(&rotating(), 1.0, m).unwrap() < 1e-8);
    }

    #[test]
    fn pde_residual_is_at_rounding_level() {
        for c in [MetricComponents::minkowski(), rotating()] {
            let m = ModeSpec::new(1, 0.0, 0.0).unwrap();
            assert!(pde_residual(&c, 1.0, m).unwrap() < 1e-10);
        }
    }

    #[test]
    fn wrong_frequency_is_detected() {
        let c = rotating();
        let m = ModeSpec::new(1, 0.0, 0.0).unwrap();
        let mut field = ModeField::new(&c, 1.0, m).unwrap();
        field.data.omega *= 1.01;
        let jet = field.jet([0.1, 0.2, 0.3, 0.1]);
        let inv = numeric_inverse(&c).unwrap();
        let mut sum = Complex64::new(0.0, 0.0);
        for a in 0..4 {
            for b in 0..4 {
                sum += inv[(a, b)] * jet.d2[a][b];
            }
        }
        assert!(sum.norm() > 1e-3);
    }

    #[test]
    fn distinct_levels_are_orthogonal() {
        for c in [MetricComponents::minkowski(), rotating()] {
            let a = ModeSpec::new(1, 0.0, 0.0).unwrap();
            let b = ModeSpec::new(2, 0.0, 0.0).unwrap();
            assert!(orthogonality_check(&c, 1.0, a, b).unwrap() < 1e-10);
        }
    }

    #[test]
    fn full_residual_set() {
        for c in [MetricComponents::minkowski(), rotating()] {
            let r = mode_residuals(&c, 1.3).unwrap();
            assert!(r.worst() < 1e-8, "{r:?}");
        }
    }
}
