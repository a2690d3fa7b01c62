//! One-dimensional quadrature: globally adaptive Gauss–Kronrod (7, 15) with a
//! fixed composite Simpson rule as fallback and cross-check.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Number of nodes of the fixed fallback rule.
pub const FIXED_POINTS: usize = 1025;

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_segments: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-12, rel: 1e-10, max_segments: 2000 }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment { a, b, value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// Globally adaptive integration of `f` over `[a, b]`. Never panics on
/// non-convergence; inspect [`QuadResult::converged`].
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: &Tolerance) -> QuadResult {
    if a == b {
        return QuadResult { value: 0.0, error: 0.0, evaluations: 0, converged: true };
    }
    let mut segments = vec![gk15(&mut f, a, b)];
    let mut evaluations = 15;
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let target = tol.abs.max(tol.rel * value.abs());
        if !value.is_finite() {
            return QuadResult { value, error, evaluations, converged: false };
        }
        if error <= target || segments.len() >= tol.max_segments {
            return QuadResult { value, error, evaluations, converged: error <= target };
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segments.push(gk15(&mut f, s.a, mid));
        segments.push(gk15(&mut f, mid, s.b));
        evaluations += 30;
    }
}

/// Composite Simpson rule on `points` equally spaced nodes (`points` odd).
pub fn simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, points: usize) -> f64 {
    assert!(points >= 3 && points % 2 == 1, "Simpson needs an odd node count >= 3");
    let n = points - 1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// Adaptive integration cross-checked against the fixed 1025-node rule.
/// If the adaptive pass does not converge the fixed result is returned.
/// Disagreement beyond `cross_check_rel` is an error.
pub fn integrate_checked<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: &Tolerance,
    cross_check_rel: f64,
) -> Result<f64> {
    let adaptive = adaptive(&mut f, a, b, tol);
    let fixed = simpson(&mut f, a, b, FIXED_POINTS);
    if !fixed.is_finite() {
        return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
    }
    if !adaptive.converged {
        return Ok(fixed);
    }
    let diff = (adaptive.value - fixed).abs();
    if diff > cross_check_rel * adaptive.value.abs() + tol.abs {
        return Err(Error::Quadrature(format!(
            "adaptive ({}) and fixed ({}) rules disagree on [{a}, {b}]",
            adaptive.value, fixed
        )));
    }
    Ok(adaptive.value)
}
