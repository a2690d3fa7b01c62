//! Extended-precision evaluation of the thermal bracket, independent of the
//! double-precision series in [`crate::thermal`].
//!
//! Terms are evaluated exactly (`cosh/sinh` at the working precision) until
//! their exponential part drops below the working precision; from there on
//! they are summed as `1/(mβ̃)³` up to `max_terms`, and the remaining
//! `Σ_{m>max_terms} m⁻³` is taken from its Euler–Maclaurin expansion. The
//! reported bound adds the first omitted Euler–Maclaurin term to a bound on
//! the exponential parts that were dropped.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// `(2k+1)·B_{2k}/2` for k = 1..=5, as (numerator, denominator).
const EM_COEFFS: [(i64, u64); 5] = [(1, 4), (-1, 12), (1, 12), (-3, 20), (5, 12)];
/// |13·B_12/2| = 8983/5460, bounding the first omitted term.
const EM_BOUND: (u64, u64) = (8983, 5460);

pub const MIN_DIGITS: usize = 30;
pub const MIN_TERMS: usize = 100_000;

/// Working context: precision and cached constants.
pub struct HighPrecision {
    digits: usize,
    bits: usize,
    consts: Consts,
    pi: BigFloat,
}

#[derive(Debug, Clone)]
pub struct HighPrecisionBracket {
    pub beta_tilde: f64,
    pub digits: usize,
    pub max_terms: usize,
    /// Terms evaluated with their full hyperbolic form.
    pub full_terms: usize,
    pub value: BigFloat,
    pub bound: BigFloat,
}

impl HighPrecision {
    pub fn new(digits: usize) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::Oracle(format!("need at least {MIN_DIGITS} digits, got {digits}")));
        }
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64;
        let mut consts = Consts::new().map_err(|e| Error::Oracle(format!("{e:?}")))?;
        let pi = consts.pi(bits, RM);
        Ok(HighPrecision { digits, bits, consts, pi })
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn pi(&self) -> BigFloat {
        self.pi.clone()
    }

    pub fn from_f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.bits)
    }

    pub fn int(&self, n: u64) -> BigFloat {
        BigFloat::from_u64(n, self.bits)
    }

    fn ratio(&self, num: i64, den: u64) -> BigFloat {
        let n = BigFloat::from_i64(num, self.bits);
        n.div(&self.int(den), self.bits, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.bits, RM)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.consts)
    }

    /// Decimal rendering truncated to the context's significant digits.
    pub fn to_decimal(&mut self, x: &BigFloat) -> Result<String> {
        let s =
            x.format(Radix::Dec, RM, &mut self.consts).map_err(|e| Error::Oracle(format!("format failed: {e:?}")))?;
        Ok(truncate_digits(&s, self.digits))
    }

    pub fn to_f64(&mut self, x: &BigFloat) -> Result<f64> {
        let s = self.to_decimal(x)?;
        s.parse::<f64>().map_err(|e| Error::Oracle(format!("cannot parse '{s}': {e}")))
    }

    /// `Σ_{m≥n} m⁻³` by Euler–Maclaurin, with the magnitude of the first
    /// omitted term.
    fn zeta3_tail(&self, n: u64) -> (BigFloat, BigFloat) {
        let x = self.int(n);
        let inv = self.div(&self.int(1), &x);
        let inv2 = self.mul(&inv, &inv);
        let half = self.ratio(1, 2);
        // 1/(2N²) + 1/(2N³)
        let mut sum = self.mul(&half, &self.add(&inv2, &self.mul(&inv2, &inv)));
        let mut power = self.mul(&inv2, &inv2);
        for &(num, den) in &EM_COEFFS {
            sum = self.add(&sum, &self.mul(&self.ratio(num, den), &power));
            power = self.mul(&power, &inv2);
        }
        let bound = self.mul(&self.ratio(EM_BOUND.0 as i64, EM_BOUND.1), &power);
        (sum, bound)
    }

    /// Bracket at an arbitrary high-precision β̃. `approx` is a double
    /// approximation used only to choose loop limits.
    pub fn bracket_at(
        &mut self,
        beta_tilde: &BigFloat,
        approx: f64,
        max_terms: usize,
    ) -> Result<(BigFloat, BigFloat, usize)> {
        if !(approx > 0.0) {
            return Err(Error::Oracle(format!("beta_tilde must be positive, got {approx}")));
        }
        let two_pi = std::f64::consts::TAU;
        // exponential parts below 2^-(bits+40) relative beyond this index
        let cut = ((self.bits as f64 + 40.0) * std::f64::consts::LN_2 + 10.0) / (two_pi * approx);
        let full_terms = cut.ceil() as usize;
        if full_terms > max_terms {
            return Err(Error::Oracle(format!(
                "non-convergence: {full_terms} exact terms needed but max_terms = {max_terms}"
            )));
        }
        let pi = self.pi();
        let one = self.int(1);
        let mut full = BigFloat::new(self.bits);
        for m in 1..=full_terms as u64 {
            let x = self.mul(&self.int(m), beta_tilde);
            let px = self.mul(&pi, &x);
            let sh = px.sinh(self.bits, RM, &mut self.consts);
            let ch = px.cosh(self.bits, RM, &mut self.consts);
            let x2 = self.mul(&x, &x);
            let x3 = self.mul(&x2, &x);
            let coth_part = self.div(&ch, &self.mul(&sh, &x3));
            let sinh_part = self.div(&pi, &self.mul(&x2, &self.mul(&sh, &sh)));
            full = self.add(&full, &self.add(&coth_part, &sinh_part));
        }
        let mut cubes = BigFloat::new(self.bits);
        for m in (full_terms as u64 + 1)..=(max_terms as u64) {
            let m3 = self.int(m * m * m);
            cubes = self.add(&cubes, &self.div(&one, &m3));
        }
        let (tail, em_bound) = self.zeta3_tail(max_terms as u64 + 1);
        let b3 = self.powi(beta_tilde, 3);
        let value = self.add(&full, &self.div(&self.add(&cubes, &tail), &b3));

        // dropped exponential parts: Σ_{m>M} [(coth−1)/x³ + π/(x² sinh²)]
        // ≤ 2·e^{−2πx}(2/x³ + 4π/x²)/(1 − e^{−2πβ̃}) at x = (M+1)β̃
        let x = self.mul(&self.int(full_terms as u64 + 1), beta_tilde);
        let two_pi_hp = self.mul(&self.int(2), &pi);
        let e = self.exp(&self.mul(&two_pi_hp, &x).neg());
        let ratio = self.exp(&self.mul(&two_pi_hp, beta_tilde).neg());
        let shape = self.add(
            &self.div(&self.int(2), &self.powi(&x, 3)),
            &self.div(&self.mul(&self.int(4), &pi), &self.powi(&x, 2)),
        );
        let exp_bound = self.div(&self.mul(&self.mul(&self.int(2), &e), &shape), &self.sub(&one, &ratio));
        let bound = self.add(&exp_bound, &self.div(&em_bound, &b3));

        let tolerance = self.mul(&value, &self.powi(&self.ratio(1, 10), self.digits));
        if bound.cmp(&tolerance).is_none_or(|c| c > 0) {
            let b = self.to_decimal(&bound)?;
            return Err(Error::Oracle(format!("non-convergence: remainder bound {b} exceeds 1e-{}", self.digits)));
        }
        Ok((value, bound, full_terms))
    }

    /// `π³/(45β̃⁴)`.
    pub fn blackbody_bracket(&self, beta_tilde: &BigFloat) -> BigFloat {
        let pi3 = self.powi(&self.pi, 3);
        self.div(&pi3, &self.mul(&self.int(45), &self.powi(beta_tilde, 4)))
    }

    /// Renormalized bracket `B − π³/(45β̃⁴)`.
    fn renormalized(&mut self, beta_tilde: &BigFloat, approx: f64, max_terms: usize) -> Result<BigFloat> {
        let (b, _, _) = self.bracket_at(beta_tilde, approx, max_terms)?;
        Ok(self.sub(&b, &self.blackbody_bracket(beta_tilde)))
    }

    /// Apéry-type series `ζ(3) = (5/2) Σ (−1)^{k+1} / (k³ C(2k,k))`.
    pub fn zeta3(&self) -> BigFloat {
        let mut sum = BigFloat::new(self.bits);
        let mut binom = self.int(2);
        let terms = (self.bits as f64 / 2.0).ceil() as u64 + 8;
        for k in 1..=terms {
            if k > 1 {
                // C(2k,k) = C(2k−2,k−1)·(2k)(2k−1)/k²
                binom = self.div(&self.mul(&binom, &self.int(2 * k * (2 * k - 1))), &self.int(k * k));
            }
            let term = self.div(&self.int(1), &self.mul(&self.int(k * k * k), &binom));
            sum = if k % 2 == 1 { self.add(&sum, &term) } else { self.sub(&sum, &term) };
        }
        self.mul(&self.ratio(5, 2), &sum)
    }
}

fn truncate_digits(s: &str, digits: usize) -> String {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let mut out = String::new();
    let mut count = 0;
    for ch in mantissa.chars() {
        if ch.is_ascii_digit() {
            if count == digits {
                continue;
            }
            count += 1;
        }
        out.push(ch);
    }
    format!("{out}{exponent}")
}

/// Bracket at a double-precision β̃, taken as exact.
pub fn highprec_thermal_bracket(beta_tilde: f64, digits: usize, max_terms: usize) -> Result<HighPrecisionBracket> {
    if max_terms < MIN_TERMS {
        return Err(Error::Oracle(format!("need max_terms >= {MIN_TERMS}, got {max_terms}")));
    }
    let mut hp = HighPrecision::new(digits)?;
    let bt = hp.from_f64(beta_tilde);
    let (value, bound, full_terms) = hp.bracket_at(&bt, beta_tilde, max_terms)?;
    Ok(HighPrecisionBracket { beta_tilde, digits, max_terms, full_terms, value, bound })
}

/// Thermal oracle output at one β̃. Decimal strings carry the full
/// requested digits; the derivative quantities come from central differences
/// of the renormalized bracket and are reported in double precision.
#[derive(Debug, Clone)]
pub struct HighPrecisionThermal {
    pub beta_tilde: f64,
    pub digits: usize,
    pub max_terms: usize,
    pub full_terms: usize,
    pub bracket: String,
    pub bound: String,
    /// `L_p³/S_p · Δ_T F_p = −(B − π³/(45β̃⁴))/(32π)`.
    pub free_energy_scaled: String,
    /// `L_p²/S_p · Δ_T S_p`.
    pub entropy_scaled: f64,
    /// `L_p²/S_p · Δ_T C_p`.
    pub heat_capacity_scaled: f64,
}

pub fn highprec_thermal(beta_tilde: f64, digits: usize, max_terms: usize) -> Result<HighPrecisionThermal> {
    let HighPrecisionBracket { full_terms, value, bound, .. } =
        highprec_thermal_bracket(beta_tilde, digits, max_terms)?;
    let mut hp = HighPrecision::new(digits)?;
    let bt = hp.from_f64(beta_tilde);
    let r0 = hp.sub(&value, &hp.blackbody_bracket(&bt));
    // step ~ 10^{-digits/3}: truncation h² and rounding 10^{-digits}/h² balance
    let h = hp.mul(&bt, &hp.powi(&hp.ratio(1, 10), digits / 3));
    let rp = hp.renormalized(&hp.add(&bt, &h), beta_tilde, max_terms)?;
    let rm = hp.renormalized(&hp.sub(&bt, &h), beta_tilde, max_terms)?;
    let r1 = hp.div(&hp.sub(&rp, &rm), &hp.mul(&hp.int(2), &h));
    let r2 = hp.div(&hp.add(&hp.sub(&rp, &hp.mul(&hp.int(2), &r0)), &rm), &hp.mul(&h, &h));
    let k = hp.div(&hp.int(1), &hp.mul(&hp.int(32), &hp.pi()));
    let b2 = hp.mul(&bt, &bt);
    let two_k_b2 = hp.mul(&hp.mul(&hp.int(2), &k), &b2);
    let free = hp.mul(&k, &r0).neg();
    let entropy = hp.mul(&two_k_b2, &r1).neg();
    let heat = hp.mul(&two_k_b2, &hp.add(&hp.mul(&hp.int(2), &r1), &hp.mul(&bt, &r2)));
    Ok(HighPrecisionThermal {
        beta_tilde,
        digits,
        max_terms,
        full_terms,
        bracket: hp.to_decimal(&value)?,
        bound: hp.to_decimal(&bound)?,
        free_energy_scaled: hp.to_decimal(&free)?,
        entropy_scaled: hp.to_f64(&entropy)?,
        heat_capacity_scaled: hp.to_f64(&heat)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta3_series_matches_known_digits() {
        let mut hp = HighPrecision::new(50).unwrap();
        let z = hp.zeta3();
        let s = hp.to_decimal(&z).unwrap();
        assert!(s.starts_with("1.2020569031595942853997381615114499907649862923404"), "{s}");
    }

    #[test]
    fn truncation_keeps_exponent() {
        assert_eq!(truncate_digits("1.23456e-3", 3), "1.23e-3");
        assert_eq!(truncate_digits("-9.87654321", 4), "-9.876");
    }

    #[test]
    fn closed_form_at_large_beta_tilde() {
        // B − ζ(3)/β̃³ = Σ_m [2e^{−2πx}/x³ + 4πe^{−2πx}/x²] + O(e^{−4πx})
        let mut hp = HighPrecision::new(50).unwrap();
        let bt = hp.from_f64(10.0);
        let (b, _, _) = hp.bracket_at(&bt, 10.0, MIN_TERMS).unwrap();
        let z = hp.div(&hp.zeta3(), &hp.powi(&bt, 3));
        let pi = hp.pi();
        let mut corr = BigFloat::new(hp.bits);
        for m in 1..=3u64 {
            let x = hp.mul(&hp.int(m), &bt);
            let two_pi_x = hp.mul(&hp.mul(&hp.int(2), &pi), &x);
            let e = hp.exp(&two_pi_x.neg());
            let a = hp.div(&hp.mul(&hp.int(2), &e), &hp.powi(&x, 3));
            let c = hp.div(&hp.mul(&hp.mul(&hp.int(4), &pi), &e), &hp.powi(&x, 2));
            corr = hp.add(&corr, &hp.add(&a, &c));
        }
        let diff = hp.sub(&b, &hp.add(&z, &corr));
        let d = hp.to_f64(&diff).unwrap().abs();
        assert!(d < 1e-45, "difference {d:e}");
        let c = hp.to_f64(&corr).unwrap();
        assert!(c > 1e-31 && c < 1e-28);
    }

    #[test]
    fn rejects_weak_parameters() {
        assert!(highprec_thermal_bracket(1.0, 20, MIN_TERMS).is_err());
        assert!(highprec_thermal_bracket(1.0, 50, 1000).is_err());
    }
}
