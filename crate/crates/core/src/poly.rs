//! Dense polynomials in `k` with arbitrary-precision integer coefficients.
//!
//! Index `i` of the coefficient vector holds the coefficient of `k^i`. Trailing
//! zeros are always trimmed, so the zero polynomial is the empty vector.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{MomentError, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// Builds a polynomial from machine integers, lowest degree first.
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The monomial `k^power`.
    pub fn monomial(power: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); power + 1];
        coeffs[power] = BigInt::one();
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `k^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Self::new(coeffs)
    }

    /// Schoolbook convolution.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `self += factor * k^shift * other`, the inner step of the recursion.
    pub fn add_scaled_shifted(&mut self, other: &Self, factor: u64, shift: usize) {
        if factor == 0 || other.is_zero() {
            return;
        }
        let needed = other.coeffs.len() + shift;
        if self.coeffs.len() < needed {
            self.coeffs.resize(needed, BigInt::zero());
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            self.coeffs[i + shift] += c * factor;
        }
        self.trim();
    }

    /// Exact Horner evaluation at an integer point.
    pub fn eval_exact(&self, k: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * k + c;
        }
        acc
    }

    pub fn eval_exact_u64(&self, k: u64) -> BigInt {
        self.eval_exact(&BigInt::from(k))
    }

    /// Natural logarithm of `p(k)` for real `k > 0`, computed as a log-sum-exp
    /// so that factorial-sized coefficients and large `k` never overflow.
    pub fn eval_log(&self, k: f64) -> Result<f64> {
        if self.is_zero() {
            return Err(MomentError::LogUndefined("zero polynomial"));
        }
        if !self.has_nonnegative_coeffs() {
            return Err(MomentError::LogUndefined("negative coefficient"));
        }
        if k.is_nan() || k <= 0.0 || k.is_infinite() {
            return Err(MomentError::LogUndefined("k must be a positive finite real"));
        }
        let log_k = k.ln();
        let terms: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| ln_biguint(c.magnitude()) + i as f64 * log_k)
            .collect();
        Ok(log_sum_exp(&terms))
    }

    /// Canonical text: one decimal coefficient per line, lowest degree first.
    /// The zero polynomial is written as a single `0`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0\n".to_string();
        }
        let mut out = String::new();
        for c in &self.coeffs {
            out.push_str(&c.to_str_radix(10));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let c = BigInt::parse_bytes(line.as_bytes(), 10).ok_or_else(|| {
                MomentError::ParsePolynomial(format!("line {}: {line:?}", lineno + 1))
            })?;
            coeffs.push(c);
        }
        if coeffs.is_empty() {
            return Err(MomentError::ParsePolynomial("no coefficients".into()));
        }
        Ok(Self::new(coeffs))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: Self) -> IntPolynomial {
        IntPolynomial::add(self, rhs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: Self) -> IntPolynomial {
        IntPolynomial::mul(self, rhs)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sep = match (first, c.sign()) {
                (true, Sign::Minus) => "-",
                (true, _) => "",
                (false, Sign::Minus) => " - ",
                (false, _) => " + ",
            };
            f.write_str(sep)?;
            let mag = c.magnitude();
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("k")?,
                _ => write!(f, "k^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Natural logarithm of a positive big integer, using the leading 64 bits as
/// the significand and the bit length as the binary exponent.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().map_or(f64::NAN, |v| (v as f64).ln());
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn add_examples() {
        assert_eq!(&p(&[0, 1]) + &p(&[0, 0, 1]), p(&[0, 1, 1]));
        assert_eq!(&IntPolynomial::zero() + &p(&[3, 4]), p(&[3, 4]));
        assert_eq!(&p(&[0, 2, 2]) + &p(&[0, 6, 2]), p(&[0, 8, 4]));
    }

    #[test]
    fn add_cancels_to_trimmed_zero() {
        let sum = &p(&[1, 2, 3]) + &p(&[-1, -2, -3]);
        assert!(sum.is_zero());
        assert_eq!(sum.degree(), None);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p(&[0, 1]) * &p(&[1, 1]), p(&[0, 1, 1]));
        assert!((&p(&[5, 7]) * &IntPolynomial::zero()).is_zero());
        assert_eq!(&p(&[0, 2, 2]) * &p(&[0, 2, 2]), p(&[0, 0, 4, 8, 4]));
    }

    #[test]
    fn scale_examples() {
        assert_eq!(p(&[0, 1, 1]).scale(&BigInt::from(3)), p(&[0, 3, 3]));
        assert!(p(&[0, 1, 1]).scale(&BigInt::zero()).is_zero());
        // (2*1-1)!! = 1 times the n=1 base case
        assert_eq!(p(&[0, 2, 2]).scale(&BigInt::one()), p(&[0, 2, 2]));
    }

    #[test]
    fn exact_evaluation() {
        assert_eq!(p(&[0, 2, 2]).eval_exact_u64(1), BigInt::from(4));
        assert_eq!(p(&[0, 16, 14, 2]).eval_exact_u64(1), BigInt::from(32));
        assert_eq!(p(&[0, 2, 2]).eval_exact_u64(2), BigInt::from(12));
    }

    #[test]
    fn log_evaluation() {
        let v = p(&[0, 1]).eval_log(std::f64::consts::E).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        let v = p(&[0, 2, 2]).eval_log(1.0).unwrap();
        assert!((v - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn log_evaluation_rejects_bad_input() {
        assert!(IntPolynomial::zero().eval_log(2.0).is_err());
        assert!(p(&[1, -1]).eval_log(2.0).is_err());
        assert!(p(&[1, 1]).eval_log(0.0).is_err());
    }

    #[test]
    fn log_of_huge_coefficients() {
        // 3^500 k^3 + 1 at k = 10: the constant is negligible.
        let big = BigInt::from(3u32).pow(500);
        let poly = IntPolynomial::new(vec![BigInt::one(), BigInt::zero(), BigInt::zero(), big]);
        let expected = 500.0 * 3f64.ln() + 3.0 * 10f64.ln();
        let got = poly.eval_log(10.0).unwrap();
        assert!(((got - expected) / expected).abs() < 1e-12);
    }

    #[test]
    fn add_scaled_shifted_matches_mul() {
        let mut acc = p(&[1]);
        acc.add_scaled_shifted(&p(&[0, 2, 2]), 3, 2);
        assert_eq!(acc, &p(&[1]) + &(&p(&[0, 0, 3]) * &p(&[0, 2, 2])));
    }

    #[test]
    fn text_round_trip_and_display() {
        let poly = p(&[0, 16, 14, 2]);
        assert_eq!(poly.to_text(), "0\n16\n14\n2\n");
        assert_eq!(IntPolynomial::from_text(&poly.to_text()).unwrap(), poly);
        assert_eq!(IntPolynomial::from_text("0\n").unwrap(), IntPolynomial::zero());
        assert!(IntPolynomial::from_text("1\nx\n").is_err());
        assert_eq!(poly.to_string(), "2k^3 + 14k^2 + 16k");
        assert_eq!(p(&[-1, 0, 1]).to_string(), "k^2 - 1");
    }
}
