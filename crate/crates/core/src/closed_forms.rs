//! Closed-form moments, coefficient identities and bounds used to cross-check
//! the recursion and to evaluate first moments at real `k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{MomentError, Result};
use crate::poly::ln_biguint;

/// `m!!` for `m >= -1`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(m: i64) -> Result<BigInt> {
    if m < -1 {
        return Err(MomentError::NegativeDoubleFactorial(m));
    }
    Ok(double_factorial_unchecked(m))
}

/// Like [`double_factorial`] but returns 1 for every `m <= 0`; callers must
/// have established `m >= -1` themselves.
pub(crate) fn double_factorial_unchecked(m: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut i = m;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    acc
}

pub fn factorial(m: u64) -> BigInt {
    (2..=m).fold(BigInt::one(), |acc, i| acc * i)
}

/// Binomial coefficient, zero whenever `k < 0` or `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn df(m: i64) -> BigInt {
    debug_assert!(m >= -1, "double factorial argument {m}");
    double_factorial_unchecked(m)
}

/// `M1(k, n) = (2n-1)!! * k (k+2) ... (k+2n-2)` at real `k > 0`.
pub fn first_moment(k: f64, n: u32) -> f64 {
    first_moment_log(k, n).exp()
}

/// Natural log of [`first_moment`], finite for every `n` the recursion reaches.
pub fn first_moment_log(k: f64, n: u32) -> f64 {
    let prefix = ln_biguint(df(2 * i64::from(n) - 1).magnitude());
    (1..=n).fold(prefix, |acc, j| acc + (k + 2.0 * f64::from(j) - 2.0).ln())
}

/// Exact first moment at integer `k`, product form.
pub fn first_moment_exact(k: u64, n: u32) -> BigInt {
    (1..=u64::from(n)).fold(df(2 * i64::from(n) - 1), |acc, j| acc * (k + 2 * j - 2))
}

/// Exact first moment at integer `k >= 1` via `(2n-1)!! (k+2n-2)!! / (k-2)!!`.
pub fn first_moment_double_factorial(k: u64, n: u32) -> BigInt {
    let k = k as i64;
    let n = i64::from(n);
    df(2 * n - 1) * df(k + 2 * n - 2) / df(k - 2)
}

/// `M2(1, n) = ((2n-1)!!)^4 4^n`.
pub fn second_moment_k1(n: u32) -> BigInt {
    df(2 * i64::from(n) - 1).pow(4) << (2 * n as usize)
}

/// Leading coefficient of `g(n,0,0,0)`: `(2n)!!`.
pub fn c_2n(n: u32) -> BigInt {
    df(2 * i64::from(n))
}

/// `sum_p C(n,p) (2p-1)!! (2n-2p-1)!!`, which equals `(2n)!!`.
pub fn c_2n_sum(n: u32) -> BigInt {
    let n = i64::from(n);
    (0..=n)
        .map(|p| binomial(n, p) * df(2 * p - 1) * df(2 * (n - p) - 1))
        .sum()
}

/// Subleading coefficient of `g(n,0,0,0)`: `(2n)!! (3n-2) n`.
pub fn c_2n_minus_1(n: u32) -> BigInt {
    c_2n(n) * (3 * i64::from(n) - 2) * i64::from(n)
}

/// The same coefficient as a sum over the ways a single loop can be removed
/// from a graph with the maximal number of loops.
pub fn c_2n_minus_1_sum(n: u32) -> BigInt {
    let n = i64::from(n);
    // Product of a binomial weight and a double factorial, skipped when the
    // weight vanishes so that arguments below -1 are never evaluated.
    let term = |weight: BigInt, d1: i64, d2: i64| -> BigInt {
        if weight.is_zero() {
            BigInt::zero()
        } else {
            weight * df(d1) * df(d2)
        }
    };
    let mut total = BigInt::zero();
    for p in 0..=n {
        let q = n - p;
        let mut inner = BigInt::zero();
        inner += term(binomial(p, 2) * 2, 2 * p - 1, 2 * q - 1);
        inner += term(binomial(q, 2) * 2, 2 * p - 1, 2 * q - 1);
        inner += term(binomial(p, 1) * binomial(2 * q, 2) * 2, 2 * p - 1, 2 * (q - 1) - 1);
        inner += term(binomial(q, 1) * binomial(2 * p, 2) * 2, 2 * (p - 1) - 1, 2 * q - 1);
        inner += term(binomial(2 * p, 4) * 6, 2 * (p - 2) - 1, 2 * q - 1);
        inner += term(binomial(2 * q, 4) * 6, 2 * p - 1, 2 * (q - 2) - 1);
        inner += term(binomial(2 * p, 2) * binomial(2 * q, 2) * 2, 2 * (p - 1) - 1, 2 * (q - 1) - 1);
        total += binomial(n, p) * inner;
    }
    for p in 0..n {
        let q = n - p - 1;
        total += binomial(n - 1, p) * (2 * n * (2 * p + 1) * (2 * q + 1)) * df(2 * p - 1) * df(2 * q - 1);
    }
    for p in 0..n - 1 {
        total += binomial(n, 2) * binomial(n - 2, p) * 4 * df(2 * p + 1) * df(2 * (n - p - 2) + 1);
    }
    total
}

/// Coefficient of `k` in `g(n,0,0,0)`: the number of single-loop graphs,
/// counted through Eulerian circuits on the three-row multigraph.
pub fn c_1(n: u32) -> BigInt {
    let n = i64::from(n);
    let mut sum = BigRational::zero();
    for p1 in 0..=n {
        for p4 in 0..=n - p1 {
            let free = n - p1 - p4;
            let denom_outer = factorial(p1 as u64) * factorial(p4 as u64);
            let mut w = -free;
            while w <= free {
                let b1 = binomial(n - p1 + p4, (n - p1 + p4 + w) / 2);
                let b2 = binomial(n + p1 - p4, (n + p1 - p4 + w) / 2);
                let weight = w * w + 3 * n * n - (p1 - p4) * (p1 - p4) - 2 * n * (p1 + p4);
                let numer = b1 * b2 * weight;
                if !numer.is_zero() {
                    let denom = &denom_outer
                        * factorial(((free - w) / 2) as u64)
                        * factorial(((free + w) / 2) as u64);
                    sum += BigRational::new(numer, denom);
                }
                w += 2;
            }
        }
    }
    let prefactor = factorial(n as u64) * factorial((n - 1) as u64).pow(3);
    let two_pow = n - 3;
    let scaled = if two_pow >= 0 {
        sum * BigRational::from_integer(prefactor << two_pow as usize)
    } else {
        sum * BigRational::new(prefactor, BigInt::one() << (-two_pow) as usize)
    };
    debug_assert!(scaled.is_integer(), "c_1({n}) is not integral: {scaled}");
    scaled.to_integer()
}

/// Exact bounds on the second moment at integer `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentBounds {
    /// `((2n-1)!!)^4 4^n k^(2n)`
    pub upper: BigInt,
    /// `(2n)! k^(2n)`
    pub lower_leading: BigInt,
    /// `((2n-1)!!)^4 4^n`
    pub lower_count: BigInt,
}

impl MomentBounds {
    pub fn contains(&self, m2: &BigInt) -> bool {
        &self.lower_leading <= m2 && &self.lower_count <= m2 && m2 <= &self.upper
    }
}

pub fn moment_bounds(k: u64, n: u32) -> MomentBounds {
    let k_pow = BigInt::from(k).pow(2 * n);
    let count = second_moment_k1(n);
    MomentBounds {
        upper: &count * &k_pow,
        lower_leading: factorial(2 * u64::from(n)) * k_pow,
        lower_count: count,
    }
}
