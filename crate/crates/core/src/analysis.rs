//! Anticoncentration statistics built on the exact second moments.
//!
//! Everything is computed in natural-log space: `M2` grows factorially in `n`
//! and polynomially in `k`, so direct evaluation overflows long before the
//! orders of interest.

use std::sync::Arc;

use crate::closed_forms::{double_factorial, first_moment_log};
use crate::edge::EdgeVector;
use crate::error::{MomentError, Result};
use crate::poly::{ln_biguint, IntPolynomial};
use crate::recursion::{Engine, MemoKey, MemoTable};

/// One point of a sweep over `k = n^a`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub n: u32,
    pub a_exponent: f64,
    pub k: f64,
    /// `log[(m2(k, n) sqrt(pi n))^-1]`
    pub log_inv: f64,
    /// Symmetric difference of `log_inv` in `n`, where both neighbours exist.
    pub delta: Option<f64>,
}

/// `g(n, 0, 0, 0)` for `n = 1..=n_max`, with the `(2n-1)!!` prefactors.
#[derive(Clone, Debug)]
pub struct SecondMoments {
    polys: Vec<Arc<IntPolynomial>>,
    log_prefactor: Vec<f64>,
}

impl SecondMoments {
    /// Computes (or reuses) every `g(n, 0, 0, 0)` up to `n_max`.
    pub fn from_engine(engine: &Engine, n_max: u32) -> Result<Self> {
        if n_max == 0 {
            return Err(MomentError::InvalidOrder(0));
        }
        engine.g(n_max, EdgeVector::ZERO)?;
        let polys = (1..=n_max)
            .map(|n| engine.g(n, EdgeVector::ZERO))
            .collect::<Result<Vec<_>>>()?;
        Self::from_polys(polys)
    }

    /// Uses entries already present in `memo`; a missing order is an error
    /// naming the key.
    pub fn from_memo(memo: &MemoTable, n_max: u32) -> Result<Self> {
        if n_max == 0 {
            return Err(MomentError::InvalidOrder(0));
        }
        let polys = (1..=n_max)
            .map(|n| {
                memo.get(&MemoKey::new(n, EdgeVector::ZERO))
                    .ok_or(MomentError::MissingKey { n, a: EdgeVector::ZERO })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_polys(polys)
    }

    fn from_polys(polys: Vec<Arc<IntPolynomial>>) -> Result<Self> {
        let log_prefactor = (1..=polys.len() as i64)
            .map(|n| Ok(ln_biguint(double_factorial(2 * n - 1)?.magnitude())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { polys, log_prefactor })
    }

    pub fn n_max(&self) -> u32 {
        self.polys.len() as u32
    }

    fn index(&self, n: u32) -> Result<usize> {
        if n == 0 || n > self.n_max() {
            return Err(MomentError::MissingKey { n, a: EdgeVector::ZERO });
        }
        Ok(n as usize - 1)
    }

    /// `log M2(k, n)`.
    pub fn log_m2(&self, k: f64, n: u32) -> Result<f64> {
        let i = self.index(n)?;
        Ok(self.log_prefactor[i] + self.polys[i].eval_log(k)?)
    }

    /// `log M1(k, n)`.
    pub fn log_m1(&self, k: f64, n: u32) -> Result<f64> {
        check_k(k)?;
        Ok(first_moment_log(k, n))
    }

    /// Inverse normalized second moment `M1^2 / M2`.
    pub fn m2(&self, k: f64, n: u32) -> Result<f64> {
        Ok((2.0 * self.log_m1(k, n)? - self.log_m2(k, n)?).exp())
    }

    /// Expected linear cross-entropy score of an ideal sampler, `1/m2 - 1`.
    pub fn ideal_xeb(&self, k: f64, n: u32) -> Result<f64> {
        Ok((self.log_m2(k, n)? - 2.0 * self.log_m1(k, n)?).exp_m1())
    }

    /// `log M2 - 2 log M1 - log(pi n) / 2`.
    pub fn log_inv_stat(&self, k: f64, n: u32) -> Result<f64> {
        let half_log = 0.5 * (std::f64::consts::PI * f64::from(n)).ln();
        Ok(self.log_m2(k, n)? - 2.0 * self.log_m1(k, n)? - half_log)
    }

    fn log_inv_at_power(&self, a: f64, n: u32) -> Result<f64> {
        self.log_inv_stat(f64::from(n).powf(a), n)
    }

    /// Symmetric difference in `n` of the statistic along `k = n^a`.
    pub fn delta_log_inv(&self, a: f64, n: u32) -> Result<f64> {
        if n < 2 {
            return Err(MomentError::RangeTooShort(n as usize));
        }
        Ok((self.log_inv_at_power(a, n + 1)? - self.log_inv_at_power(a, n - 1)?) / 2.0)
    }

    /// Records for every `a` in `a_list` and `n = 1..=n_max`, ordered by `a`
    /// then `n`.
    pub fn transition_sweep(&self, a_list: &[f64], n_max: u32) -> Result<Vec<SweepRecord>> {
        self.index(n_max)?;
        let mut out = Vec::with_capacity(a_list.len() * n_max as usize);
        for &a in a_list {
            let values = (1..=n_max)
                .map(|n| self.log_inv_at_power(a, n))
                .collect::<Result<Vec<_>>>()?;
            let deltas = symmetric_difference(&values).unwrap_or_default();
            for (i, &log_inv) in values.iter().enumerate() {
                let n = i as u32 + 1;
                let delta = if i >= 1 && i + 1 < values.len() { Some(deltas[i - 1]) } else { None };
                out.push(SweepRecord { n, a_exponent: a, k: f64::from(n).powf(a), log_inv, delta });
            }
        }
        Ok(out)
    }

    /// Exponent `a*` in `[a_lo, a_hi]` where the symmetric difference at
    /// `n_eval` changes sign, located by bisection to width below `1e-4`.
    pub fn find_zero_crossing(&self, n_eval: u32, a_lo: f64, a_hi: f64) -> Result<f64> {
        bisect(|a| self.delta_log_inv(a, n_eval), a_lo, a_hi, 1e-4)
    }
}

fn check_k(k: f64) -> Result<()> {
    if k.is_nan() || k <= 0.0 || k.is_infinite() {
        return Err(MomentError::InvalidParameter(format!("k must be positive and finite, got {k}")));
    }
    Ok(())
}

/// `(f(n+1) - f(n-1)) / 2` at every interior point of a contiguous range.
pub fn symmetric_difference(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 3 {
        return Err(MomentError::RangeTooShort(values.len()));
    }
    Ok(values.windows(3).map(|w| (w[2] - w[0]) / 2.0).collect())
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect(mut f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64, width: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(MomentError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let lo_sign = f_lo.signum();
    while hi - lo >= width {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n_max: u32) -> SecondMoments {
        SecondMoments::from_engine(&Engine::new(), n_max).unwrap()
    }

    #[test]
    fn smallest_case() {
        let t = table(1);
        assert!((t.m2(1.0, 1).unwrap() - 0.25).abs() < 1e-15);
        assert!((t.ideal_xeb(1.0, 1).unwrap() - 3.0).abs() < 1e-14);
        let expected = (4.0 / std::f64::consts::PI.sqrt()).ln();
        assert!((t.log_inv_stat(1.0, 1).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.81393).abs() < 1e-5);
    }

    #[test]
    fn large_k_limit() {
        let t = table(6);
        for n in 1..=6 {
            let m2 = t.m2(1e12, n).unwrap();
            let limit = {
                // M1^2 / M2 -> ((2n-1)!!)^2 / ((2n-1)!! (2n)!!) as k -> infinity
                let odd: f64 = (1..=n).map(|j| f64::from(2 * j - 1)).product();
                let even: f64 = (1..=n).map(|j| f64::from(2 * j)).product();
                odd / even
            };
            assert!((m2 - limit).abs() / limit < 1e-6, "n={n}: {m2} vs {limit}");
        }
    }

    #[test]
    fn m2_in_unit_interval_and_increasing_in_k() {
        let t = table(8);
        for n in 1..=8 {
            let mut prev = 0.0;
            for e in 0..=24 {
                let k = 10f64.powf(e as f64 / 4.0);
                let m = t.m2(k, n).unwrap();
                assert!(m > 0.0 && m < 1.0);
                assert!(m >= prev, "n={n} k={k}");
                prev = m;
            }
        }
    }

    #[test]
    fn symmetric_difference_examples() {
        assert_eq!(symmetric_difference(&[1.0, 2.0, 3.0, 4.0]).unwrap(), vec![1.0, 1.0]);
        assert_eq!(symmetric_difference(&[5.0, 5.0, 5.0]).unwrap(), vec![0.0]);
        assert!(symmetric_difference(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn bisection_contract() {
        let root = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-4).unwrap();
        assert!((root - 2f64.sqrt()).abs() < 1e-4);
        let err = bisect(|x| Ok(x + 10.0), 0.0, 1.0, 1e-4).unwrap_err();
        assert!(matches!(err, MomentError::NoSignChange { .. }));
    }

    #[test]
    fn sweep_boundaries() {
        let t = table(3);
        let rows = t.transition_sweep(&[2.0], 3).unwrap();
        assert_eq!(rows.len(), 3);
        let with_delta: Vec<u32> = rows.iter().filter(|r| r.delta.is_some()).map(|r| r.n).collect();
        assert_eq!(with_delta, vec![2]);
        assert_eq!(rows[1].k, 4.0);
        let two = t.transition_sweep(&[1.0, 3.0], 2).unwrap();
        assert!(two.iter().all(|r| r.delta.is_none()));
        assert!(t.transition_sweep(&[1.0], 4).is_err());
    }

    #[test]
    fn missing_order_is_reported() {
        let memo = MemoTable::new();
        let err = SecondMoments::from_memo(&memo, 2).unwrap_err();
        assert!(matches!(err, MomentError::MissingKey { n: 1, .. }));
    }
}
