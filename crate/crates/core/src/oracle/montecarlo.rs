//! Monte Carlo estimates of `E |Haf(X^T X)|^(2t)` over complex Gaussian `X`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{MomentError, Result};
use crate::oracle::hafnian::{hafnian_unchecked, ComplexMatrix};

/// Samples drawn from one random stream. Block `i` always uses stream `i`
/// of the seeded generator, so results do not depend on the thread count.
pub const BLOCK_SIZE: u64 = 1024;

/// Sample mean and its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation divided by `sqrt(samples)`.
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `(estimate - exact) / stderr`.
    pub fn z_score(&self, exact: f64) -> f64 {
        (self.mean - exact) / self.stderr
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Moments { count, mean, m2 }
    }
}

/// Standard complex Gaussian: `(g1 + i g2) / sqrt 2`, so `E|z|^2 = 1`.
fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// One sample of `|Haf(X^T X)|^(2t)` with `X` of shape `k x 2n`.
fn draw(rng: &mut impl Rng, t: u32, n: usize, k: usize, x: &mut [Complex64], a: &mut ComplexMatrix) -> f64 {
    let cols = 2 * n;
    for entry in x.iter_mut() {
        *entry = complex_gaussian(rng);
    }
    for i in 0..cols {
        for j in i..cols {
            let mut s = Complex64::new(0.0, 0.0);
            for r in 0..k {
                s += x[r * cols + i] * x[r * cols + j];
            }
            a.set(i, j, s);
            a.set(j, i, s);
        }
    }
    hafnian_unchecked(a).norm_sqr().powi(t as i32)
}

/// Estimates the `t`-th moment (`t` = 1 or 2) of `|Haf(X^T X)|^2` for `X` a
/// `k x 2n` matrix of independent standard complex Gaussians.
pub fn mc_moment(t: u32, n: u32, k: u32, samples: u64, seed: u64) -> Result<McEstimate> {
    if t != 1 && t != 2 {
        return Err(MomentError::InvalidParameter(format!("moment order t must be 1 or 2, got {t}")));
    }
    if n == 0 || 2 * n > 12 {
        return Err(MomentError::InvalidParameter(format!("need 1 <= n <= 6, got {n}")));
    }
    if k == 0 {
        return Err(MomentError::InvalidParameter("k must be at least 1".into()));
    }
    if samples < 100 {
        return Err(MomentError::InvalidParameter(format!("need at least 100 samples, got {samples}")));
    }
    let (n, k) = (n as usize, k as usize);
    let blocks = samples.div_ceil(BLOCK_SIZE);
    let partials: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let count = BLOCK_SIZE.min(samples - block * BLOCK_SIZE);
            let mut x = vec![Complex64::new(0.0, 0.0); k * 2 * n];
            let mut a = ComplexMatrix::zeros(2 * n);
            let mut m = Moments::default();
            for _ in 0..count {
                m.push(draw(&mut rng, t, n, k, &mut x, &mut a));
            }
            m
        })
        .collect();
    let total = partials.into_iter().fold(Moments::default(), Moments::merge);
    let variance = total.m2 / (total.count - 1) as f64;
    Ok(McEstimate {
        mean: total.mean,
        stderr: (variance / total.count as f64).sqrt(),
        samples: total.count,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.5).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut left = Moments::default();
        let mut right = Moments::default();
        xs[..313].iter().for_each(|&x| left.push(x));
        xs[313..].iter().for_each(|&x| right.push(x));
        let merged = left.merge(right);
        assert_eq!(merged.count, whole.count);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.m2 - whole.m2).abs() / whole.m2 < 1e-12);
    }

    #[test]
    fn reproducible_for_a_seed() {
        let a = mc_moment(2, 1, 2, 5000, 7).unwrap();
        let b = mc_moment(2, 1, 2, 5000, 7).unwrap();
        assert_eq!(a, b);
        let c = mc_moment(2, 1, 2, 5000, 8).unwrap();
        assert_ne!(a.mean, c.mean);
        assert_eq!(a.samples, 5000);
    }

    #[test]
    fn first_moment_single_pair() {
        // E|sum_i X_i1 X_i2|^2 = k
        let est = mc_moment(1, 1, 3, 50_000, 1).unwrap();
        assert!(est.z_score(3.0).abs() < 5.0, "{est:?}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(mc_moment(3, 1, 1, 1000, 0).is_err());
        assert!(mc_moment(1, 7, 1, 1000, 0).is_err());
        assert!(mc_moment(1, 1, 0, 1000, 0).is_err());
        assert!(mc_moment(1, 1, 1, 10, 0).is_err());
    }
}
