//! Cross-row red-edge count vectors that classify generalized moment graphs.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::closed_forms::{binomial, double_factorial_unchecked, factorial};
use crate::error::{MomentError, Result};

/// Counts of red edges joining rows (1,2), (1,3) and (2,3).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeVector {
    pub a12: u32,
    pub a13: u32,
    pub a23: u32,
}

impl EdgeVector {
    pub const ZERO: EdgeVector = EdgeVector { a12: 0, a13: 0, a23: 0 };

    pub const fn new(a12: u32, a13: u32, a23: u32) -> Self {
        Self { a12, a13, a23 }
    }

    /// Relabel rows 1 and 3, which swaps `a12` and `a23`.
    pub const fn swap_outer_rows(self) -> Self {
        Self::new(self.a23, self.a13, self.a12)
    }

    /// Adds signed offsets, returning `None` when an entry would go negative.
    pub fn offset(self, d12: i64, d13: i64, d23: i64) -> Option<Self> {
        let f = |a: u32, d: i64| u32::try_from(i64::from(a) + d).ok();
        Some(Self::new(f(self.a12, d12)?, f(self.a13, d13)?, f(self.a23, d23)?))
    }

    /// Row degree sums taken by cross edges: (row 1, row 2, row 3).
    fn cross_degrees(self) -> [u64; 3] {
        let (x, y, z) = (u64::from(self.a12), u64::from(self.a13), u64::from(self.a23));
        [x + y, x + z, y + z]
    }

    pub fn is_valid(self, n: u32) -> bool {
        n >= 1 && self.check(n).is_none()
    }

    fn check(self, n: u32) -> Option<&'static str> {
        let cap = 2 * u64::from(n);
        let degs = self.cross_degrees();
        if degs.iter().any(|d| d % 2 != 0) {
            return Some("pairwise sums a12+a13, a12+a23, a13+a23 must be even");
        }
        if degs.iter().any(|&d| d > cap) {
            return Some("pairwise sums a12+a13, a12+a23, a13+a23 must not exceed 2n");
        }
        None
    }

    pub fn validate(self, n: u32) -> Result<()> {
        if n == 0 {
            return Err(MomentError::InvalidOrder(n));
        }
        match self.check(n) {
            None => Ok(()),
            Some(reason) => Err(MomentError::InvalidEdgeVector { n, a: self, reason }),
        }
    }

    /// Same-row red-edge counts `(a11, a22, a33)`.
    pub fn derived_counts(self, n: u32) -> Result<(u32, u32, u32)> {
        self.validate(n)?;
        let two_n = 2 * u64::from(n);
        let [d1, d2, d3] = self.cross_degrees();
        let half = |d: u64| ((two_n - d) / 2) as u32;
        Ok((half(d1), half(d2), half(d3)))
    }

    /// Number of graphs in the class: ways to place the cross edges, pair the
    /// remaining vertices within each row, and choose the black pattern.
    pub fn graph_count(self, n: u32) -> Result<BigInt> {
        self.validate(n)?;
        let two_n = 2 * i64::from(n);
        let (x, y, z) = (i64::from(self.a12), i64::from(self.a13), i64::from(self.a23));
        let mut count = binomial(two_n, x)
            * binomial(two_n - x, y)
            * binomial(two_n, x)
            * binomial(two_n - x, z)
            * binomial(two_n, y)
            * binomial(two_n - y, z);
        count *= factorial(self.a12 as u64) * factorial(self.a13 as u64) * factorial(self.a23 as u64);
        for d in self.cross_degrees() {
            count *= double_factorial_unchecked(two_n - d as i64 - 1);
        }
        count *= BigInt::one() << (2 * n as usize);
        Ok(count)
    }
}

impl fmt::Display for EdgeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a12, self.a13, self.a23)
    }
}

/// All valid vectors for order `n`, lexicographically sorted.
pub fn enumerate_valid(n: u32) -> Vec<EdgeVector> {
    if n == 0 {
        return Vec::new();
    }
    let cap = 2 * n;
    let mut out = Vec::new();
    for a12 in 0..=cap {
        for a13 in 0..=cap - a12 {
            for a23 in 0..=cap {
                let a = EdgeVector::new(a12, a13, a23);
                if a.is_valid(n) {
                    out.push(a);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity_examples() {
        assert!(EdgeVector::ZERO.is_valid(1));
        assert!(EdgeVector::new(1, 1, 1).is_valid(1));
        assert!(!EdgeVector::new(1, 0, 0).is_valid(4));
        assert!(!EdgeVector::new(2, 2, 0).is_valid(1));
        assert!(!EdgeVector::ZERO.is_valid(0));
    }

    #[test]
    fn enumeration_examples() {
        let n1 = enumerate_valid(1);
        let expected = [(0, 0, 0), (0, 0, 2), (0, 2, 0), (1, 1, 1), (2, 0, 0)]
            .map(|(x, y, z)| EdgeVector::new(x, y, z));
        assert_eq!(n1, expected);

        let n2 = enumerate_valid(2);
        assert!(n2.contains(&EdgeVector::new(4, 0, 0)));
        assert!(!n2.contains(&EdgeVector::new(6, 0, 0)));

        let n4 = enumerate_valid(4);
        assert!(n4.contains(&EdgeVector::new(4, 4, 4)));
        assert!(n4.iter().all(|a| a.a12 + a.a13 + a.a23 != 1));
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        for n in 1..=6 {
            let v = enumerate_valid(n);
            assert!(v.windows(2).all(|w| w[0] < w[1]));
            let brute = (0..=4 * n)
                .flat_map(|x| (0..=4 * n).flat_map(move |y| (0..=4 * n).map(move |z| EdgeVector::new(x, y, z))))
                .filter(|a| a.is_valid(n))
                .count();
            assert_eq!(v.len(), brute);
        }
    }

    #[test]
    fn derived_count_examples() {
        assert_eq!(EdgeVector::ZERO.derived_counts(2).unwrap(), (2, 2, 2));
        assert_eq!(EdgeVector::new(1, 1, 1).derived_counts(1).unwrap(), (0, 0, 0));
        assert_eq!(EdgeVector::new(4, 4, 4).derived_counts(4).unwrap(), (0, 0, 0));
        assert_eq!(EdgeVector::new(2, 0, 0).derived_counts(3).unwrap(), (2, 2, 3));
        assert!(EdgeVector::new(1, 0, 0).derived_counts(2).is_err());
    }

    #[test]
    fn graph_count_examples() {
        assert_eq!(EdgeVector::ZERO.graph_count(1).unwrap(), BigInt::from(4));
        assert_eq!(EdgeVector::new(1, 1, 1).graph_count(1).unwrap(), BigInt::from(32));
        assert_eq!(EdgeVector::new(2, 0, 0).graph_count(1).unwrap(), BigInt::from(8));
        assert_eq!(EdgeVector::new(0, 2, 0).graph_count(1).unwrap(), BigInt::from(8));
        // 3^3 same-row matchings per row at n=2, times 4^2 black patterns
        assert_eq!(EdgeVector::ZERO.graph_count(2).unwrap(), BigInt::from(27 * 16));
    }

    #[test]
    fn enumeration_size_bound() {
        for n in 1..=60u64 {
            let m = 3 * n + 3;
            let rounded = (m * m + 6) / 12;
            let bound = 6 * rounded * (3 * n + 1);
            assert!(enumerate_valid(n as u32).len() as u64 <= bound, "n={n}");
        }
    }

    #[test]
    fn offsets() {
        let a = EdgeVector::new(2, 1, 1);
        assert_eq!(a.offset(-1, -1, -1), Some(EdgeVector::new(1, 0, 0)));
        assert_eq!(a.offset(-3, 0, 0), None);
        assert_eq!(a.swap_outer_rows(), EdgeVector::new(1, 1, 2));
        assert_eq!(a.to_string(), "(2,1,1)");
    }
}
