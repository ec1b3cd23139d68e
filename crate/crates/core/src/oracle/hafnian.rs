//! Reference hafnian and permanent by direct expansion.

use num_complex::Complex64;

use crate::error::{MomentError, Result};

/// Largest dimension accepted by [`naive_hafnian`].
pub const MAX_HAFNIAN_DIM: usize = 14;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(MomentError::InvalidParameter(format!(
                "{} entries for a {dim}x{dim} matrix",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    /// `max |A - A^T|` over all entries.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i)).norm());
            }
        }
        worst
    }

    /// The symmetric `2d x 2d` matrix `[[0, B], [B^T, 0]]`, whose hafnian is
    /// the permanent of `B`.
    pub fn permanent_embedding(&self) -> ComplexMatrix {
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(2 * d);
        for i in 0..d {
            for j in 0..d {
                out.set(i, d + j, self.get(i, j));
                out.set(d + j, i, self.get(i, j));
            }
        }
        out
    }
}

/// Sum over perfect matchings of the product of paired entries, by expansion
/// along the first row. Rejects odd dimensions and asymmetric input.
pub fn naive_hafnian(a: &ComplexMatrix) -> Result<Complex64> {
    if !a.dim.is_multiple_of(2) {
        return Err(MomentError::OddDimension(a.dim));
    }
    if a.dim > MAX_HAFNIAN_DIM {
        return Err(MomentError::TooLarge(a.dim, MAX_HAFNIAN_DIM));
    }
    let asym = a.asymmetry();
    if asym >= 1e-12 {
        return Err(MomentError::NotSymmetric(asym));
    }
    Ok(hafnian_unchecked(a))
}

/// Hafnian without input checks; the caller guarantees an even, symmetric,
/// small matrix.
pub(crate) fn hafnian_unchecked(a: &ComplexMatrix) -> Complex64 {
    fn go(a: &ComplexMatrix, rest: &mut Vec<usize>) -> Complex64 {
        if rest.is_empty() {
            return Complex64::new(1.0, 0.0);
        }
        let first = rest.remove(0);
        let mut total = Complex64::new(0.0, 0.0);
        for idx in 0..rest.len() {
            let j = rest.remove(idx);
            total += a.get(first, j) * go(a, rest);
            rest.insert(idx, j);
        }
        rest.insert(0, first);
        total
    }
    go(a, &mut (0..a.dim).collect())
}

/// Permanent by summing over all permutations, for cross-checks only.
pub fn naive_permanent(b: &ComplexMatrix) -> Complex64 {
    fn go(b: &ComplexMatrix, row: usize, used: &mut [bool]) -> Complex64 {
        if row == b.dim {
            return Complex64::new(1.0, 0.0);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for col in 0..b.dim {
            if used[col] {
                continue;
            }
            used[col] = true;
            total += b.get(row, col) * go(b, row + 1, used);
            used[col] = false;
        }
        total
    }
    go(b, 0, &mut vec![false; b.dim])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_by_two() {
        let a = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.5, -2.0), c(1.5, -2.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(naive_hafnian(&a).unwrap(), c(1.5, -2.0));
    }

    #[test]
    fn empty_is_one() {
        assert_eq!(naive_hafnian(&ComplexMatrix::zeros(0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn errors() {
        assert!(matches!(naive_hafnian(&ComplexMatrix::zeros(3)), Err(MomentError::OddDimension(3))));
        let mut a = ComplexMatrix::zeros(2);
        a.set(0, 1, c(1.0, 0.0));
        assert!(matches!(naive_hafnian(&a), Err(MomentError::NotSymmetric(_))));
        assert!(naive_hafnian(&ComplexMatrix::zeros(16)).is_err());
    }

    #[test]
    fn permanent_of_identity_and_ones() {
        let mut id = ComplexMatrix::zeros(3);
        for i in 0..3 {
            id.set(i, i, c(1.0, 0.0));
        }
        assert_eq!(naive_permanent(&id), c(1.0, 0.0));
        let ones = ComplexMatrix::new(3, vec![c(1.0, 0.0); 9]).unwrap();
        assert_eq!(naive_permanent(&ones), c(6.0, 0.0));
        assert_eq!(naive_hafnian(&ones.permanent_embedding()).unwrap(), c(6.0, 0.0));
    }
}
