//! Explicit moment graphs and brute-force enumeration of small orders.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::edge::EdgeVector;
use crate::error::{MomentError, Result};
use crate::poly::IntPolynomial;
use crate::recursion::block::BLACK_TYPES;

/// A moment graph of order `n`: `3 x 2n` vertices, a black pattern per
/// column pair and a red perfect matching. Vertex `row * 2n + col` sits in
/// row `row` (0 = O, 1 = P, 2 = Q) and column `col`, both 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentGraph {
    n: usize,
    /// Black pattern of each column pair, `1..=4`.
    z: Vec<u8>,
    red: Vec<usize>,
    black: Vec<usize>,
}

impl MomentGraph {
    /// Builds a graph from the black patterns and the red partner of every
    /// vertex.
    pub fn new(z: Vec<u8>, red: Vec<usize>) -> Result<Self> {
        let n = z.len();
        if n == 0 {
            return Err(MomentError::InvalidOrder(0));
        }
        if let Some(&t) = z.iter().find(|&&t| !(1..=4).contains(&t)) {
            return Err(MomentError::InvalidParameter(format!("black pattern {t} not in 1..=4")));
        }
        let size = 6 * n;
        let is_matching = red.len() == size
            && red.iter().enumerate().all(|(v, &w)| w < size && w != v && red[w] == v);
        if !is_matching {
            return Err(MomentError::InvalidParameter("red edges are not a perfect matching".into()));
        }
        let black = black_matching(&z);
        Ok(Self { n, z, red, black })
    }

    /// Builds a graph from 1-based red pairs given per row, as `(col, col)`
    /// within that row.
    pub fn from_row_pairs(z: Vec<u8>, rows: [&[(usize, usize)]; 3]) -> Result<Self> {
        let n = z.len();
        let mut red = vec![usize::MAX; 6 * n];
        for (r, pairs) in rows.iter().enumerate() {
            for &(x, y) in pairs.iter() {
                if x == 0 || y == 0 || x > 2 * n || y > 2 * n {
                    return Err(MomentError::InvalidParameter(format!("column out of range in ({x},{y})")));
                }
                let (u, v) = (r * 2 * n + x - 1, r * 2 * n + y - 1);
                red[u] = v;
                red[v] = u;
            }
        }
        Self::new(z, red)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn black_types(&self) -> &[u8] {
        &self.z
    }

    pub fn row_of(&self, v: usize) -> usize {
        v / (2 * self.n)
    }

    /// Number of connected components of the union of black and red edges.
    /// Every vertex has one edge of each colour, so components are cycles.
    pub fn connected_components(&self) -> u32 {
        count_cycles(&self.black, &self.red)
    }

    /// Cross-row red-edge counts.
    pub fn edge_vector(&self) -> EdgeVector {
        edge_vector_of(&self.red, 2 * self.n)
    }
}

fn black_matching(z: &[u8]) -> Vec<usize> {
    let n = z.len();
    let mut black = vec![0; 6 * n];
    for (j, &t) in z.iter().enumerate() {
        let global = |v: usize| (v / 2) * 2 * n + 2 * j + v % 2;
        for &(x, y) in &BLACK_TYPES[usize::from(t) - 1] {
            black[global(x)] = global(y);
            black[global(y)] = global(x);
        }
    }
    black
}

fn count_cycles(black: &[usize], red: &[usize]) -> u32 {
    let mut seen = vec![false; black.len()];
    let mut cycles = 0;
    for start in 0..black.len() {
        if seen[start] {
            continue;
        }
        let mut v = start;
        loop {
            seen[v] = true;
            let u = black[v];
            seen[u] = true;
            v = red[u];
            if v == start {
                break;
            }
        }
        cycles += 1;
    }
    cycles
}

fn edge_vector_of(red: &[usize], width: usize) -> EdgeVector {
    let mut a = EdgeVector::ZERO;
    for (v, &w) in red.iter().enumerate() {
        if w <= v {
            continue;
        }
        match (v / width, w / width) {
            (0, 1) => a.a12 += 1,
            (0, 2) => a.a13 += 1,
            (1, 2) => a.a23 += 1,
            _ => {}
        }
    }
    a
}

/// Calls `f` with every perfect matching of `count` points, given as a
/// partner array. The lowest unmatched point is always paired first.
fn for_each_matching(count: usize, f: &mut impl FnMut(&[usize])) {
    fn go(partner: &mut [usize], f: &mut impl FnMut(&[usize])) {
        let Some(v) = partner.iter().position(|&p| p == usize::MAX) else {
            f(partner);
            return;
        };
        for w in v + 1..partner.len() {
            if partner[w] != usize::MAX {
                continue;
            }
            partner[v] = w;
            partner[w] = v;
            go(partner, f);
            partner[w] = usize::MAX;
        }
        partner[v] = usize::MAX;
    }
    let mut partner = vec![usize::MAX; count];
    go(&mut partner, f);
}

fn all_black(n: usize) -> Vec<Vec<usize>> {
    (0..4usize.pow(n as u32))
        .map(|code| {
            let z: Vec<u8> = (0..n).map(|j| (code / 4usize.pow(j as u32) % 4) as u8 + 1).collect();
            black_matching(&z)
        })
        .collect()
}

fn histogram_to_poly(hist: &[u64]) -> IntPolynomial {
    IntPolynomial::new(hist.iter().map(|&c| c.into()).collect())
}

/// Brute-force `g(n, a)` for every class at order `n <= 2`, by enumerating
/// every red perfect matching of all `6n` vertices.
pub fn enumerate_classes(n: u32) -> Result<BTreeMap<EdgeVector, IntPolynomial>> {
    if n == 0 {
        return Err(MomentError::InvalidOrder(n));
    }
    if n > 2 {
        return Err(MomentError::EnumerationTooLarge { n, max: 2 });
    }
    let n = n as usize;
    let blacks = all_black(n);
    let mut hist: BTreeMap<EdgeVector, Vec<u64>> = BTreeMap::new();
    for_each_matching(6 * n, &mut |red| {
        let a = edge_vector_of(red, 2 * n);
        let h = hist.entry(a).or_insert_with(|| vec![0; 3 * n + 1]);
        for black in &blacks {
            h[count_cycles(black, red) as usize] += 1;
        }
    });
    Ok(hist.into_iter().map(|(a, h)| (a, histogram_to_poly(&h))).collect())
}

/// Largest order [`enumerate_same_row`] accepts.
pub const SAME_ROW_MAX_ORDER: u32 = 3;

/// Brute-force `g(n, 0, 0, 0)` over row-respecting red matchings, `n <= 3`.
pub fn enumerate_same_row(n: u32) -> Result<IntPolynomial> {
    enumerate_same_row_up_to(n, SAME_ROW_MAX_ORDER)
}

/// [`enumerate_same_row`] with a caller-chosen ceiling; order 4 takes
/// minutes (about 3 * 10^8 graphs).
pub fn enumerate_same_row_up_to(n: u32, max: u32) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(MomentError::InvalidOrder(n));
    }
    if n > max || n > 4 {
        return Err(MomentError::EnumerationTooLarge { n, max: max.min(4) });
    }
    let n = n as usize;
    let width = 2 * n;
    let mut row_matchings = Vec::new();
    for_each_matching(width, &mut |m| row_matchings.push(m.to_vec()));
    let blacks = all_black(n);
    let hist = row_matchings
        .par_iter()
        .map(|m0| {
            let mut h = vec![0u64; 2 * n + 1];
            let mut red = vec![0usize; 6 * n];
            for (c, &p) in m0.iter().enumerate() {
                red[c] = p;
            }
            for m1 in &row_matchings {
                for (c, &p) in m1.iter().enumerate() {
                    red[width + c] = width + p;
                }
                for m2 in &row_matchings {
                    for (c, &p) in m2.iter().enumerate() {
                        red[2 * width + c] = 2 * width + p;
                    }
                    for black in &blacks {
                        h[count_cycles(black, &red) as usize] += 1;
                    }
                }
            }
            h
        })
        .reduce(
            || vec![0u64; 2 * n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(histogram_to_poly(&hist))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn single_pair_type_one_gives_three_components() {
        let g = MomentGraph::from_row_pairs(vec![1], [&[(1, 2)], &[(1, 2)], &[(1, 2)]]).unwrap();
        assert_eq!(g.connected_components(), 2);
        // Red edges along the black ones: O1-O2, P1-Q1, P2-Q2.
        let red = vec![1, 0, 4, 5, 2, 3];
        let g = MomentGraph::new(vec![1], red).unwrap();
        assert_eq!(g.connected_components(), 3);
        assert_eq!(g.edge_vector(), EdgeVector::new(0, 0, 2));
    }

    #[test]
    fn order_four_same_row_graph_has_five_components() {
        let o: &[(usize, usize)] = &[(1, 2), (3, 5), (4, 6), (7, 8)];
        let pp: &[(usize, usize)] = &[(1, 3), (2, 6), (4, 5), (7, 8)];
        let q: &[(usize, usize)] = &[(1, 6), (2, 3), (4, 5), (7, 8)];
        let g = MomentGraph::from_row_pairs(vec![1, 2, 3, 4], [o, pp, q]).unwrap();
        assert_eq!(g.connected_components(), 5);
        assert_eq!(g.edge_vector(), EdgeVector::ZERO);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(MomentGraph::new(vec![5], vec![1, 0, 3, 2, 5, 4]).is_err());
        assert!(MomentGraph::new(vec![1], vec![1, 0, 3, 2, 5, 5]).is_err());
        assert!(MomentGraph::new(vec![], vec![]).is_err());
    }

    #[test]
    fn order_one_classes() {
        let classes = enumerate_classes(1).unwrap();
        assert_eq!(classes.len(), 5);
        assert_eq!(classes[&EdgeVector::ZERO], p(&[0, 2, 2]));
        assert_eq!(classes[&EdgeVector::new(2, 0, 0)], p(&[0, 4, 3, 1]));
        assert_eq!(classes[&EdgeVector::new(0, 0, 2)], p(&[0, 4, 3, 1]));
        assert_eq!(classes[&EdgeVector::new(0, 2, 0)], p(&[0, 6, 2]));
        assert_eq!(classes[&EdgeVector::new(1, 1, 1)], p(&[0, 16, 14, 2]));
        assert!(enumerate_classes(3).is_err());
    }

    #[test]
    fn same_row_small() {
        assert_eq!(enumerate_same_row(1).unwrap(), p(&[0, 2, 2]));
        assert_eq!(enumerate_same_row(3).unwrap().eval_exact_u64(1), 216_000.into());
        assert!(enumerate_same_row(4).is_err());
    }

    #[test]
    fn component_count_range() {
        for_each_matching(12, &mut |red| {
            for black in all_black(2) {
                let c = count_cycles(&black, red);
                assert!((1..=6).contains(&c));
            }
        });
    }
}
