//! Memoized evaluation of `g(n, a)`, the sum of `k^C(G)` over all moment
//! graphs of order `n` whose red edges cross rows according to `a`.
//!
//! Each step removes the first column pair. Every graph of order `n` maps to
//! a graph of order `n - 1` plus local data describing the removed block
//! (see [`block`]), so `g(n, a)` is a weighted sum of `g(n - 1, b)`.

pub mod block;
pub mod cache;
pub mod memo;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::closed_forms::double_factorial;
use crate::edge::EdgeVector;
use crate::error::{MomentError, Result};
use crate::poly::IntPolynomial;

pub use block::{CaseGroup, CaseId};
pub use cache::{load_memo, save_memo, DiskCache};
pub use memo::{MemoKey, MemoTable};

/// `g(1, a)` for the five valid vectors at order one.
pub fn base_case(a: EdgeVector) -> Result<IntPolynomial> {
    a.validate(1)?;
    let coeffs: &[i64] = match (a.a12, a.a13, a.a23) {
        (0, 0, 0) => &[0, 2, 2],
        (2, 0, 0) | (0, 0, 2) => &[0, 4, 3, 1],
        (0, 2, 0) => &[0, 6, 2],
        (1, 1, 1) => &[0, 16, 14, 2],
        _ => unreachable!("validated order-one vector {a}"),
    };
    Ok(IntPolynomial::from_i64s(coeffs))
}

/// One term of the expansion of `g(n, a)`: loop polynomial times
/// combinatorial factor times `g(n - 1, target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseContribution {
    pub case_id: CaseId,
    pub loop_factor: IntPolynomial,
    pub offset: [i64; 3],
    pub target: EdgeVector,
    pub combinatorial_factor: u64,
}

/// Every nonvanishing term of the expansion of `g(n, a)`, `n >= 2`.
pub fn case_contributions(n: u32, a: EdgeVector) -> Result<Vec<CaseContribution>> {
    check_recursive(n, a)?;
    let m = n - 1;
    let mut out = Vec::new();
    for g in block::moves() {
        let Some(b) = g.target(a) else { continue };
        if !b.is_valid(m) {
            continue;
        }
        let factor = g.combinatorial_factor(b, m);
        if factor == 0 {
            continue;
        }
        out.push(CaseContribution {
            case_id: g.case,
            loop_factor: IntPolynomial::from_i64s(&g.loop_weights.map(|w| w as i64)),
            offset: g.offset,
            target: b,
            combinatorial_factor: factor,
        });
    }
    Ok(out)
}

fn check_recursive(n: u32, a: EdgeVector) -> Result<()> {
    a.validate(n)?;
    if n < 2 {
        return Err(MomentError::InvalidParameter(format!(
            "recursive step needs n >= 2, got n = {n}"
        )));
    }
    Ok(())
}

/// Sum of the terms whose case lies in `groups`, reading `g(n - 1, ·)` from
/// `lookup`.
fn contribution(n: u32, a: EdgeVector, lookup: &MemoTable, groups: &[CaseGroup]) -> Result<IntPolynomial> {
    check_recursive(n, a)?;
    let m = n - 1;
    let mut weights: BTreeMap<EdgeVector, [u64; 4]> = BTreeMap::new();
    for g in block::moves() {
        if !groups.contains(&g.case.group()) {
            continue;
        }
        let Some(b) = g.target(a) else { continue };
        if !b.is_valid(m) {
            continue;
        }
        let factor = g.combinatorial_factor(b, m);
        if factor == 0 {
            continue;
        }
        let w = weights.entry(b).or_default();
        for (acc, lw) in w.iter_mut().zip(g.loop_weights) {
            *acc += factor * lw;
        }
    }
    let mut total = IntPolynomial::zero();
    for (b, w) in weights {
        let sub = lookup
            .get(&MemoKey::new(m, b))
            .ok_or(MomentError::MissingKey { n: m, a: b })?;
        for (shift, &factor) in w.iter().enumerate() {
            total.add_scaled_shifted(&sub, factor, shift);
        }
    }
    Ok(total)
}

const ALL_GROUPS: [CaseGroup; 4] = [
    CaseGroup::Closed,
    CaseGroup::OnePath,
    CaseGroup::TwoPaths,
    CaseGroup::ThreePaths,
];

/// Cases 1 through 4: the block closes into loops and `b = a + offset`.
pub fn contrib_cases_1_4(n: u32, a: EdgeVector, lookup: &MemoTable) -> Result<IntPolynomial> {
    contribution(n, a, lookup, &[CaseGroup::Closed])
}

/// Cases 5 through 12: a single path through the block.
pub fn contrib_cases_5_12(n: u32, a: EdgeVector, lookup: &MemoTable) -> Result<IntPolynomial> {
    contribution(n, a, lookup, &[CaseGroup::OnePath])
}

/// Cases 13 through 16: one internal red edge, two paths.
pub fn contrib_cases_13_16(n: u32, a: EdgeVector, lookup: &MemoTable) -> Result<IntPolynomial> {
    contribution(n, a, lookup, &[CaseGroup::TwoPaths])
}

/// Case 17: no internal red edges, three paths, no loops.
pub fn contrib_case_17(n: u32, a: EdgeVector, lookup: &MemoTable) -> Result<IntPolynomial> {
    contribution(n, a, lookup, &[CaseGroup::ThreePaths])
}

/// One full recursive step: `g(n, a)` from the order `n - 1` entries in
/// `lookup`.
pub fn recursive_step(n: u32, a: EdgeVector, lookup: &MemoTable) -> Result<IntPolynomial> {
    contribution(n, a, lookup, &ALL_GROUPS)
}

/// The order `n - 1` keys that `g(n, a)` reads.
pub fn dependencies(n: u32, a: EdgeVector) -> Result<Vec<EdgeVector>> {
    let set: BTreeSet<EdgeVector> = case_contributions(n, a)?.into_iter().map(|c| c.target).collect();
    Ok(set.into_iter().collect())
}

/// Evaluator owning a memo table and, optionally, a disk cache behind it.
#[derive(Debug, Default)]
pub struct Engine {
    memo: MemoTable,
    cache: Option<DiskCache>,
    computed: AtomicU64,
    loaded: AtomicU64,
}

impl Engine {
    /// An engine with an empty in-memory table and no disk cache.
    pub fn new() -> Self {
        Self::default()
    }

    /// An engine that reads missing keys from `dir` and writes every newly
    /// computed key back.
    pub fn with_cache(dir: impl AsRef<Path>) -> Result<Self> {
        Ok(Self {
            cache: Some(DiskCache::open(dir.as_ref())?),
            ..Self::default()
        })
    }

    pub fn memo(&self) -> &MemoTable {
        &self.memo
    }

    pub fn cache(&self) -> Option<&DiskCache> {
        self.cache.as_ref()
    }

    /// Keys evaluated by this engine (base cases included), as opposed to
    /// read from disk.
    pub fn computed_count(&self) -> u64 {
        self.computed.load(Ordering::Relaxed)
    }

    pub fn loaded_count(&self) -> u64 {
        self.loaded.load(Ordering::Relaxed)
    }

    /// `g(n, a)`. Finds every key the result depends on that is neither in
    /// memory nor on disk, then evaluates those keys order by order, in
    /// parallel within each order.
    pub fn g(&self, n: u32, a: EdgeVector) -> Result<Arc<IntPolynomial>> {
        a.validate(n)?;
        let key = MemoKey::new(n, a);
        if let Some(p) = self.memo.get(&key) {
            return Ok(p);
        }

        let mut plan: Vec<(u32, Vec<EdgeVector>)> = Vec::new();
        let mut pending = BTreeSet::from([a]);
        for m in (1..=n).rev() {
            let mut to_compute = Vec::new();
            let mut next = BTreeSet::new();
            for b in pending {
                let k = MemoKey::new(m, b);
                if self.memo.contains(&k) || self.try_load(&k)? {
                    continue;
                }
                if m == 1 {
                    self.finish(k, base_case(b)?)?;
                    continue;
                }
                next.extend(dependencies(m, b)?);
                to_compute.push(b);
            }
            plan.push((m, to_compute));
            if next.is_empty() {
                break;
            }
            pending = next;
        }

        for (m, keys) in plan.into_iter().rev() {
            keys.par_iter().try_for_each(|&b| {
                let value = recursive_step(m, b, &self.memo)?;
                self.finish(MemoKey::new(m, b), value)
            })?;
        }
        self.memo.get(&key).ok_or(MomentError::MissingKey { n, a })
    }

    fn try_load(&self, key: &MemoKey) -> Result<bool> {
        let Some(cache) = &self.cache else {
            return Ok(false);
        };
        match cache.load(key)? {
            Some(p) => {
                self.memo.insert(*key, p);
                self.loaded.fetch_add(1, Ordering::Relaxed);
                Ok(true)
            }
            None => Ok(false),
        }
    }

    fn finish(&self, key: MemoKey, value: IntPolynomial) -> Result<()> {
        if let Some(cache) = &self.cache {
            cache.store(&key, &value)?;
        }
        self.memo.insert(key, value);
        self.computed.fetch_add(1, Ordering::Relaxed);
        Ok(())
    }

    /// The second moment `M2(k, n) = (2n-1)!! g(n, 0, 0, 0)` as a polynomial in `k`.
    pub fn second_moment_polynomial(&self, n: u32) -> Result<IntPolynomial> {
        let g = self.g(n, EdgeVector::ZERO)?;
        Ok(g.scale(&double_factorial(2 * i64::from(n) - 1)?))
    }
}
