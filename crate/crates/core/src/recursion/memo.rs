use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::edge::EdgeVector;
use crate::poly::IntPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemoKey {
    pub n: u32,
    pub a: EdgeVector,
}

impl MemoKey {
    pub const fn new(n: u32, a: EdgeVector) -> Self {
        Self { n, a }
    }
}

/// Insert-once table of computed polynomials, shared across worker threads.
#[derive(Debug, Default)]
pub struct MemoTable {
    entries: RwLock<HashMap<MemoKey, Arc<IntPolynomial>>>,
}

impl MemoTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &MemoKey) -> Option<Arc<IntPolynomial>> {
        self.entries.read().get(key).cloned()
    }

    pub fn contains(&self, key: &MemoKey) -> bool {
        self.entries.read().contains_key(key)
    }

    /// Stores `value` unless the key is already present, and returns whatever
    /// the table holds afterwards. The first writer wins.
    pub fn insert(&self, key: MemoKey, value: IntPolynomial) -> Arc<IntPolynomial> {
        let mut map = self.entries.write();
        let stored = map.entry(key).or_insert_with(|| Arc::new(value));
        Arc::clone(stored)
    }

    pub fn len(&self) -> usize {
        self.entries.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.read().is_empty()
    }

    /// Sorted snapshot of all keys.
    pub fn keys(&self) -> Vec<MemoKey> {
        let mut keys: Vec<MemoKey> = self.entries.read().keys().copied().collect();
        keys.sort_unstable();
        keys
    }

    /// Sorted snapshot of all entries.
    pub fn entries(&self) -> Vec<(MemoKey, Arc<IntPolynomial>)> {
        let mut out: Vec<_> = self
            .entries
            .read()
            .iter()
            .map(|(k, v)| (*k, Arc::clone(v)))
            .collect();
        out.sort_unstable_by_key(|(k, _)| *k);
        out
    }
}

impl PartialEq for MemoTable {
    fn eq(&self, other: &Self) -> bool {
        *self.entries.read() == *other.entries.read()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_insert_wins() {
        let memo = MemoTable::new();
        let key = MemoKey::new(1, EdgeVector::ZERO);
        memo.insert(key, IntPolynomial::from_i64s(&[0, 2, 2]));
        let kept = memo.insert(key, IntPolynomial::from_i64s(&[9]));
        assert_eq!(*kept, IntPolynomial::from_i64s(&[0, 2, 2]));
        assert_eq!(memo.len(), 1);
    }
}
