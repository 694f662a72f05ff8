//! Exact Gaussian elimination on sparse vectors.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// A sparse vector keyed by an ordered coordinate type.
pub type SparseVector<K> = BTreeMap<K, Scalar>;

/// Incremental row-echelon basis over exact scalars.
#[derive(Clone, Debug)]
pub struct EchelonBasis<K: Ord + Clone> {
    /// Rows keyed by their pivot coordinate; each row has coefficient 1 at its pivot.
    rows: BTreeMap<K, SparseVector<K>>,
}

impl<K: Ord + Clone> Default for EchelonBasis<K> {
    fn default() -> Self {
        Self { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> EchelonBasis<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis.
    pub fn reduce(&self, v: &SparseVector<K>) -> SparseVector<K> {
        let mut v = v.clone();
        v.retain(|_, c| !c.is_zero());
        loop {
            let hit = v
                .iter()
                .find(|(k, _)| self.rows.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((k, c)) = hit else { return v };
            for (j, x) in &self.rows[&k] {
                let slot = v.entry(j.clone()).or_insert_with(Scalar::zero);
                *slot -= &c * x;
                if slot.is_zero() {
                    v.remove(j);
                }
            }
        }
    }

    /// Adds `v` to the span; returns false when it was already dependent.
    pub fn insert(&mut self, v: &SparseVector<K>) -> bool {
        let r = self.reduce(v);
        let Some((pivot, c)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Scalar::one() / c;
        let row: SparseVector<K> = r.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        self.rows.insert(pivot, row);
        true
    }

    pub fn contains(&self, v: &SparseVector<K>) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Rank of a family of sparse vectors.
pub fn rank<K: Ord + Clone>(vectors: &[SparseVector<K>]) -> usize {
    let mut basis = EchelonBasis::new();
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}
