//! Sparse vectors over GF(2) keyed by an ordered term type.

use serde::Serialize;
use std::collections::BTreeSet;

/// A formal sum of distinct terms with coefficients in GF(2).
///
/// Adding a term that is already present cancels it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Gf2Vec<K: Ord> {
    terms: BTreeSet<K>,
}

impl<K: Ord> Default for Gf2Vec<K> {
    fn default() -> Self {
        Gf2Vec {
            terms: BTreeSet::new(),
        }
    }
}

impl<K: Ord + Clone> Gf2Vec<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(k: K) -> Self {
        let mut v = Self::zero();
        v.toggle(k);
        v
    }

    /// Flip the coefficient of `k`.
    pub fn toggle(&mut self, k: K) {
        if !self.terms.remove(&k) {
            self.terms.insert(k);
        }
    }

    pub fn contains(&self, k: &K) -> bool {
        self.terms.contains(k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &K> + '_ {
        self.terms.iter()
    }

    pub fn add_assign(&mut self, other: &Self) {
        for k in &other.terms {
            self.toggle(k.clone());
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// Apply `f` to every term, summing the images with cancellation.
    pub fn map<L: Ord + Clone>(&self, f: impl FnMut(&K) -> L) -> Gf2Vec<L> {
        self.iter().map(f).collect()
    }

    /// Keep only the terms satisfying `pred`.
    pub fn filter(&self, mut pred: impl FnMut(&K) -> bool) -> Self {
        Gf2Vec {
            terms: self.terms.iter().filter(|k| pred(k)).cloned().collect(),
        }
    }

    pub fn into_terms(self) -> BTreeSet<K> {
        self.terms
    }
}

/// Collecting toggles each item, so repeated items cancel in pairs.
impl<K: Ord + Clone> FromIterator<K> for Gf2Vec<K> {
    fn from_iter<I: IntoIterator<Item = K>>(iter: I) -> Self {
        let mut v = Gf2Vec::zero();
        for k in iter {
            v.toggle(k);
        }
        v
    }
}

impl<K: Ord + Clone> Extend<K> for Gf2Vec<K> {
    fn extend<I: IntoIterator<Item = K>>(&mut self, iter: I) {
        for k in iter {
            self.toggle(k);
        }
    }
}

impl<'a, K: Ord> IntoIterator for &'a Gf2Vec<K> {
    type Item = &'a K;
    type IntoIter = std::collections::btree_set::Iter<'a, K>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}
