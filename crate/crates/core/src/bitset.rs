//! Fixed-universe bitsets used for every subset of an axis.

use std::cmp::Ordering;
use std::fmt;

const WORD_BITS: usize = 64;

/// A subset of `0..universe`, stored as packed 64-bit words.
///
/// Iteration is always in ascending index order. Ordering between two sets
/// is lexicographic over their ascending index sequences, so `{0, 5}` sorts
/// before `{1}` and a prefix sorts before its extensions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    universe: usize,
    words: Vec<u64>,
}

impl IndexSet {
    pub fn empty(universe: usize) -> Self {
        IndexSet {
            universe,
            words: vec![0; universe.div_ceil(WORD_BITS)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for w in set.words.iter_mut() {
            *w = u64::MAX;
        }
        set.trim();
        set
    }

    /// Builds a set from indices. Panics if an index is outside the universe.
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut set = Self::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn singleton(universe: usize, index: usize) -> Self {
        Self::from_indices(universe, [index])
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn insert(&mut self, index: usize) -> bool {
        assert!(
            index < self.universe,
            "index {index} outside universe {}",
            self.universe
        );
        let (w, b) = (index / WORD_BITS, index % WORD_BITS);
        let was = self.words[w] & (1 << b) != 0;
        self.words[w] |= 1 << b;
        !was
    }

    #[inline]
    pub fn remove(&mut self, index: usize) -> bool {
        if index >= self.universe {
            return false;
        }
        let (w, b) = (index / WORD_BITS, index % WORD_BITS);
        let was = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        was
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        index < self.universe && self.words[index / WORD_BITS] & (1 << (index % WORD_BITS)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &IndexSet) -> bool {
        other.is_subset(self)
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersect_with(&mut self, other: &IndexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &IndexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &IndexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn complement(&self) -> IndexSet {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// True when `self` and `other` agree on every index below `bound`.
    pub fn agrees_below(&self, other: &IndexSet, bound: usize) -> bool {
        let full_words = bound / WORD_BITS;
        if self.words[..full_words] != other.words[..full_words] {
            return false;
        }
        let rem = bound % WORD_BITS;
        if rem == 0 {
            return true;
        }
        let mask = (1u64 << rem) - 1;
        (self.words[full_words] ^ other.words[full_words]) & mask == 0
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * WORD_BITS + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

impl<'a> IntoIterator for &'a IndexSet {
    type Item = usize;
    type IntoIter = Ones<'a>;

    fn into_iter(self) -> Ones<'a> {
        self.iter()
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter()
            .cmp(other.iter())
            .then(self.universe.cmp(&other.universe))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_respects_universe() {
        let s = IndexSet::full(70);
        assert_eq!(s.len(), 70);
        assert!(s.contains(69));
        assert!(!s.contains(70));
        assert!(s.complement().is_empty());
    }

    #[test]
    fn lexicographic_order() {
        let a = IndexSet::from_indices(8, [0, 5]);
        let b = IndexSet::from_indices(8, [1]);
        let c = IndexSet::from_indices(8, [0]);
        assert!(a < b);
        assert!(c < a);
        assert!(IndexSet::empty(8) < c);
    }

    #[test]
    fn agrees_below_spans_words() {
        let a = IndexSet::from_indices(130, [3, 64, 100]);
        let b = IndexSet::from_indices(130, [3, 64, 101]);
        assert!(a.agrees_below(&b, 100));
        assert!(!a.agrees_below(&b, 101));
        assert!(a.agrees_below(&b, 64));
    }

    proptest! {
        #[test]
        fn set_algebra_matches_btreeset(
            xs in proptest::collection::btree_set(0usize..150, 0..40),
            ys in proptest::collection::btree_set(0usize..150, 0..40),
        ) {
            let a = IndexSet::from_indices(150, xs.iter().copied());
            let b = IndexSet::from_indices(150, ys.iter().copied());
            let inter: Vec<_> = xs.intersection(&ys).copied().collect();
            let uni: Vec<_> = xs.union(&ys).copied().collect();
            let diff: Vec<_> = xs.difference(&ys).copied().collect();
            prop_assert_eq!(a.intersection(&b).to_vec(), inter);
            prop_assert_eq!(a.union(&b).to_vec(), uni);
            prop_assert_eq!(a.difference(&b).to_vec(), diff);
            prop_assert_eq!(a.is_subset(&b), xs.is_subset(&ys));
            prop_assert_eq!(a.len(), xs.len());
            let xv: Vec<_> = xs.iter().copied().collect();
            let yv: Vec<_> = ys.iter().copied().collect();
            prop_assert_eq!(a.cmp(&b), xv.cmp(&yv));
        }
    }
}
