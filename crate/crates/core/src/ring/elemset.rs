use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of a finite universe `0..n`, indexed by canonical element order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet(FixedBitSet);

impl ElemSet {
    pub fn empty(n: usize) -> Self {
        ElemSet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut s = FixedBitSet::with_capacity(n);
        s.insert_range(..);
        ElemSet(s)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = ElemSet::empty(n);
        for i in it {
            s.insert(i);
        }
        s
    }

    /// Only valid for universes of at most 64 elements.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= 64);
        ElemSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1))
    }

    pub fn to_mask(&self) -> u64 {
        debug_assert!(self.universe() <= 64);
        self.iter().fold(0u64, |m, i| m | 1 << i)
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.universe()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Smallest element of `self` missing from `other`.
    pub fn first_outside(&self, other: &ElemSet) -> Option<usize> {
        self.0.difference(&other.0).next()
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.0.clone();
        s.union_with(&other.0);
        ElemSet(s)
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.0.clone();
        s.intersect_with(&other.0);
        ElemSet(s)
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.0.clone();
        s.difference_with(&other.0);
        ElemSet(s)
    }

    pub fn complement(&self) -> ElemSet {
        let mut s = self.0.clone();
        s.toggle_range(..);
        ElemSet(s)
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
