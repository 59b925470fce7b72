//! Fixed-universe bitsets.
//!
//! Subsets of a declared, ordered universe `0..len`. Element `i` lives in bit
//! `i % 64` of word `i / 64`, so universes of up to 64 elements fit in a
//! single word and subset enumeration is a counter over masks.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn empty(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    /// Builds the subset of `0..len` whose members are the set bits of
    /// `mask`. Bits at or above `len` are ignored.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        let mut s = Self::empty(len);
        if len > 0 {
            let keep = if len >= 64 {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            s.words[0] = mask & keep;
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, items: I) -> Self {
        let mut s = Self::empty(len);
        for i in items {
            s.insert(i);
        }
        s
    }

    /// Size of the universe, not the number of members.
    pub fn universe(&self) -> usize {
        self.len
    }

    /// The low word; the whole set when the universe has at most 64 elements.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn insert(&mut self, i: usize) -> bool {
        assert!(
            i < self.len,
            "element {i} outside universe of size {}",
            self.len
        );
        let had = self.contains(i);
        self.words[i / 64] |= 1 << (i % 64);
        !had
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let had = self.contains(i);
        if had {
            self.words[i / 64] &= !(1 << (i % 64));
        }
        had
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    /// Least element of `self \ other`, if any.
    pub fn first_not_in(&self, other: &BitSet) -> Option<usize> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find_map(|(k, (a, b))| {
                let d = a & !b;
                (d != 0).then(|| k * 64 + d.trailing_zeros() as usize)
            })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    /// All subsets of a universe of `len <= 63` elements, in mask order.
    pub fn all_subsets(len: usize) -> impl Iterator<Item = BitSet> {
        assert!(len < 64, "exhaustive subset enumeration needs len < 64");
        (0..1u64 << len).map(move |m| BitSet::from_mask(len, m))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = BitSet::from_indices(5, [0, 2]);
        let b = BitSet::from_indices(5, [0, 2, 4]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert_eq!(b.first_not_in(&a), Some(4));
        assert_eq!(a.union(&b), b);
        assert_eq!(a.intersection(&b), a);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 2, 4]);
        assert_eq!(b.count(), 3);
    }

    #[test]
    fn wide_universe() {
        let mut s = BitSet::empty(130);
        s.insert(129);
        s.insert(3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 129]);
        assert!(!BitSet::full(130).is_subset(&s));
        assert_eq!(BitSet::full(130).first_not_in(&s), Some(0));
    }

    #[test]
    fn subsets_in_mask_order() {
        let all: Vec<_> = BitSet::all_subsets(2).collect();
        assert_eq!(all.len(), 4);
        assert!(all[0].is_empty());
        assert_eq!(all[3], BitSet::full(2));
    }
}
