//! Flat bit-vector subsets of `{0, .., universe - 1}`.
//!
//! Used for subsets of a finite field (indexed by element idx) and for vertex
//! sets of the clique engine.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    universe: usize,
    bits: Vec<u64>,
    count: usize,
}

#[inline]
fn words_for(universe: usize) -> usize {
    universe.div_ceil(64)
}

impl ElemSet {
    pub fn empty(universe: usize) -> Self {
        ElemSet {
            universe,
            bits: vec![0; words_for(universe)],
            count: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for w in s.bits.iter_mut() {
            *w = !0;
        }
        if universe % 64 != 0 {
            if let Some(last) = s.bits.last_mut() {
                *last = (1u64 << (universe % 64)) - 1;
            }
        }
        s.count = universe;
        s
    }

    /// Builds a set from indices; indices `>= universe` are a caller bug.
    pub fn from_indices<I: IntoIterator<Item = u64>>(universe: usize, it: I) -> Self {
        let mut s = Self::empty(universe);
        for i in it {
            s.insert(i);
        }
        s
    }

    pub(crate) fn from_words(universe: usize, bits: Vec<u64>) -> Self {
        debug_assert_eq!(bits.len(), words_for(universe));
        let count = bits.iter().map(|w| w.count_ones() as usize).sum();
        ElemSet {
            universe,
            bits,
            count,
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    #[inline]
    pub fn contains(&self, i: u64) -> bool {
        let i = i as usize;
        i < self.universe && (self.bits[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Returns true if the element was newly inserted.
    pub fn insert(&mut self, i: u64) -> bool {
        let i = i as usize;
        assert!(i < self.universe, "index {i} outside universe {}", self.universe);
        let (w, b) = (i / 64, 1u64 << (i % 64));
        if self.bits[w] & b == 0 {
            self.bits[w] |= b;
            self.count += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, i: u64) -> bool {
        let i = i as usize;
        if i >= self.universe {
            return false;
        }
        let (w, b) = (i / 64, 1u64 << (i % 64));
        if self.bits[w] & b != 0 {
            self.bits[w] &= !b;
            self.count -= 1;
            true
        } else {
            false
        }
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            bits: &self.bits,
            word: 0,
            cur: self.bits.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<u64> {
        self.iter().next()
    }

    fn check_universe(&self, other: &ElemSet) {
        assert_eq!(self.universe, other.universe, "universe mismatch");
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        self.check_universe(other);
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        ElemSet::from_words(self.universe, bits)
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        self.check_universe(other);
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        ElemSet::from_words(self.universe, bits)
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        self.check_universe(other);
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & !b).collect();
        ElemSet::from_words(self.universe, bits)
    }

    pub fn intersection_len(&self, other: &ElemSet) -> usize {
        self.check_universe(other);
        self.bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.check_universe(other);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &ElemSet) -> bool {
        self.intersection_len(other) == 0
    }

    /// Lexicographic comparison of the ascending index lists.
    pub fn cmp_lex(&self, other: &ElemSet) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

pub struct Iter<'a> {
    bits: &'a [u64],
    word: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as u64;
                self.cur &= self.cur - 1;
                return Some(self.word as u64 * 64 + tz);
            }
            self.word += 1;
            if self.word >= self.bits.len() {
                return None;
            }
            self.cur = self.bits[self.word];
        }
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElemSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}
