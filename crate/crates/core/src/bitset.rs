//! Fixed-width bit masks used for point sets and element sets.
//!
//! Domains in the verification batteries have at most 64 points, so the hot
//! engines are instantiated with `u64`. Larger enumerated domains fall back
//! to the heap-backed [`WideMask`].

use std::hash::Hash;

/// A set of indices `0..len` backed by machine words.
pub trait Mask: Clone + PartialEq + Eq + Hash + Send + Sync {
    fn zero(len: usize) -> Self;
    fn full(len: usize) -> Self;
    fn set(&mut self, i: usize);
    fn clear(&mut self, i: usize);
    fn test(&self, i: usize) -> bool;
    fn and(&self, other: &Self) -> Self;
    fn or(&self, other: &Self) -> Self;
    /// Set difference `self \ other`.
    fn minus(&self, other: &Self) -> Self;
    fn is_empty(&self) -> bool;
    fn count(&self) -> usize;
    fn is_subset_of(&self, other: &Self) -> bool;
    fn intersects(&self, other: &Self) -> bool;
    fn iter_ones(&self, len: usize) -> Vec<usize>;
    fn first_one(&self) -> Option<usize>;
}

impl Mask for u64 {
    fn zero(_len: usize) -> Self {
        0
    }
    fn full(len: usize) -> Self {
        debug_assert!(len <= 64);
        if len == 64 {
            !0
        } else {
            (1u64 << len) - 1
        }
    }
    fn set(&mut self, i: usize) {
        *self |= 1 << i;
    }
    fn clear(&mut self, i: usize) {
        *self &= !(1 << i);
    }
    fn test(&self, i: usize) -> bool {
        (*self >> i) & 1 == 1
    }
    fn and(&self, other: &Self) -> Self {
        self & other
    }
    fn or(&self, other: &Self) -> Self {
        self | other
    }
    fn minus(&self, other: &Self) -> Self {
        self & !other
    }
    fn is_empty(&self) -> bool {
        *self == 0
    }
    fn count(&self) -> usize {
        self.count_ones() as usize
    }
    fn is_subset_of(&self, other: &Self) -> bool {
        self & !other == 0
    }
    fn intersects(&self, other: &Self) -> bool {
        self & other != 0
    }
    fn iter_ones(&self, _len: usize) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.count_ones() as usize);
        let mut m = *self;
        while m != 0 {
            v.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        v
    }
    fn first_one(&self) -> Option<usize> {
        if *self == 0 {
            None
        } else {
            Some(self.trailing_zeros() as usize)
        }
    }
}

/// Heap-backed mask for domains with more than 64 points.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WideMask(pub Box<[u64]>);

impl Mask for WideMask {
    fn zero(len: usize) -> Self {
        WideMask(vec![0; len.div_ceil(64).max(1)].into_boxed_slice())
    }
    fn full(len: usize) -> Self {
        let mut m = Self::zero(len);
        for i in 0..len {
            m.set(i);
        }
        m
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn test(&self, i: usize) -> bool {
        (self.0[i / 64] >> (i % 64)) & 1 == 1
    }
    fn and(&self, other: &Self) -> Self {
        WideMask(self.0.iter().zip(other.0.iter()).map(|(a, b)| a & b).collect())
    }
    fn or(&self, other: &Self) -> Self {
        WideMask(self.0.iter().zip(other.0.iter()).map(|(a, b)| a | b).collect())
    }
    fn minus(&self, other: &Self) -> Self {
        WideMask(self.0.iter().zip(other.0.iter()).map(|(a, b)| a & !b).collect())
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_subset_of(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }
    fn intersects(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).any(|(a, b)| a & b != 0)
    }
    fn iter_ones(&self, _len: usize) -> Vec<usize> {
        let mut v = Vec::new();
        for (wi, &w) in self.0.iter().enumerate() {
            let mut m = w;
            while m != 0 {
                v.push(wi * 64 + m.trailing_zeros() as usize);
                m &= m - 1;
            }
        }
        v
    }
    fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.0.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_mask_matches_u64_semantics() {
        let mut w = WideMask::zero(100);
        let mut n: u64 = Mask::zero(60);
        for i in [0usize, 3, 17, 59] {
            w.set(i);
            n.set(i);
        }
        assert_eq!(w.count(), n.count());
        assert_eq!(w.iter_ones(100), n.iter_ones(60));
        assert_eq!(w.first_one(), n.first_one());
        w.set(90);
        assert_eq!(w.count(), 5);
        assert!(w.test(90));
        let full = WideMask::full(100);
        assert!(w.is_subset_of(&full));
        assert!(!full.is_subset_of(&w));
        assert_eq!(full.minus(&w).count(), 95);
    }
}
