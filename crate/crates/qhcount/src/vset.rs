//! Small sets of 1-based vertices backed by a bitmask.

use std::fmt;

/// Largest vertex index a [`VertexSet`] can hold.
pub const MAX_VERTICES: usize = 128;

/// A set of vertices drawn from `1..=128`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: usize) -> Self {
        let mut s = Self::EMPTY;
        s.insert(v);
        s
    }

    pub fn insert(&mut self, v: usize) {
        assert!(
            (1..=MAX_VERTICES).contains(&v),
            "vertex {v} out of range 1..={MAX_VERTICES}"
        );
        self.0 |= 1u128 << (v - 1);
    }

    pub fn remove(&mut self, v: usize) {
        assert!((1..=MAX_VERTICES).contains(&v));
        self.0 &= !(1u128 << (v - 1));
    }

    pub fn contains(&self, v: usize) -> bool {
        v >= 1 && v <= MAX_VERTICES && self.0 & (1u128 << (v - 1)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn bits(&self) -> u128 {
        self.0
    }

    /// Vertices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=MAX_VERTICES).filter(move |&v| self.contains(v))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = Self::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
