// SPDX-License-Identifier: MPL-2.0
//! Dense node-set over `0..p`.

use std::fmt;

use fixedbitset::FixedBitSet;

/// Membership set over the nodes `0..p` of a graph.
///
/// Iteration is always in ascending node order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    bits: FixedBitSet,
}

impl NodeSet {
    pub fn new(p: usize) -> Self {
        NodeSet {
            bits: FixedBitSet::with_capacity(p),
        }
    }

    /// The full set `0..p`.
    pub fn full(p: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(p);
        bits.insert_range(..);
        NodeSet { bits }
    }

    /// Builds a set from node ids. Panics if an id is `>= p`.
    pub fn from_nodes<I: IntoIterator<Item = usize>>(p: usize, nodes: I) -> Self {
        let mut s = NodeSet::new(p);
        for v in nodes {
            s.insert(v);
        }
        s
    }

    pub fn singleton(p: usize, v: usize) -> Self {
        Self::from_nodes(p, [v])
    }

    /// Number of nodes in the universe, not the number of members.
    #[inline]
    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    /// Returns `true` if `v` was newly inserted.
    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        !self.bits.put(v)
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn clear(&mut self) {
        self.bits.clear();
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &NodeSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    /// `|self ∩ other|` without allocating.
    pub fn intersection_count(&self, other: &NodeSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// Complement within `0..p`.
    pub fn complement(&self) -> NodeSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        NodeSet { bits }
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Extend<usize> for NodeSet {
    fn extend<T: IntoIterator<Item = usize>>(&mut self, iter: T) {
        for v in iter {
            self.insert(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = NodeSet::from_nodes(10, [1, 3, 5, 7]);
        let b = NodeSet::from_nodes(10, [3, 4, 5]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3, 5]);
        assert_eq!(a.union(&b).to_vec(), vec![1, 3, 4, 5, 7]);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 7]);
        assert_eq!(a.intersection_count(&b), 2);
        assert_eq!(a.complement().len(), 6);
        assert!(NodeSet::from_nodes(10, [3]).is_subset(&b));
    }

    #[test]
    fn iteration_is_ascending() {
        let s = NodeSet::from_nodes(70, [65, 2, 40, 0]);
        assert_eq!(s.to_vec(), vec![0, 2, 40, 65]);
        let mut s2 = s.clone();
        assert!(!s2.insert(40));
        assert!(s2.insert(41));
    }

    #[test]
    fn full_and_empty() {
        assert_eq!(NodeSet::full(5).to_vec(), vec![0, 1, 2, 3, 4]);
        assert!(NodeSet::new(0).is_empty());
        assert!(NodeSet::full(0).is_empty());
    }
}
