use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

/// A set of node indices, stored as a bitset over a fixed universe.
///
/// Equality, ordering and hashing only look at the members, so sets built
/// over universes of different sizes still compare correctly. The ordering is
/// lexicographic over the ascending member sequence, which is the canonical
/// order used for edges and components throughout the crate.
#[derive(Clone, Default)]
pub struct NodeSet(FixedBitSet);

impl NodeSet {
    pub fn empty(universe: usize) -> Self {
        NodeSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        NodeSet(bits)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, members: I) -> Self {
        let mut set = Self::empty(universe);
        for m in members {
            set.insert(m);
        }
        set
    }

    /// Size of the underlying universe.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, node: usize) {
        if node >= self.0.len() {
            self.0.grow(node + 1);
        }
        self.0.insert(node);
    }

    pub fn remove(&mut self, node: usize) {
        if node < self.0.len() {
            self.0.set(node, false);
        }
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0.contains(node)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.minimum()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        !self.iter().any(|x| other.contains(x))
    }

    pub fn intersects(&self, other: &NodeSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        if other.0.len() > self.0.len() {
            self.0.grow(other.0.len());
        }
        self.0.union_with(&other.0);
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn difference_with(&mut self, other: &NodeSet) {
        self.0.difference_with(&other.0);
    }
}

impl PartialEq for NodeSet {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl Eq for NodeSet {}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl Hash for NodeSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for x in self.iter() {
            x.hash(state);
        }
        usize::MAX.hash(state);
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
