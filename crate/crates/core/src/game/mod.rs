//! The Robber-and-Captain game on a pair of hypergraphs `(H1, H2)`.
//!
//! The Robber runs along edges of `H1`; the Captain moves squads of cops, one
//! `H2` edge at a time. Greedy winning strategies are found by
//! [`greedy_strategy`], made nice by [`to_nice`], encoded as a
//! [`ComponentGraph`], turned monotone by [`monotonize`] and finally read off
//! as a [`TreeProjection`] by [`extract_tree_projection`].
//!
//! Node sets are expressed over the node indices of `H1`. Squads are the
//! edges of `H2` restricted to the nodes of `H1` and keep their `H2` index.
//! Nodes of `H1` that lie in no edge take no part in the game.

mod monotonize;
mod search;
mod strategy;

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Hypergraph, NodeSet};

pub use monotonize::{extract_tree_projection, monotonize, TreeProjection};
pub use search::{greedy_strategy, solve, Solution};
pub use strategy::{to_nice, CgNode, ComponentGraph, Config, Move, StrategyGraph};

/// Upper bound on the number of configurations a greedy strategy can visit.
pub fn config_bound(h1: &Hypergraph, h2: &Hypergraph) -> u128 {
    let en = (h2.edge_count() * h1.node_count()) as u128;
    en * (en + 1) + 1
}

/// `H1` and the squads of `H2`, with the reachability primitives of the game.
#[derive(Clone, Debug)]
pub(crate) struct Board {
    n: usize,
    edges: Vec<NodeSet>,
    incidence: Vec<Vec<usize>>,
    universe: NodeSet,
    squads: Vec<NodeSet>,
}

impl Board {
    pub(crate) fn new(h1: &Hypergraph, h2: &Hypergraph) -> Self {
        let n = h1.node_count();
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in h1.edges().iter().enumerate() {
            for x in e.iter() {
                incidence[x].push(i);
            }
        }
        Board {
            n,
            edges: h1.edges().to_vec(),
            incidence,
            universe: h1.covered_nodes(),
            squads: h2.edges().iter().map(|e| h2.translate(e, h1)).collect(),
        }
    }

    pub(crate) fn without_squads(h1: &Hypergraph) -> Self {
        Board::new(h1, &Hypergraph::from_parts(Vec::new(), Vec::new()))
    }

    pub(crate) fn universe(&self) -> &NodeSet {
        &self.universe
    }

    pub(crate) fn squads(&self) -> &[NodeSet] {
        &self.squads
    }

    pub(crate) fn squad(&self, h: usize) -> &NodeSet {
        &self.squads[h]
    }

    /// `F(C)`.
    pub(crate) fn frontier(&self, c: &NodeSet) -> NodeSet {
        let mut out = c.clone();
        for x in c.iter() {
            for &e in &self.incidence[x] {
                out.union_with(&self.edges[e]);
            }
        }
        out
    }

    /// `∂C = F(C) \ C`; empty for the whole universe.
    pub(crate) fn border(&self, c: &NodeSet) -> NodeSet {
        self.frontier(c).difference(c)
    }

    /// Nodes reachable from `start \ blocked` without entering `blocked`.
    fn reach(&self, start: &NodeSet, blocked: &NodeSet) -> NodeSet {
        let mut seen = NodeSet::empty(self.n);
        let mut queue: VecDeque<usize> = VecDeque::new();
        for x in start.iter().filter(|&x| !blocked.contains(x)) {
            seen.insert(x);
            queue.push_back(x);
        }
        while let Some(x) = queue.pop_front() {
            for &e in &self.incidence[x] {
                for y in self.edges[e].iter() {
                    if !blocked.contains(y) && !seen.contains(y) {
                        seen.insert(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        seen
    }

    /// `[blocked]`-components contained in `within`, by smallest member.
    fn split(&self, within: &NodeSet, blocked: &NodeSet) -> Vec<NodeSet> {
        let mut left = within.difference(blocked);
        let mut out = Vec::new();
        while let Some(x) = left.first() {
            let comp = self.reach(&NodeSet::from_indices(self.n, [x]), blocked);
            left.difference_with(&comp);
            out.push(comp);
        }
        out
    }

    /// `[blocked]`-components of the game universe.
    pub(crate) fn components(&self, blocked: &NodeSet) -> Vec<NodeSet> {
        self.split(&self.universe, blocked)
    }

    /// The components the Robber standing in `c` can escape to when the cops
    /// move to `cops`: the `[cops]`-components reachable from `c` while the
    /// cops staying on the border of `c` keep blocking.
    pub(crate) fn escape_components(&self, c: &NodeSet, cops: &NodeSet) -> Vec<NodeSet> {
        let staying = self.border(c).intersection(cops);
        let region = self.reach(c, &staying);
        self.split(&region, cops)
    }
}
