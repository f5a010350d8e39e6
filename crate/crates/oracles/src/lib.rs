//! Slow, obviously-correct reference implementations, shared fixtures and
//! random instance generators for the test suites.
//!
//! Nothing here reuses the algorithms under test. Hypergraphs are handled as
//! plain lists of name sets.

pub mod fixtures;
pub mod gen;
pub mod naive;

use std::collections::BTreeSet;

use tpq_core::Hypergraph;

/// An edge as a set of node names.
pub type Edge = BTreeSet<String>;

/// The edges of `h` as name sets.
pub fn edges_of(h: &Hypergraph) -> Vec<Edge> {
    h.edge_name_lists()
        .into_iter()
        .map(|e| e.into_iter().collect())
        .collect()
}

/// Builds a hypergraph from strings of single-letter node names.
pub fn hg(edges: &[&str]) -> Hypergraph {
    Hypergraph::from_edges(edges.iter().map(|e| e.chars().map(String::from).collect::<Vec<_>>()))
        .expect("valid hypergraph")
}

pub fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

pub fn name_set(v: &[&str]) -> BTreeSet<String> {
    v.iter().map(|s| s.to_string()).collect()
}
