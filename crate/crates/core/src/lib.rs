//! Tree projections of conjunctive queries.
//!
//! This crate is the algorithmic core: hypergraph algebra (acyclicity, join
//! trees, expansions), conjunctive queries with a brute-force evaluator and
//! core computation, view systems and the decomposition-method generators,
//! local consistency and reducts, the Robber-and-Captain game with greedy
//! strategies and their monotonization, the tp-covering analysis, and a
//! Yannakakis-style evaluation engine over tree projections.
//!
//! It is `no_std` and only needs `alloc`. IO, file formats and the CLI live in
//! the `tpq` crate.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod consistency;
pub mod engine;
mod error;
pub mod game;
pub mod hypergraph;
mod nodeset;
pub mod relational;
pub mod views;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, JoinTree, Separation};
pub use nodeset::NodeSet;
pub use relational::{Atom, Database, Query, Relation, Table, Term};
pub use views::{Method, View, ViewSystem};
