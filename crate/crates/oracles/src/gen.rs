//! Random instance generators.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use tpq_core::relational::evaluate;
use tpq_core::views::query_view_database;
use tpq_core::{Atom, Database, Hypergraph, Query, Relation, ViewSystem};

/// Node name for index `i`: `A`..`Z`, then `N26`, ...
pub fn node(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("N{i}")
    }
}

fn random_edge<R: Rng>(rng: &mut R, nodes: usize, max_arity: usize) -> Vec<String> {
    let k = rng.gen_range(1..=max_arity.min(nodes));
    let mut all: Vec<usize> = (0..nodes).collect();
    all.shuffle(rng);
    all[..k].iter().map(|&i| node(i)).collect()
}

/// A hypergraph with `edges` random edges over at most `nodes` nodes.
pub fn hypergraph<R: Rng>(rng: &mut R, nodes: usize, edges: usize, max_arity: usize) -> Hypergraph {
    let es: Vec<Vec<String>> = (0..edges).map(|_| random_edge(rng, nodes, max_arity)).collect();
    Hypergraph::from_edges(es).expect("generated hypergraph")
}

/// A random pair `(h1, h2)` over the same pool of nodes.
pub fn pair<R: Rng>(rng: &mut R, nodes: usize, e1: usize, a1: usize, e2: usize, a2: usize) -> (Hypergraph, Hypergraph) {
    (hypergraph(rng, nodes, e1, a1), hypergraph(rng, nodes, e2, a2))
}

/// A random query with `atoms` atoms of arity at most `max_arity` over at
/// most `vars` variables and `symbols` relation symbols of fixed arity.
pub fn query<R: Rng>(rng: &mut R, atoms: usize, vars: usize, max_arity: usize, symbols: usize) -> Query {
    let arities: Vec<usize> = (0..symbols).map(|_| rng.gen_range(1..=max_arity)).collect();
    let out: Vec<Atom> = (0..atoms)
        .map(|_| {
            let s = rng.gen_range(0..symbols);
            let vs: Vec<String> = (0..arities[s]).map(|_| node(rng.gen_range(0..vars))).collect();
            Atom::over_vars(format!("r{s}"), vs)
        })
        .collect();
    Query::new(out).expect("generated query")
}

/// A random acyclic query: each new atom shares variables with one earlier
/// atom and otherwise uses fresh ones. Every atom has its own symbol.
pub fn acyclic_query<R: Rng>(rng: &mut R, atoms: usize, max_arity: usize) -> Query {
    let mut next = 0;
    let mut fresh = |n: usize| {
        let v: Vec<String> = (next..next + n).map(node).collect();
        next += n;
        v
    };
    let mut bodies: Vec<Vec<String>> = Vec::new();
    for _ in 0..atoms {
        let arity = rng.gen_range(1..=max_arity);
        let vars = match bodies.choose(rng) {
            None => fresh(arity),
            Some(p) => {
                let mut shared: Vec<String> = p.clone();
                shared.shuffle(rng);
                shared.truncate(rng.gen_range(1..=arity.min(p.len())));
                let more = arity - shared.len();
                shared.extend(fresh(more));
                shared
            }
        };
        bodies.push(vars);
    }
    let out: Vec<Atom> = bodies
        .into_iter()
        .enumerate()
        .map(|(i, vs)| Atom::over_vars(format!("r{i}"), vs))
        .collect();
    Query::new(out).expect("generated query")
}

/// A random database for the symbols of `q` over `domain` values with up
/// to `tuples` tuples per relation.
pub fn database<R: Rng>(rng: &mut R, q: &Query, domain: usize, tuples: usize) -> Database {
    let mut db = Database::new();
    for a in q.atoms() {
        if db.contains(&a.relation) {
            continue;
        }
        let mut rel = Relation::new(a.arity());
        for _ in 0..rng.gen_range(0..=tuples) {
            rel.insert((0..a.arity()).map(|_| format!("d{}", rng.gen_range(0..domain))).collect());
        }
        db.insert(a.relation.clone(), rel);
    }
    db
}

/// A legal database for `vs`: the base relations, query views filled with
/// their atoms' relations, and every other view holding the answer
/// projection plus random noise over the active domain.
pub fn legal_views<R: Rng>(rng: &mut R, q: &Query, vs: &ViewSystem, base: &Database, noise: usize) -> Database {
    let mut db = base.merged(&query_view_database(q, vs, base).expect("query views"));
    let domain: Vec<String> = base.active_domain().into_iter().map(String::from).collect();
    for v in vs.views() {
        if v.is_query_view() {
            continue;
        }
        let mut t = evaluate(q, base, &v.vars).expect("evaluation");
        if !domain.is_empty() {
            for _ in 0..rng.gen_range(0..=noise) {
                t.insert(v.vars.iter().map(|_| domain.choose(rng).unwrap().clone()).collect());
            }
        }
        db.set_table(v.name.clone(), &t, &v.vars);
    }
    db
}

/// A random non-empty set of variables of `q`.
pub fn var_subset<R: Rng>(rng: &mut R, q: &Query, max: usize) -> BTreeSet<String> {
    let mut vars = q.var_list();
    vars.shuffle(rng);
    vars.truncate(rng.gen_range(1..=max.min(vars.len())));
    vars.into_iter().collect()
}
