//! Homomorphisms between queries and core enumeration.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::eval::Solver;
use super::{Atom, Database, Query, Relation, Term};
use crate::hypergraph::for_each_combination;
use crate::{Error, Result};

/// Default cap on the number of distinct atoms for [`cores`].
pub const DEFAULT_CORE_CAP: usize = 12;

fn encode(t: &Term) -> String {
    match t {
        Term::Var(v) => format!("?{v}"),
        Term::Const(c) => format!("={c}"),
    }
}

fn decode(s: &str) -> Term {
    match s.split_at(1) {
        ("?", v) => Term::Var(String::from(v)),
        (_, c) => Term::Const(String::from(c)),
    }
}

/// `q` as a database whose domain elements are its terms.
fn as_structure(q: &Query) -> Database {
    let mut db = Database::new();
    for a in q.atoms() {
        if !db.contains(&a.relation) {
            db.insert(a.relation.clone(), Relation::new(a.arity()));
        }
        db.get_mut(&a.relation)
            .unwrap()
            .insert(a.terms.iter().map(encode).collect());
    }
    db
}

/// `q` with constants renamed into the structure encoding and the variables
/// in `fixed` pinned to themselves.
fn as_pattern(q: &Query, fixed: &BTreeSet<&str>) -> Query {
    let atoms = q
        .atoms()
        .iter()
        .map(|a| Atom {
            relation: a.relation.clone(),
            terms: a
                .terms
                .iter()
                .map(|t| match t {
                    Term::Var(v) if !fixed.contains(v.as_str()) => t.clone(),
                    _ => Term::Const(encode(t)),
                })
                .collect(),
        })
        .collect();
    Query { atoms }
}

fn search(
    q1: &Query,
    q2: &Query,
    fixed: &BTreeSet<&str>,
    injective: bool,
) -> Option<BTreeMap<String, Term>> {
    let target = as_structure(q2);
    let pattern = as_pattern(q1, fixed);
    let solver = Solver::new(&pattern, &target).ok()?;
    let mut found = None;
    solver.search(injective, |a| {
        found = Some(
            solver
                .vars()
                .iter()
                .zip(a)
                .map(|(v, &x)| (v.clone(), decode(solver.value(x))))
                .collect::<BTreeMap<_, _>>(),
        );
        false
    });
    let mut h = found?;
    for v in fixed {
        h.insert(String::from(*v), Term::Var(String::from(*v)));
    }
    Some(h)
}

/// A homomorphism from `q1` to `q2` viewed as a structure over its terms.
/// Constants map to themselves.
pub fn homomorphism(q1: &Query, q2: &Query) -> Option<BTreeMap<String, Term>> {
    search(q1, q2, &BTreeSet::new(), false)
}

/// A homomorphism from `q1` to `q2` that maps every variable in `fixed` to
/// itself.
pub fn homomorphism_fixing(
    q1: &Query,
    q2: &Query,
    fixed: &BTreeSet<&str>,
) -> Option<BTreeMap<String, Term>> {
    search(q1, q2, fixed, false)
}

fn distinct_atoms(q: &Query) -> BTreeSet<&Atom> {
    q.atoms().iter().collect()
}

/// Isomorphism as structures, up to duplicate atoms: injective
/// homomorphisms in both directions between equally sized atom sets.
pub fn is_isomorphic(q1: &Query, q2: &Query) -> bool {
    distinct_atoms(q1).len() == distinct_atoms(q2).len()
        && q1.vars().len() == q2.vars().len()
        && search(q1, q2, &BTreeSet::new(), true).is_some()
        && search(q2, q1, &BTreeSet::new(), true).is_some()
}

/// All cores of `q` with the default cap.
pub fn cores(q: &Query) -> Result<Vec<Query>> {
    cores_with_cap(q, DEFAULT_CORE_CAP)
}

/// All cores of `q`: the minimal atom subsets `Q'` admitting a
/// homomorphism `q → Q'`, each returned as a sub-query in atom order.
pub fn cores_with_cap(q: &Query, cap: usize) -> Result<Vec<Query>> {
    let mut first_seen = BTreeSet::new();
    let atoms: Vec<usize> = (0..q.len())
        .filter(|&i| first_seen.insert(&q.atoms()[i]))
        .collect();
    if atoms.len() > cap {
        return Err(Error::CapExceeded {
            atoms: atoms.len(),
            cap,
        });
    }
    let symbols = q.relation_symbols();
    let mut found = Vec::new();
    for size in 1..=atoms.len() {
        for_each_combination(atoms.len(), size, |combo| {
            let picked: Vec<usize> = combo.iter().map(|&c| atoms[c]).collect();
            let present: BTreeSet<&str> = picked
                .iter()
                .map(|&i| q.atoms()[i].relation.as_str())
                .collect();
            if present != symbols {
                return;
            }
            let sub = Query {
                atoms: picked.iter().map(|&i| q.atoms()[i].clone()).collect(),
            };
            if homomorphism(q, &sub).is_some() {
                found.push(sub);
            }
        });
        if !found.is_empty() {
            break;
        }
    }
    assert!(
        found.iter().all(|c| is_isomorphic(c, &found[0])),
        "cores must be pairwise isomorphic"
    );
    Ok(found)
}
