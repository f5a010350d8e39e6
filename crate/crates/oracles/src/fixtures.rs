//! Named queries, view sets and hypergraphs used across the tests.
//!
//! `h_v0`, `nonmonotone_pair` and `db4` are hand-built to have the
//! properties the tests check for.

use std::collections::BTreeSet;

use tpq_core::{Database, Hypergraph, Query, Relation, ViewSystem};
use tpq_core::views::make_view_system;

use tpq_core::relational::evaluate;

use crate::{hg, name_set, names};

pub fn query(text: &str) -> Query {
    text.parse().expect("fixture query parses")
}

pub fn q0() -> Query {
    query("r1(A,B,C) ∧ r2(A,F) ∧ r3(C,D) ∧ r4(D,E,F) ∧ r5(E,F,G) ∧ r6(G,H,I) ∧ r7(I,J) ∧ r8(J,K)")
}

/// Views over `Q_0`: the query views plus four extra
/// views, one of them `{A,B,C,D,H}`.
pub fn h_v0() -> Hypergraph {
    hg(&["ABC", "AF", "CD", "DEF", "EFG", "GHI", "IJ", "JK", "ABCDH", "ADEF", "EFGI", "HIJ"])
}

pub fn q1() -> Query {
    query("r(A,B) ∧ r(B,C) ∧ r(C,D) ∧ r(D,A)")
}

pub fn q2() -> Query {
    query("r(A,B) ∧ r(B,C) ∧ r(D,C) ∧ r(A,D)")
}

pub fn q3() -> Query {
    query("r(B,A) ∧ r(C,B) ∧ r(C,D) ∧ r(D,A)")
}

pub fn q4() -> Query {
    query("r(A,B) ∧ r(B,C) ∧ r(A,C) ∧ r(D,C) ∧ r(D,B) ∧ r(A,E) ∧ r(F,E)")
}

pub fn q5() -> Query {
    query("r(A,B) ∧ r(B,C) ∧ r(A,C)")
}

pub fn q6() -> Query {
    query("r(D,B) ∧ r(B,C) ∧ r(D,C)")
}

pub fn q7() -> Query {
    query("r1(A,B) ∧ r2(B,C) ∧ r3(C,D) ∧ r4(D,E) ∧ r5(A,E)")
}

pub fn q8() -> Query {
    query("r1(A,B) ∧ r2(B,C) ∧ r3(A,C) ∧ r4(C,D)")
}

pub fn v4_extra() -> Vec<BTreeSet<String>> {
    vec![name_set(&["A", "B", "C"]), name_set(&["A", "F"])]
}

/// The query views of `Q_4` plus `v_1(A,B,C)` and `v_2(A,F)`.
pub fn v4() -> ViewSystem {
    make_view_system(&q4(), &v4_extra()).expect("valid view system")
}

pub fn v7_extra() -> Vec<BTreeSet<String>> {
    vec![
        name_set(&["A", "B", "E"]),
        name_set(&["B", "C", "E"]),
        name_set(&["A", "C", "E"]),
        name_set(&["A", "C", "D"]),
        name_set(&["A", "D", "E"]),
    ]
}

/// `V_7` together with the query views of `Q_7`.
pub fn v7() -> ViewSystem {
    make_view_system(&q7(), &v7_extra()).expect("valid view system")
}

/// A pair the Captain wins greedily but not monotonically.
pub fn nonmonotone_pair() -> (Hypergraph, Hypergraph) {
    (
        hg(&["AB", "BC", "CD", "DE", "CE", "EF", "FG"]),
        hg(&["ACDEG", "AB", "BC", "EF", "FG"]),
    )
}

fn grid_var(i: usize, j: usize) -> String {
    format!("X{i}_{j}")
}

/// The `n × n` grid over one binary relation `e`, each atom oriented from
/// the cell with even coordinate sum to its odd neighbour.
pub fn grid(n: usize) -> Query {
    let mut atoms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for (a, b) in [(i + 1, j), (i, j + 1)] {
                if a < n && b < n {
                    let (u, v) = if (i + j) % 2 == 0 {
                        (grid_var(i, j), grid_var(a, b))
                    } else {
                        (grid_var(a, b), grid_var(i, j))
                    };
                    atoms.push(format!("e({u},{v})"));
                }
            }
        }
    }
    query(&atoms.join(" ∧ "))
}

pub fn relation(arity: usize, rows: &[&[&str]]) -> Relation {
    Relation::from_tuples(arity, rows.iter().map(|r| r.iter().copied())).expect("fixture arity")
}

/// A database for `Q_4` and `V_4` whose view relations are locally
/// consistent while the views over `{D,C}` and `{D,B}` hold tuples that are
/// not in the answer.
///
/// `r` holds two triangles `a b c` and `a2 b2 c2`, the `E`, `F` tails, and
/// values `d`, `d2` linking the `B` of one triangle to the `C` of the other.
/// Every answer maps `D` onto the `A` of a triangle, so `(c2, d)` and
/// `(b, d)` dangle.
pub fn db4() -> Database {
    let mut db = Database::new();
    db.insert(
        "r",
        relation(
            2,
            &[
                &["a", "b"],
                &["b", "c"],
                &["a", "c"],
                &["a2", "b2"],
                &["b2", "c2"],
                &["a2", "c2"],
                &["a", "e"],
                &["a2", "e"],
                &["f", "e"],
                &["d", "b"],
                &["d", "c2"],
                &["d2", "b2"],
                &["d2", "c"],
            ],
        ),
    );
    // Query views in atom order; columns follow sorted variable names.
    db.insert("__v::q0", relation(2, &[&["a", "b"], &["a2", "b2"]]));
    db.insert("__v::q1", relation(2, &[&["b", "c"], &["b2", "c2"]]));
    db.insert("__v::q2", relation(2, &[&["a", "c"], &["a2", "c2"]]));
    db.insert("__v::q3", relation(2, &[&["c", "a"], &["c2", "a2"], &["c2", "d"], &["c", "d2"]]));
    db.insert("__v::q4", relation(2, &[&["b", "a"], &["b2", "a2"], &["b", "d"], &["b2", "d2"]]));
    db.insert("__v::w0", relation(3, &[&["a", "b", "c"], &["a2", "b2", "c2"]]));
    // The views over the tails hold exactly the answer projections.
    for (name, vars) in [("__v::q5", ["A", "E"]), ("__v::q6", ["E", "F"]), ("__v::w1", ["A", "F"])] {
        let vars = names(&vars);
        let t = evaluate(&q4(), &db, &vars).expect("fixture evaluates");
        db.set_table(name, &t, &vars);
    }
    db
}
