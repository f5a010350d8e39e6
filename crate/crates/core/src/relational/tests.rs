use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::*;

fn q(s: &str) -> Query {
    s.parse().unwrap()
}

fn vars(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| String::from(*s)).collect()
}

fn db(rels: &[(&str, usize, &[&[&str]])]) -> Database {
    let mut d = Database::new();
    for (name, arity, tuples) in rels {
        d.insert(*name, Relation::from_tuples(*arity, tuples.iter().map(|t| t.iter().copied())).unwrap());
    }
    d
}

#[test]
fn parse_and_display_round_trip() {
    let query = q("r(A,B) ∧ s(B,'c') & t(X, d)");
    assert_eq!(query.len(), 3);
    assert_eq!(query.atoms()[1].terms[1], Term::constant("c"));
    assert_eq!(query.atoms()[2].terms[1], Term::constant("d"));
    let again: Query = alloc::format!("{query}").parse().unwrap();
    assert_eq!(again, query);
}

#[test]
fn query_validation() {
    assert_eq!(Query::new(vec![]), Err(Error::EmptyQuery));
    assert!(matches!("r(A) ∧ r(A,B)".parse::<Query>(), Err(Error::ArityMismatch { .. })));
    assert_eq!("r(a)".parse::<Query>(), Err(Error::EmptyVarSet));
}

#[test]
fn evaluate_single_atom() {
    let d = db(&[("r", 2, &[&["a", "b"]])]);
    let t = evaluate(&q("r(A,B)"), &d, &vars(&["A", "B"])).unwrap();
    assert_eq!(t.rows().iter().collect::<Vec<_>>(), vec![&vars(&["a", "b"])]);
}

#[test]
fn evaluate_boolean() {
    let d = db(&[("r", 2, &[&["a", "b"]])]);
    assert!(evaluate(&q("r(A,B) ∧ r(B,A)"), &d, &[]).unwrap().is_empty());
    assert_eq!(evaluate(&q("r(A,B)"), &d, &[]).unwrap(), Table::truth());
}

#[test]
fn evaluate_constants_and_repeats() {
    let d = db(&[("r", 3, &[&["a", "a", "b"], &["a", "c", "b"], &["d", "d", "e"]])]);
    let t = evaluate(&q("r(A,A,b)"), &d, &vars(&["A"])).unwrap();
    assert_eq!(t.len(), 1);
    assert!(t.rows().contains(&vars(&["a"])));
}

#[test]
fn evaluate_missing_relation() {
    let d = db(&[("r", 2, &[])]);
    assert_eq!(
        evaluate(&q("s(A)"), &d, &[]),
        Err(Error::MissingRelation(String::from("s")))
    );
}

#[test]
fn semijoin_cases() {
    let left = Table::from_rows(vars(&["A", "B"]), [vars(&["a", "b"]), vars(&["a", "c"])]);
    let right = Table::from_rows(vars(&["B"]), [vars(&["b"])]);
    let out = left.semijoin(&right);
    assert_eq!(out.len(), 1);
    assert!(out.rows().contains(&vars(&["a", "b"])));
    let disjoint = Table::from_rows(vars(&["Z"]), [vars(&["z"])]);
    assert_eq!(left.semijoin(&disjoint), left);
    assert!(left.semijoin(&Table::new(vars(&["Z"]))).is_empty());
    assert_eq!(out.semijoin(&right), out);
}

#[test]
fn join_and_project() {
    let ab = Table::from_rows(vars(&["A", "B"]), [vars(&["1", "2"]), vars(&["1", "3"])]);
    let bc = Table::from_rows(vars(&["B", "C"]), [vars(&["2", "4"])]);
    let j = ab.join(&bc);
    assert_eq!(j.vars(), vars(&["A", "B", "C"]).as_slice());
    assert_eq!(j.len(), 1);
    assert_eq!(ab.project(&vars(&["A"])).len(), 1);
}

#[test]
fn query_hypergraph_drops_constants() {
    let h = q("r(A,A,b)").hypergraph().unwrap();
    assert_eq!(h.edge_name_lists(), vec![vars(&["A"])]);
    let h7 = q("r1(A,B) ∧ r2(B,C) ∧ r3(C,D) ∧ r4(D,E) ∧ r5(A,E)").hypergraph().unwrap();
    assert_eq!(h7.edge_count(), 5);
    assert!(!h7.is_acyclic());
    assert_eq!(
        Query::new(vec![Atom::new("g", vec![Term::constant("a")]), Atom::over_vars("r", ["A"])])
            .unwrap()
            .hypergraph(),
        Err(Error::DegenerateAtom(0))
    );
}

#[test]
fn homomorphisms() {
    let q2 = q("r(A,B) ∧ r(B,C) ∧ r(D,C) ∧ r(A,D)");
    assert!(homomorphism(&q2, &q("r(A,B) ∧ r(B,C)")).is_some());
    let id = homomorphism(&q2, &q2).unwrap();
    assert!(id.iter().all(|(k, v)| v == &Term::var(k.clone())) || id.len() == 4);
    let triangle = q("r(A,B) ∧ r(B,C) ∧ r(C,A)");
    assert!(homomorphism(&triangle, &q("r(A,B)")).is_none());
    assert!(homomorphism(&q("r(A,c)"), &q("r(X,d)")).is_none());
    assert!(homomorphism(&q("r(A,c)"), &q("r(X,c)")).is_some());
}

#[test]
fn core_examples() {
    let q1 = q("r(A,B) ∧ r(B,C) ∧ r(C,D) ∧ r(D,A)");
    assert_eq!(cores(&q1).unwrap(), vec![q1.clone()]);
    let q3 = q("r(B,A) ∧ r(C,B) ∧ r(C,D) ∧ r(D,A)");
    assert!(cores(&q3).unwrap().contains(&q("r(C,D) ∧ r(D,A)")));
    let big: Query = (0..13)
        .map(|i| alloc::format!("r(X{i},X{})", i + 1))
        .collect::<Vec<_>>()
        .join(" ∧ ")
        .parse()
        .unwrap();
    assert!(matches!(cores(&big), Err(Error::CapExceeded { atoms: 13, cap: 12 })));
}

#[test]
fn cores_admit_retractions() {
    let q4 = q("r(A,B) ∧ r(B,C) ∧ r(A,C) ∧ r(D,C) ∧ r(D,B) ∧ r(A,E) ∧ r(F,E)");
    let all = cores(&q4).unwrap();
    assert!(all.len() >= 2);
    for c in &all {
        let fixed: BTreeSet<&str> = c.vars();
        let h = homomorphism_fixing(&q4, c, &fixed).unwrap();
        for v in &fixed {
            assert_eq!(h[*v], Term::var(*v));
        }
    }
}

#[test]
fn induced_subproblem_shape() {
    let query = q("r(A,B) ∧ r(B,C)");
    let d = db(&[("r", 2, &[&["1", "2"], &["2", "3"]])]);
    let s: BTreeSet<String> = vars(&["B"]).into_iter().collect();
    let (sub, sdb) = induced_subproblem(&query, &d, &s).unwrap();
    assert_eq!(sub.len(), 2);
    let first = sdb.relation(&sub.atoms()[0].relation).unwrap();
    let second = sdb.relation(&sub.atoms()[1].relation).unwrap();
    assert!(first.contains(&vars(&["2"])) && first.contains(&vars(&["3"])));
    assert!(second.contains(&vars(&["1"])) && second.contains(&vars(&["2"])));
}
