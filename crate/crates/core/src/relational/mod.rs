//! Conjunctive queries, databases and relations.
//!
//! The brute-force evaluator in [`evaluate`] is the reference semantics the
//! rest of the crate is checked against.

mod eval;
mod homomorphism;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Hypergraph, Result};

pub use eval::{evaluate, evaluate_all, exists};
pub use homomorphism::{
    cores, cores_with_cap, homomorphism, homomorphism_fixing, is_isomorphic, DEFAULT_CORE_CAP,
};

/// A query term: a variable or a constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "'{c}'"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub relation: String,
    pub terms: Vec<Term>,
}

impl Atom {
    pub fn new(relation: impl Into<String>, terms: Vec<Term>) -> Self {
        Atom {
            relation: relation.into(),
            terms,
        }
    }

    /// Atom whose terms are all variables.
    pub fn over_vars<I, S>(relation: impl Into<String>, vars: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Atom::new(relation, vars.into_iter().map(|v| Term::Var(v.into())).collect())
    }

    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    /// Distinct variables, sorted.
    pub fn vars(&self) -> BTreeSet<&str> {
        self.terms.iter().filter_map(Term::as_var).collect()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.relation)?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

/// A conjunctive query: a non-empty conjunction of atoms with at least one
/// variable overall and consistent arities per relation symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    atoms: Vec<Atom>,
}

impl Query {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyQuery);
        }
        let mut arities: BTreeMap<&str, usize> = BTreeMap::new();
        for a in &atoms {
            let expected = *arities.entry(&a.relation).or_insert(a.arity());
            if expected != a.arity() {
                return Err(Error::ArityMismatch {
                    relation: a.relation.clone(),
                    expected,
                    found: a.arity(),
                });
            }
        }
        if atoms.iter().all(|a| a.vars().is_empty()) {
            return Err(Error::EmptyVarSet);
        }
        Ok(Query { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// All variables, sorted.
    pub fn vars(&self) -> BTreeSet<&str> {
        self.atoms.iter().flat_map(|a| a.vars()).collect()
    }

    pub fn var_list(&self) -> Vec<String> {
        self.vars().into_iter().map(String::from).collect()
    }

    pub fn constants(&self) -> BTreeSet<&str> {
        self.atoms
            .iter()
            .flat_map(|a| a.terms.iter())
            .filter_map(|t| match t {
                Term::Const(c) => Some(c.as_str()),
                Term::Var(_) => None,
            })
            .collect()
    }

    pub fn relation_symbols(&self) -> BTreeSet<&str> {
        self.atoms.iter().map(|a| a.relation.as_str()).collect()
    }

    /// The sub-query made of the atoms at `indices`, in the given order.
    pub fn subquery(&self, indices: &[usize]) -> Result<Query> {
        Query::new(indices.iter().map(|&i| self.atoms[i].clone()).collect())
    }

    /// `self ∧ atom`.
    pub fn conjoin(&self, atom: Atom) -> Result<Query> {
        let mut atoms = self.atoms.clone();
        atoms.push(atom);
        Query::new(atoms)
    }

    /// One node per variable, one edge per atom's variable set.
    pub fn hypergraph(&self) -> Result<Hypergraph> {
        if let Some(i) = self.atoms.iter().position(|a| a.vars().is_empty()) {
            return Err(Error::DegenerateAtom(i));
        }
        Hypergraph::from_edges(self.atoms.iter().map(|a| a.vars()))
    }

    /// Whether the query hypergraph is connected.
    pub fn is_connected(&self) -> bool {
        self.hypergraph().map(|h| h.is_connected()).unwrap_or(false)
    }

    /// Checks that `vars` only mentions variables of the query.
    pub fn check_vars<'a, I>(&self, vars: I) -> Result<()>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let own = self.vars();
        for v in vars {
            if !own.contains(v) {
                return Err(Error::VarsOutOfRange(v.to_string()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl core::str::FromStr for Query {
    type Err = Error;

    /// Parses `r(A,B) ∧ s(B,'c')`. Atoms are separated by `∧`, `&` or `,`
    /// between atoms. Terms starting with an uppercase letter or `_` are
    /// variables; quoted or other terms are constants.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Syntax(m.to_string());
        let mut atoms = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| bad("missing `(`"))?;
            let close = rest.find(')').ok_or_else(|| bad("missing `)`"))?;
            if close < open {
                return Err(bad("unbalanced parentheses"));
            }
            let relation = rest[..open].trim();
            if relation.is_empty() {
                return Err(bad("missing relation symbol"));
            }
            let inner = rest[open + 1..close].trim();
            let terms = if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|t| {
                        let t = t.trim();
                        if t.len() >= 2 && t.starts_with('\'') && t.ends_with('\'') {
                            Term::Const(t[1..t.len() - 1].to_string())
                        } else if t.starts_with(|c: char| c.is_uppercase() || c == '_') {
                            Term::Var(t.to_string())
                        } else {
                            Term::Const(t.to_string())
                        }
                    })
                    .collect()
            };
            atoms.push(Atom::new(relation, terms));
            rest = rest[close + 1..].trim_start();
            for sep in ["∧", "&", ","] {
                if let Some(r) = rest.strip_prefix(sep) {
                    rest = r.trim_start();
                    break;
                }
            }
        }
        Query::new(atoms)
    }
}

/// A set of constant tuples of fixed arity.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Relation {
    arity: usize,
    tuples: BTreeSet<Vec<String>>,
}

impl Relation {
    pub fn new(arity: usize) -> Self {
        Relation {
            arity,
            tuples: BTreeSet::new(),
        }
    }

    pub fn from_tuples<I, T, S>(arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut rel = Relation::new(arity);
        for t in tuples {
            let t: Vec<String> = t.into_iter().map(Into::into).collect();
            if t.len() != arity {
                return Err(Error::ArityMismatch {
                    relation: String::new(),
                    expected: arity,
                    found: t.len(),
                });
            }
            rel.tuples.insert(t);
        }
        Ok(rel)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &BTreeSet<Vec<String>> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[String]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn insert(&mut self, tuple: Vec<String>) -> bool {
        assert_eq!(tuple.len(), self.arity, "tuple arity");
        self.tuples.insert(tuple)
    }

    pub fn retain<F: FnMut(&Vec<String>) -> bool>(&mut self, f: F) {
        self.tuples.retain(f);
    }

    pub fn clear(&mut self) {
        self.tuples.clear();
    }
}

/// A finite map from relation symbols to relations.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Database {
    relations: BTreeMap<String, Relation>,
}

impl Database {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, relation: Relation) {
        self.relations.insert(name.into(), relation);
    }

    pub fn get(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Relation> {
        self.relations.get_mut(name)
    }

    pub fn relation(&self, name: &str) -> Result<&Relation> {
        self.get(name)
            .ok_or_else(|| Error::MissingRelation(name.to_string()))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.relations.contains_key(name)
    }

    /// Union of the relations of both databases; `other` wins on name clashes.
    pub fn merged(&self, other: &Database) -> Database {
        let mut out = self.clone();
        for (k, v) in &other.relations {
            out.relations.insert(k.clone(), v.clone());
        }
        out
    }

    /// Total number of tuples.
    pub fn size(&self) -> usize {
        self.relations.values().map(Relation::len).sum()
    }

    /// All constants occurring in some tuple.
    pub fn active_domain(&self) -> BTreeSet<&str> {
        self.relations
            .values()
            .flat_map(|r| r.tuples.iter().flatten())
            .map(String::as_str)
            .collect()
    }

    /// Checks that every relation symbol of `q` is present with the right arity.
    pub fn check_query(&self, q: &Query) -> Result<()> {
        for a in q.atoms() {
            let rel = self.relation(&a.relation)?;
            if rel.arity() != a.arity() {
                return Err(Error::ArityMismatch {
                    relation: a.relation.clone(),
                    expected: a.arity(),
                    found: rel.arity(),
                });
            }
        }
        Ok(())
    }

    /// The relation stored under `name` as a table over `vars`.
    pub fn table(&self, name: &str, vars: &[String]) -> Result<Table> {
        let rel = self.relation(name)?;
        if rel.arity() != vars.len() {
            return Err(Error::ArityMismatch {
                relation: name.to_string(),
                expected: vars.len(),
                found: rel.arity(),
            });
        }
        Ok(Table::from_rows(vars.to_vec(), rel.tuples.iter().cloned()))
    }

    /// Stores `table` under `name`, with columns in the order of `vars`.
    pub fn set_table(&mut self, name: impl Into<String>, table: &Table, vars: &[String]) {
        let t = table.reorder(vars);
        self.relations.insert(
            name.into(),
            Relation {
                arity: vars.len(),
                tuples: t.rows,
            },
        );
    }
}

/// A relation over named variables. Each row assigns `vars[i]` to `row[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Table {
    vars: Vec<String>,
    rows: BTreeSet<Vec<String>>,
}

impl Table {
    pub fn new(vars: Vec<String>) -> Self {
        debug_assert!(
            vars.iter().collect::<BTreeSet<_>>().len() == vars.len(),
            "table variables must be distinct"
        );
        Table {
            vars,
            rows: BTreeSet::new(),
        }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<String>>>(vars: Vec<String>, rows: I) -> Self {
        let mut t = Table::new(vars);
        for r in rows {
            t.insert(r);
        }
        t
    }

    /// The 0-ary table holding the empty tuple (`{h_true}`).
    pub fn truth() -> Self {
        Table::from_rows(Vec::new(), [Vec::new()])
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> &BTreeSet<Vec<String>> {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn insert(&mut self, row: Vec<String>) -> bool {
        assert_eq!(row.len(), self.vars.len(), "row arity");
        self.rows.insert(row)
    }

    pub fn clear(&mut self) {
        self.rows.clear();
    }

    fn positions(&self, vars: &[String]) -> Vec<usize> {
        vars.iter()
            .map(|v| {
                self.vars
                    .iter()
                    .position(|w| w == v)
                    .unwrap_or_else(|| panic!("variable {v} not in table"))
            })
            .collect()
    }

    pub fn column(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|w| w == var)
    }

    /// Projection onto `vars`, which must be a subset of the table's variables.
    pub fn project(&self, vars: &[String]) -> Table {
        let pos = self.positions(vars);
        Table::from_rows(
            vars.to_vec(),
            self.rows.iter().map(|r| pos.iter().map(|&p| r[p].clone()).collect()),
        )
    }

    /// Same rows with columns permuted into `vars` order.
    pub fn reorder(&self, vars: &[String]) -> Table {
        assert_eq!(vars.len(), self.vars.len(), "reorder needs the same variables");
        self.project(vars)
    }

    /// Rows of `self` that agree with some row of `other` on the shared
    /// variables. With no shared variables the result is `self` if `other`
    /// is non-empty and empty otherwise.
    pub fn semijoin(&self, other: &Table) -> Table {
        let shared: Vec<String> = self
            .vars
            .iter()
            .filter(|v| other.vars.contains(v))
            .cloned()
            .collect();
        let keys = other.project(&shared).rows;
        let pos = self.positions(&shared);
        Table::from_rows(
            self.vars.clone(),
            self.rows
                .iter()
                .filter(|r| {
                    let key: Vec<String> = pos.iter().map(|&p| r[p].clone()).collect();
                    keys.contains(&key)
                })
                .cloned(),
        )
    }

    /// Natural join. Variables of `self` come first, then the new ones of `other`.
    pub fn join(&self, other: &Table) -> Table {
        let shared: Vec<String> = self
            .vars
            .iter()
            .filter(|v| other.vars.contains(v))
            .cloned()
            .collect();
        let extra: Vec<String> = other
            .vars
            .iter()
            .filter(|v| !self.vars.contains(v))
            .cloned()
            .collect();
        let my_pos = self.positions(&shared);
        let their_pos = other.positions(&shared);
        let extra_pos = other.positions(&extra);
        let mut index: BTreeMap<Vec<&String>, Vec<&Vec<String>>> = BTreeMap::new();
        for r in &other.rows {
            index
                .entry(their_pos.iter().map(|&p| &r[p]).collect())
                .or_default()
                .push(r);
        }
        let mut vars = self.vars.clone();
        vars.extend(extra);
        let mut out = Table::new(vars);
        for r in &self.rows {
            let key: Vec<&String> = my_pos.iter().map(|&p| &r[p]).collect();
            if let Some(matches) = index.get(&key) {
                for m in matches {
                    let mut row = r.clone();
                    row.extend(extra_pos.iter().map(|&p| m[p].clone()));
                    out.rows.insert(row);
                }
            }
        }
        out
    }

    /// Rows as variable assignments.
    pub fn assignments(&self) -> impl Iterator<Item = BTreeMap<&str, &str>> + '_ {
        self.rows.iter().map(move |r| {
            self.vars
                .iter()
                .map(String::as_str)
                .zip(r.iter().map(String::as_str))
                .collect()
        })
    }

    /// Whether both tables hold the same assignments, regardless of column order.
    pub fn same_as(&self, other: &Table) -> bool {
        let a: BTreeSet<&String> = self.vars.iter().collect();
        let b: BTreeSet<&String> = other.vars.iter().collect();
        a == b && self.rows == other.reorder(&self.vars).rows
    }

    /// Whether every assignment of `self` is also one of `other`.
    pub fn subset_of(&self, other: &Table) -> bool {
        let a: BTreeSet<&String> = self.vars.iter().collect();
        let b: BTreeSet<&String> = other.vars.iter().collect();
        a == b && self.rows.is_subset(&other.reorder(&self.vars).rows)
    }
}

/// The subproblem induced by `s`: one fresh atom per atom of `q` meeting `s`,
/// over the shared variables, holding that atom's answers projected onto them.
pub fn induced_subproblem(q: &Query, db: &Database, s: &BTreeSet<String>) -> Result<(Query, Database)> {
    q.check_vars(s.iter().map(String::as_str))?;
    db.check_query(q)?;
    let mut atoms = Vec::new();
    let mut out = Database::new();
    for (i, a) in q.atoms().iter().enumerate() {
        let vars: Vec<String> = a
            .vars()
            .into_iter()
            .filter(|v| s.contains(*v))
            .map(String::from)
            .collect();
        if vars.is_empty() {
            continue;
        }
        let name = format!("__s::a{i}");
        let single = Query::new(alloc::vec![a.clone()])?;
        let answers = evaluate(&single, db, &vars)?;
        out.set_table(name.clone(), &answers, &vars);
        atoms.push(Atom::over_vars(name, vars));
    }
    if atoms.is_empty() {
        return Err(Error::EmptyVarSet);
    }
    Ok((Query::new(atoms)?, out))
}

/// Variables of `names` as a set over the nodes of `h`.
#[cfg(test)]
mod tests;
