//! JSON file formats.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tpq_core::analysis::{Certificate, Coverage};
use tpq_core::consistency::Reduct;
use tpq_core::game::{ComponentGraph, TreeProjection};
use tpq_core::{Atom, Database, Hypergraph, JoinTree, Query, Relation, Term, View, ViewSystem};

use crate::error::{CliError, CliResult};
use crate::locate::{line_of, Seg};
use crate::path;

#[derive(Debug, Deserialize, Serialize)]
pub struct HypergraphDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<String>>,
    pub edges: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermDoc {
    Var(String),
    Const(String),
}

#[derive(Debug, Deserialize, Serialize)]
pub struct AtomDoc {
    pub rel: String,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct QueryDoc {
    pub atoms: Vec<AtomDoc>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct DatabaseDoc {
    pub relations: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct ViewDoc {
    pub name: String,
    pub vars: Vec<String>,
    #[serde(rename = "isQueryView", default)]
    pub is_query_view: bool,
    #[serde(rename = "forAtom", default)]
    pub for_atom: Option<usize>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct ViewsDoc {
    pub views: Vec<ViewDoc>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct JoinTreeDoc {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct TreeProjectionDoc {
    pub nodes: Vec<String>,
    pub edges: Vec<Vec<String>>,
    #[serde(rename = "joinTree")]
    pub join_tree: JoinTreeDoc,
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::new("Parse", e.to_string()).at(Some(e.line())))
}

fn locate(e: impl Into<CliError>, text: &str, at: &[Seg]) -> CliError {
    e.into().at(line_of(text, at))
}

pub fn parse_hypergraph(text: &str) -> CliResult<Hypergraph> {
    let doc: HypergraphDoc = parse(text)?;
    hypergraph_from_doc(&doc, text)
}

fn hypergraph_from_doc(doc: &HypergraphDoc, text: &str) -> CliResult<Hypergraph> {
    for (i, e) in doc.edges.iter().enumerate() {
        if e.is_empty() {
            return Err(locate(tpq_core::Error::EmptyEdge(i), text, &path!["edges", i]));
        }
        if let Some(nodes) = &doc.nodes {
            if let Some(j) = e.iter().position(|x| !nodes.contains(x)) {
                let err = tpq_core::Error::UndeclaredNode(e[j].clone());
                return Err(locate(err, text, &path!["edges", i, j]));
            }
        }
    }
    let h = match &doc.nodes {
        Some(nodes) => Hypergraph::with_nodes(nodes, &doc.edges)?,
        None => Hypergraph::from_edges(&doc.edges)?,
    };
    Ok(h)
}

pub fn parse_query(text: &str) -> CliResult<Query> {
    let doc: QueryDoc = parse(text)?;
    let atoms: Vec<Atom> = doc
        .atoms
        .iter()
        .map(|a| {
            let terms = a
                .terms
                .iter()
                .map(|t| match t {
                    TermDoc::Var(v) => Term::Var(v.clone()),
                    TermDoc::Const(c) => Term::Const(c.clone()),
                })
                .collect();
            Atom::new(a.rel.clone(), terms)
        })
        .collect();
    let bad_atom = |e: tpq_core::Error| {
        let at = match &e {
            tpq_core::Error::DegenerateAtom(i) => path!["atoms", *i],
            tpq_core::Error::ArityMismatch { relation, .. } => {
                match doc.atoms.iter().rposition(|a| &a.rel == relation) {
                    Some(i) => path!["atoms", i],
                    None => path!["atoms"],
                }
            }
            _ => path!["atoms"],
        };
        locate(e, text, &at)
    };
    let q = Query::new(atoms).map_err(bad_atom)?;
    q.hypergraph().map_err(bad_atom)?;
    Ok(q)
}

/// Arities expected by `q` and the views of `vs`.
pub fn arities(q: &Query, vs: Option<&ViewSystem>) -> BTreeMap<String, usize> {
    let mut out: BTreeMap<String, usize> = q.atoms().iter().map(|a| (a.relation.clone(), a.arity())).collect();
    if let Some(vs) = vs {
        out.extend(vs.views().iter().map(|v| (v.name.clone(), v.vars.len())));
    }
    out
}

/// Parses a database. Empty relations take their arity from `expected`.
pub fn parse_database(text: &str, expected: &BTreeMap<String, usize>) -> CliResult<Database> {
    let doc: DatabaseDoc = parse(text)?;
    let mut db = Database::new();
    for (name, tuples) in &doc.relations {
        let arity = expected
            .get(name)
            .copied()
            .or_else(|| tuples.first().map(Vec::len))
            .unwrap_or(0);
        let mut rel = Relation::new(arity);
        for (i, t) in tuples.iter().enumerate() {
            if t.len() != arity {
                let err = tpq_core::Error::ArityMismatch {
                    relation: name.clone(),
                    expected: arity,
                    found: t.len(),
                };
                return Err(locate(err, text, &path!["relations", name.as_str(), i]));
            }
            rel.insert(t.clone());
        }
        db.insert(name.clone(), rel);
    }
    Ok(db)
}

pub fn parse_views(text: &str, q: &Query) -> CliResult<ViewSystem> {
    let doc: ViewsDoc = parse(text)?;
    let mut views = Vec::with_capacity(doc.views.len());
    for (i, v) in doc.views.iter().enumerate() {
        if v.is_query_view != v.for_atom.is_some() {
            let err = CliError::new("InvalidViewSystem", format!("view `{}`: isQueryView and forAtom disagree", v.name));
            return Err(locate(err, text, &path!["views", i]));
        }
        views.push(View::new(v.name.clone(), v.vars.iter().cloned(), v.for_atom));
    }
    ViewSystem::new(q, views).map_err(|e| {
        let at = match &e {
            tpq_core::Error::InvalidViewSystem(m) => doc
                .views
                .iter()
                .position(|v| m.contains(&format!("`{}`", v.name)))
                .map(|i| path!["views", i]),
            _ => None,
        };
        locate(e, text, &at.unwrap_or_else(|| path!["views"]))
    })
}

/// Parses a tree projection and checks that its join tree is valid.
pub fn parse_tree_projection(text: &str) -> CliResult<(Hypergraph, JoinTree)> {
    let doc: TreeProjectionDoc = parse(text)?;
    let h = hypergraph_from_doc(
        &HypergraphDoc {
            nodes: Some(doc.nodes.clone()),
            edges: doc.edges.clone(),
        },
        text,
    )?;
    let jt = JoinTree {
        parent: doc.join_tree.parent,
        root: doc.join_tree.root,
    };
    if h.edge_count() != doc.edges.len() {
        return Err(locate(CliError::new("Parse", "duplicate edges"), text, &path!["edges"]));
    }
    if !jt.is_valid_for(&h) {
        return Err(locate(
            CliError::new("NotAcyclic", "join tree violates the connectedness condition"),
            text,
            &path!["joinTree"],
        ));
    }
    Ok((h, jt))
}

pub fn hypergraph_json(h: &Hypergraph) -> Value {
    json!({ "nodes": h.nodes(), "edges": h.edge_name_lists() })
}

pub fn join_tree_json(jt: &JoinTree) -> Value {
    json!({ "root": jt.root, "parent": jt.parent })
}

pub fn tree_projection_json(tp: &TreeProjection) -> Value {
    json!({
        "nodes": tp.hypergraph.nodes(),
        "edges": tp.hypergraph.edge_name_lists(),
        "joinTree": join_tree_json(&tp.join_tree),
        "squadOfEdge": tp.squad_of_edge,
    })
}

pub fn query_json(q: &Query) -> Value {
    let atoms: Vec<Value> = q
        .atoms()
        .iter()
        .map(|a| {
            let terms: Vec<Value> = a
                .terms
                .iter()
                .map(|t| match t {
                    Term::Var(v) => json!({ "var": v }),
                    Term::Const(c) => json!({ "const": c }),
                })
                .collect();
            json!({ "rel": a.relation, "terms": terms })
        })
        .collect();
    json!({ "atoms": atoms, "text": q.to_string() })
}

pub fn database_json(db: &Database) -> Value {
    let rels: BTreeMap<&str, &BTreeSet<Vec<String>>> = db.relations().map(|(n, r)| (n, r.tuples())).collect();
    json!({ "relations": rels })
}

pub fn views_json(vs: &ViewSystem) -> Value {
    let views: Vec<Value> = vs
        .views()
        .iter()
        .map(|v| {
            json!({
                "name": v.name,
                "vars": v.vars,
                "isQueryView": v.is_query_view(),
                "forAtom": v.for_atom,
            })
        })
        .collect();
    json!({ "views": views })
}

pub fn coverage_json(c: &Coverage) -> Value {
    let witness = c.witness.as_ref().map(|(core, tp)| {
        json!({ "core": query_json(core), "treeProjection": tree_projection_json(tp) })
    });
    json!({
        "vars": c.vars,
        "covered": c.covered,
        "cores": c.cores.iter().map(query_json).collect::<Vec<_>>(),
        "witness": witness,
    })
}

pub fn certificate_json(c: &Certificate) -> Value {
    let obligations: Vec<Value> = c
        .obligations
        .iter()
        .map(|o| json!({ "subject": o.subject.to_string(), "coverage": coverage_json(&o.coverage) }))
        .collect();
    json!({ "holds": c.holds, "obligations": obligations })
}

pub fn reduct_json(r: &Reduct, vs: &ViewSystem) -> Value {
    let views: BTreeMap<&str, Vec<&Vec<String>>> = vs
        .views()
        .iter()
        .map(|v| {
            let tuples = r.database.get(&v.name).map(|rel| rel.tuples().iter().collect()).unwrap_or_default();
            (v.name.as_str(), tuples)
        })
        .collect();
    json!({ "empty": r.is_empty(), "emptiedViews": r.emptied_views, "relations": views })
}

pub fn component_graph_json(cg: &ComponentGraph, h1: &Hypergraph) -> Value {
    let nodes: Vec<Value> = cg
        .live_nodes()
        .into_iter()
        .map(|i| {
            let n = &cg.nodes[i];
            json!({
                "id": i,
                "squadEdge": n.squad,
                "componentNodes": h1.names(&n.comp),
                "move": n.mv.as_ref().map(|m| json!({ "squadEdge": m.squad, "cops": h1.names(&m.cops) })),
                "children": n.children,
            })
        })
        .collect();
    let arcs: Vec<[usize; 2]> = cg
        .live_nodes()
        .into_iter()
        .flat_map(|i| cg.nodes[i].children.iter().map(move |&c| [i, c]))
        .collect();
    json!({ "root": cg.root, "nodes": nodes, "arcs": arcs })
}
