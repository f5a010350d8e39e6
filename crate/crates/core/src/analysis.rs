//! Exact tree projections, tp-covering certificates and widths.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::consistency::{is_view_consistent, reduct};
use crate::game::{
    extract_tree_projection, greedy_strategy, monotonize, to_nice, ComponentGraph, TreeProjection,
};
use crate::hypergraph::DEFAULT_ARITY_CAP;
use crate::relational::{cores_with_cap, Atom, Database, Query, Table, DEFAULT_CORE_CAP};
use crate::views::{legality_violation, Legality, ViewSystem};
use crate::{Error, Hypergraph, Result};

/// Relation symbol of the output atom added by [`is_tp_covered`].
pub const OUTPUT_ATOM: &str = "__o::atom";

/// Runs greedy search, makes the strategy nice, monotonizes it and extracts
/// a tree projection of `h1` with respect to `h2`.
pub fn greedy_tree_projection(
    h1: &Hypergraph,
    h2: &Hypergraph,
    monotone_only: bool,
) -> Result<Option<TreeProjection>> {
    if h1.edge_count() == 0 {
        return TreeProjection::from_edges(h1, h2, Vec::new()).map(Some);
    }
    let Some(g) = greedy_strategy(h1, h2, monotone_only) else {
        return Ok(None);
    };
    let nice = to_nice(&g, h1)?;
    let cg = ComponentGraph::from_nice(&nice, h1)?;
    let mono = monotonize(&cg, h1, h2)?;
    extract_tree_projection(&mono, h1, h2).map(Some)
}

/// Decides whether `h1` has a tree projection with respect to `h2`, and
/// returns one, using the default arity cap.
pub fn exact_tree_projection(h1: &Hypergraph, h2: &Hypergraph) -> Result<Option<TreeProjection>> {
    exact_tree_projection_with_cap(h1, h2, DEFAULT_ARITY_CAP)
}

/// Greedy search on the simplicial version of `h2` restricted to the nodes
/// of `h1`, where greedy strategies are as strong as arbitrary ones.
pub fn exact_tree_projection_with_cap(
    h1: &Hypergraph,
    h2: &Hypergraph,
    arity_cap: usize,
) -> Result<Option<TreeProjection>> {
    let simplicial = h2.project_onto(h1).simplicial(arity_cap)?;
    let Some(tp) = greedy_tree_projection(h1, &simplicial, false)? else {
        return Ok(None);
    };
    TreeProjection::from_edges(h1, h2, tp.hypergraph.edges().to_vec()).map(Some)
}

/// Hypergraph of the atoms of `q` that have variables.
fn atoms_hypergraph(q: &Query) -> Hypergraph {
    Hypergraph::from_edges(q.atoms().iter().map(|a| a.vars()).filter(|v| !v.is_empty()))
        .expect("non-empty edges")
}

/// Whether one output set is tp-covered, with the evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub vars: Vec<String>,
    pub covered: bool,
    /// Every core examined, in enumeration order.
    pub cores: Vec<Query>,
    /// The first core with a tree projection, and that projection.
    pub witness: Option<(Query, TreeProjection)>,
}

/// Limits applied by the analyses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub core_cap: usize,
    pub arity_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            core_cap: DEFAULT_CORE_CAP,
            arity_cap: DEFAULT_ARITY_CAP,
        }
    }
}

fn first_covered_core(
    cores: &[Query],
    hv: &Hypergraph,
    limits: Limits,
) -> Result<Option<(Query, TreeProjection)>> {
    for core in cores {
        let hc = atoms_hypergraph(core);
        if let Some(tp) = exact_tree_projection_with_cap(&hc, hv, limits.arity_cap)? {
            return Ok(Some((core.clone(), tp)));
        }
    }
    Ok(None)
}

/// Whether `o` is tp-covered in `q` with respect to `vs`: some core of
/// `q ∧ atom(o)` has a tree projection with respect to the view hypergraph.
/// With `o = ∅` the cores of `q` itself are used.
pub fn is_tp_covered(q: &Query, vs: &ViewSystem, o: &[String]) -> Result<Coverage> {
    is_tp_covered_with(q, vs, o, Limits::default())
}

pub fn is_tp_covered_with(q: &Query, vs: &ViewSystem, o: &[String], limits: Limits) -> Result<Coverage> {
    q.check_vars(o.iter().map(String::as_str))?;
    let vars: Vec<String> = o.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let extended = if vars.is_empty() {
        q.clone()
    } else {
        if vs.covering_view(&vars).is_none() {
            return Err(Error::OUnsupported);
        }
        q.conjoin(Atom::over_vars(OUTPUT_ATOM, vars.iter().cloned()))?
    };
    let cores = cores_with_cap(&extended, limits.core_cap)?;
    let witness = first_covered_core(&cores, &vs.hypergraph(), limits)?;
    Ok(Coverage {
        vars,
        covered: witness.is_some(),
        cores,
        witness,
    })
}

/// Outcome of a certification with one entry per obligation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub holds: bool,
    pub obligations: Vec<Obligation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    /// The atom (for the gc certificate) or core (for the non-emptiness one).
    pub subject: Query,
    pub coverage: Coverage,
}

impl Certificate {
    /// Subjects whose obligation failed.
    pub fn failures(&self) -> impl Iterator<Item = &Query> {
        self.obligations
            .iter()
            .filter(|o| !o.coverage.covered)
            .map(|o| &o.subject)
    }
}

/// Local consistency entails global consistency iff the variables of every
/// atom are tp-covered.
pub fn lc_gc_certificate(q: &Query, vs: &ViewSystem) -> Result<Certificate> {
    lc_gc_certificate_with(q, vs, Limits::default())
}

pub fn lc_gc_certificate_with(q: &Query, vs: &ViewSystem, limits: Limits) -> Result<Certificate> {
    let mut cache: BTreeMap<Vec<String>, Coverage> = BTreeMap::new();
    let mut obligations = Vec::new();
    for a in q.atoms() {
        let vars: Vec<String> = a.vars().into_iter().map(String::from).collect();
        if vars.is_empty() {
            continue;
        }
        let coverage = match cache.get(&vars) {
            Some(c) => c.clone(),
            None => {
                let c = is_tp_covered_with(q, vs, &vars, limits)?;
                cache.insert(vars, c.clone());
                c
            }
        };
        obligations.push(Obligation {
            subject: Query::new(alloc::vec![a.clone()])
                .unwrap_or_else(|_| q.clone()),
            coverage,
        });
    }
    Ok(Certificate {
        holds: obligations.iter().all(|o| o.coverage.covered),
        obligations,
    })
}

/// Local consistency entails non-emptiness iff some core of `q` has a tree
/// projection with respect to the views.
pub fn lc_nonempty_certificate(q: &Query, vs: &ViewSystem) -> Result<Certificate> {
    lc_nonempty_certificate_with(q, vs, Limits::default())
}

pub fn lc_nonempty_certificate_with(q: &Query, vs: &ViewSystem, limits: Limits) -> Result<Certificate> {
    let cores = cores_with_cap(q, limits.core_cap)?;
    let hv = vs.hypergraph();
    let mut obligations = Vec::new();
    for c in &cores {
        let witness = first_covered_core(core::slice::from_ref(c), &hv, limits)?;
        obligations.push(Obligation {
            subject: c.clone(),
            coverage: Coverage {
                vars: Vec::new(),
                covered: witness.is_some(),
                cores: alloc::vec![c.clone()],
                witness,
            },
        });
        if obligations.last().unwrap().coverage.covered {
            break;
        }
    }
    Ok(Certificate {
        holds: obligations.iter().any(|o| o.coverage.covered),
        obligations,
    })
}

/// Width notions computed by [`width`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WidthMode {
    /// Generalized hypertree width: tree projection w.r.t. `H^k`.
    Ghw,
    /// Greedy hypertree width: greedy winning strategy on `(H, H^k)`.
    Grhw,
    /// Hypertree width: monotone greedy winning strategy on `(H, H^k)`.
    Hw,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthResult {
    pub mode: WidthMode,
    /// Smallest `k ≤ kmax` that works, or `None` if the width exceeds `kmax`.
    pub value: Option<usize>,
    pub witness: Option<TreeProjection>,
}

/// The smallest `k ≤ kmax` for which `mode` succeeds on the query hypergraph.
pub fn width(q: &Query, mode: WidthMode, kmax: usize) -> Result<WidthResult> {
    let h = q.hypergraph()?;
    for k in 1..=kmax {
        let hk = h.union_expand(k);
        let tp = match mode {
            WidthMode::Ghw => exact_tree_projection(&h, &hk)?,
            WidthMode::Grhw => greedy_tree_projection(&h, &hk, false)?,
            WidthMode::Hw => greedy_tree_projection(&h, &hk, true)?,
        };
        if tp.is_some() {
            return Ok(WidthResult {
                mode,
                value: Some(k),
                witness: tp,
            });
        }
    }
    Ok(WidthResult {
        mode,
        value: None,
        witness: None,
    })
}

/// How far an answer computed from the reduct can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// Equal to the projection of the query answers.
    Exact,
    /// Contained in the projection of the query answers.
    SoundOnly,
    /// No guarantee.
    Unverified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub relation: Table,
    pub exactness: Exactness,
    /// The view the relation was projected from.
    pub view: String,
}

/// Answers `q` on `o` by enforcing local consistency and projecting a view
/// that covers `o`.
pub fn answer_correctness(q: &Query, vs: &ViewSystem, db: &Database, o: &[String]) -> Result<Answer> {
    let vars: Vec<String> = o.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let covering: Vec<usize> = (0..vs.len()).filter(|&i| vs.views()[i].covers(&vars)).collect();
    if covering.is_empty() {
        return Err(Error::NoCoveringView);
    }
    if let Some(why) = legality_violation(q, vs, db, Legality::Cheap)? {
        return Err(Error::NotLegal(why));
    }
    let mut consistent = None;
    for &i in &covering {
        let view = &vs.views()[i];
        if view.is_query_view() || is_view_consistent(view, q, db)? {
            consistent = Some(i);
            break;
        }
    }
    let chosen = consistent.unwrap_or(covering[0]);
    let red = reduct(vs, db)?;
    let relation = vs.table(chosen, &red.database)?.project(&vars);
    let covered = is_tp_covered(q, vs, &vars)?.covered;
    let exactness = if red.is_empty() {
        let all_consistent = vs
            .views()
            .iter()
            .map(|v| is_view_consistent(v, q, db))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|b| b);
        if all_consistent {
            Exactness::Exact
        } else {
            Exactness::SoundOnly
        }
    } else if !covered {
        Exactness::Unverified
    } else if consistent.is_some() {
        Exactness::Exact
    } else {
        Exactness::SoundOnly
    };
    Ok(Answer {
        relation,
        exactness,
        view: vs.views()[chosen].name.clone(),
    })
}
