//! View systems and the view generators of the decomposition methods.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::hypergraph::{binomial, for_each_combination, DEFAULT_EXPANSION_CAP};
use crate::relational::{evaluate, induced_subproblem, Atom, Database, Query, Table};
use crate::{Error, Hypergraph, Result};

/// Prefix of generated view symbols; it cannot clash with parsed relation names.
pub const VIEW_PREFIX: &str = "__v::";

/// A view: a fresh relation symbol over distinct variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct View {
    pub name: String,
    /// Sorted, distinct.
    pub vars: Vec<String>,
    /// The query atom this view is the query view of.
    pub for_atom: Option<usize>,
}

impl View {
    pub fn new<I, S>(name: impl Into<String>, vars: I, for_atom: Option<usize>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = vars.into_iter().map(Into::into).collect();
        View {
            name: name.into(),
            vars: set.into_iter().collect(),
            for_atom,
        }
    }

    pub fn is_query_view(&self) -> bool {
        self.for_atom.is_some()
    }

    pub fn atom(&self) -> Atom {
        Atom::over_vars(self.name.clone(), self.vars.iter().cloned())
    }

    pub fn covers(&self, vars: &[String]) -> bool {
        vars.iter().all(|v| self.vars.contains(v))
    }
}

/// The views available for answering a query, including one query view per
/// atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViewSystem {
    views: Vec<View>,
    query_view_of: Vec<usize>,
    query_vars: Vec<String>,
}

/// Which decomposition method generates the views.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Acyc,
    /// Views over unions of at most `k` atoms.
    Hw { k: usize },
    /// Views over clusters of at most `k + 1` variables. With `liberal`, the
    /// view relations are products of per-variable domains instead of
    /// induced-subproblem solutions.
    Tw { k: usize, liberal: bool },
}

impl ViewSystem {
    /// Validates `views` as a view system for `q`.
    pub fn new(q: &Query, views: Vec<View>) -> Result<Self> {
        let invalid = |m: String| Err(Error::InvalidViewSystem(m));
        let qvars = q.vars();
        let symbols = q.relation_symbols();
        let mut names = BTreeSet::new();
        for v in &views {
            if v.vars.is_empty() {
                return invalid(format!("view `{}` has no variables", v.name));
            }
            if !names.insert(v.name.as_str()) {
                return invalid(format!("duplicate view name `{}`", v.name));
            }
            if symbols.contains(v.name.as_str()) {
                return invalid(format!("view name `{}` is a query relation", v.name));
            }
            if let Some(x) = v.vars.iter().find(|x| !qvars.contains(x.as_str())) {
                return Err(Error::VarsOutOfRange(x.clone()));
            }
        }
        let mut query_view_of = Vec::with_capacity(q.len());
        for (i, a) in q.atoms().iter().enumerate() {
            let avars: Vec<String> = a.vars().into_iter().map(String::from).collect();
            match views
                .iter()
                .position(|v| v.for_atom == Some(i) && v.vars == avars)
            {
                Some(p) => query_view_of.push(p),
                None => return invalid(format!("no query view for atom {i} ({a})")),
            }
        }
        if let Some(v) = views.iter().find(|v| v.for_atom.is_some_and(|i| i >= q.len())) {
            return invalid(format!("view `{}` refers to a missing atom", v.name));
        }
        Ok(ViewSystem {
            views,
            query_view_of,
            query_vars: q.var_list(),
        })
    }

    pub fn views(&self) -> &[View] {
        &self.views
    }

    pub fn len(&self) -> usize {
        self.views.len()
    }

    pub fn is_empty(&self) -> bool {
        self.views.is_empty()
    }

    pub fn query_vars(&self) -> &[String] {
        &self.query_vars
    }

    /// Index of the query view of atom `atom`.
    pub fn query_view(&self, atom: usize) -> usize {
        self.query_view_of[atom]
    }

    pub fn query_views(&self) -> impl Iterator<Item = (usize, &View)> {
        self.query_view_of.iter().enumerate().map(|(a, &v)| (a, &self.views[v]))
    }

    pub fn view_index(&self, name: &str) -> Option<usize> {
        self.views.iter().position(|v| v.name == name)
    }

    /// `H_V`: one node per query variable, one edge per view.
    pub fn hypergraph(&self) -> Hypergraph {
        Hypergraph::with_nodes(&self.query_vars, self.views.iter().map(|v| &v.vars))
            .expect("views range over query variables")
    }

    /// The system extended with one more view.
    pub fn with_view(&self, q: &Query, view: View) -> Result<Self> {
        let mut views = self.views.clone();
        views.push(view);
        ViewSystem::new(q, views)
    }

    /// First view whose variables include `vars`.
    pub fn covering_view(&self, vars: &[String]) -> Option<usize> {
        self.views.iter().position(|v| v.covers(vars))
    }

    /// The relation of view `i` in `db` as a table over its variables.
    pub fn table(&self, i: usize, db: &Database) -> Result<Table> {
        db.table(&self.views[i].name, &self.views[i].vars)
    }
}

fn query_views(q: &Query) -> Vec<View> {
    q.atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| View::new(format!("{VIEW_PREFIX}q{i}"), a.vars(), Some(i)))
        .collect()
}

/// Query views for every atom plus one fresh view per extra variable set.
pub fn make_view_system(q: &Query, extra: &[BTreeSet<String>]) -> Result<ViewSystem> {
    let mut views = query_views(q);
    for (i, vars) in extra.iter().enumerate() {
        q.check_vars(vars.iter().map(String::as_str))?;
        if vars.is_empty() {
            return Err(Error::EmptyVarSet);
        }
        views.push(View::new(format!("{VIEW_PREFIX}w{i}"), vars.iter().cloned(), None));
    }
    ViewSystem::new(q, views)
}

/// `q^DB` over the atom's variables for every query view.
pub fn query_view_database(q: &Query, vs: &ViewSystem, db: &Database) -> Result<Database> {
    let mut out = Database::new();
    for (a, view) in vs.query_views() {
        let single = Query::new(alloc::vec![q.atoms()[a].clone()])?;
        let t = evaluate(&single, db, &view.vars)?;
        out.set_table(view.name.clone(), &t, &view.vars);
    }
    Ok(out)
}

/// Builds the view system of `method` and the database of its views.
pub fn generate(q: &Query, db: &Database, method: Method) -> Result<(ViewSystem, Database)> {
    generate_with_cap(q, db, method, DEFAULT_EXPANSION_CAP)
}

pub fn generate_with_cap(
    q: &Query,
    db: &Database,
    method: Method,
    cap: u128,
) -> Result<(ViewSystem, Database)> {
    db.check_query(q)?;
    let mut views = query_views(q);
    let mut extra: Vec<(View, Table)> = Vec::new();
    match method {
        Method::Acyc | Method::Hw { k: 1 } => {}
        Method::Hw { k } => {
            assert!(k >= 1, "hw needs k >= 1");
            let m = q.len();
            let requested: u128 = (2..=k.min(m)).map(|i| binomial(m, i)).sum();
            if requested > cap {
                return Err(Error::ExpansionTooLarge { requested, cap });
            }
            let mut next = 0;
            for size in 2..=k.min(m) {
                for_each_combination(m, size, |combo| {
                    extra.push(join_view(q, db, combo, next));
                    next += 1;
                });
            }
            // Evaluation errors were ruled out by check_query.
        }
        Method::Tw { k, liberal } => {
            let h = q.hypergraph()?;
            let clusters = h.cluster_expand(k, cap)?;
            let domains = if liberal { Some(variable_domains(q, db)?) } else { None };
            for (i, c) in clusters.edges().iter().enumerate() {
                let vars: Vec<String> = h.names(c).into_iter().map(String::from).collect();
                let view = View::new(format!("{VIEW_PREFIX}w{i}"), vars.iter().cloned(), None);
                let table = match &domains {
                    Some(d) => product(&vars, d),
                    None => {
                        let s = vars.iter().cloned().collect();
                        let (sub, sdb) = induced_subproblem(q, db, &s)?;
                        evaluate(&sub, &sdb, &vars)?
                    }
                };
                extra.push((view, table));
            }
        }
    }
    let mut out = query_view_database(q, &ViewSystem::new(q, views.clone())?, db)?;
    for (view, table) in extra {
        out.set_table(view.name.clone(), &table, &view.vars);
        views.push(view);
    }
    Ok((ViewSystem::new(q, views)?, out))
}

fn join_view(q: &Query, db: &Database, atoms: &[usize], i: usize) -> (View, Table) {
    let sub = q.subquery(atoms).expect("atoms of a query");
    let vars = sub.var_list();
    let table = evaluate(&sub, db, &vars).expect("relations were checked");
    (View::new(format!("{VIEW_PREFIX}w{i}"), vars, None), table)
}

/// For every variable, the values it takes in all atoms mentioning it.
fn variable_domains(q: &Query, db: &Database) -> Result<Vec<(String, BTreeSet<String>)>> {
    let mut out = Vec::new();
    for x in q.vars() {
        let mut dom: Option<BTreeSet<String>> = None;
        for a in q.atoms().iter().filter(|a| a.vars().contains(x)) {
            let single = Query::new(alloc::vec![a.clone()])?;
            let vals: BTreeSet<String> = evaluate(&single, db, &[x.to_string()])?
                .rows()
                .iter()
                .map(|r| r[0].clone())
                .collect();
            dom = Some(match dom {
                Some(d) => d.intersection(&vals).cloned().collect(),
                None => vals,
            });
        }
        out.push((x.to_string(), dom.unwrap_or_default()));
    }
    Ok(out)
}

fn product(vars: &[String], domains: &[(String, BTreeSet<String>)]) -> Table {
    let mut rows: Vec<Vec<String>> = alloc::vec![Vec::new()];
    for v in vars {
        let dom = &domains.iter().find(|(x, _)| x == v).expect("known variable").1;
        rows = rows
            .into_iter()
            .flat_map(|r| {
                dom.iter().map(move |d| {
                    let mut r = r.clone();
                    r.push(d.clone());
                    r
                })
            })
            .collect();
    }
    Table::from_rows(vars.to_vec(), rows)
}

/// How much of legality to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Legality {
    /// Only `w_q^DB ⊆ q^DB`.
    Cheap,
    /// Also view consistency of the query views.
    Full,
}

/// The first legality violation, if any.
pub fn legality_violation(
    q: &Query,
    vs: &ViewSystem,
    db: &Database,
    mode: Legality,
) -> Result<Option<String>> {
    let atoms = query_view_database(q, vs, db)?;
    for (_, view) in vs.query_views() {
        let stored = db.table(&view.name, &view.vars)?;
        let allowed = atoms.table(&view.name, &view.vars)?;
        if !stored.subset_of(&allowed) {
            return Ok(Some(format!("`{}` holds tuples outside its atom", view.name)));
        }
    }
    if mode == Legality::Full {
        for (_, view) in vs.query_views() {
            let stored = db.table(&view.name, &view.vars)?;
            if !evaluate(q, db, &view.vars)?.subset_of(&stored) {
                return Ok(Some(format!("`{}` is not view consistent", view.name)));
            }
        }
    }
    Ok(None)
}

pub fn is_legal(q: &Query, vs: &ViewSystem, db: &Database, mode: Legality) -> Result<bool> {
    Ok(legality_violation(q, vs, db, mode)?.is_none())
}
