//! Local, global and view consistency, and the reduct.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::relational::{evaluate, Database, Query, Table};
use crate::views::{legality_violation, Legality, View, ViewSystem};
use crate::{Error, Result};

/// Evidence that a view system is not locally consistent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub view: String,
    /// The view whose semijoin removes `tuple`; absent when `view` is empty.
    pub other: Option<String>,
    pub tuple: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub locally_consistent: bool,
    pub first_violation: Option<Violation>,
}

/// One effective semijoin of the reduct computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub target: String,
    pub source: String,
    pub deleted: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduct {
    /// The input database with every view relation reduced.
    pub database: Database,
    /// Views whose relation lost every tuple.
    pub emptied_views: Vec<String>,
    pub trace: Vec<TraceStep>,
}

impl Reduct {
    /// Whether every view relation was emptied.
    pub fn is_empty(&self) -> bool {
        !self.emptied_views.is_empty()
    }
}

fn view_tables(vs: &ViewSystem, db: &Database) -> Result<Vec<Table>> {
    (0..vs.len()).map(|i| vs.table(i, db)).collect()
}

fn shares_vars(a: &View, b: &View) -> bool {
    a.vars.iter().any(|x| b.vars.contains(x))
}

/// `lc(V, DB)`: every view relation is non-empty and unchanged by the
/// semijoin with any other view.
pub fn is_locally_consistent(vs: &ViewSystem, db: &Database) -> Result<ConsistencyReport> {
    let tables = view_tables(vs, db)?;
    let views = vs.views();
    let fail = |v: Violation| {
        Ok(ConsistencyReport {
            locally_consistent: false,
            first_violation: Some(v),
        })
    };
    if let Some(i) = tables.iter().position(Table::is_empty) {
        return fail(Violation {
            view: views[i].name.clone(),
            other: None,
            tuple: None,
        });
    }
    for i in 0..views.len() {
        for j in 0..views.len() {
            if i == j || !shares_vars(&views[i], &views[j]) {
                continue;
            }
            let kept = tables[i].semijoin(&tables[j]);
            if kept.len() != tables[i].len() {
                let lost = tables[i].rows().difference(kept.rows()).next().cloned();
                return fail(Violation {
                    view: views[i].name.clone(),
                    other: Some(views[j].name.clone()),
                    tuple: lost,
                });
            }
        }
    }
    Ok(ConsistencyReport {
        locally_consistent: true,
        first_violation: None,
    })
}

/// All ordered pairs of distinct views sharing a variable.
pub fn semijoin_pairs(vs: &ViewSystem) -> Vec<(usize, usize)> {
    let views = vs.views();
    let mut out = Vec::new();
    for i in 0..views.len() {
        for j in 0..views.len() {
            if i != j && shares_vars(&views[i], &views[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

/// `red(V, DB)`: the largest sub-database of the view relations that is
/// locally consistent. Relations that are not views are left untouched.
pub fn reduct(vs: &ViewSystem, db: &Database) -> Result<Reduct> {
    reduct_with_schedule(vs, db, &semijoin_pairs(vs))
}

/// Like [`reduct`], with `schedule` as the initial worklist of `(target,
/// source)` pairs. Pairs are re-queued in schedule order when their source
/// shrinks. The result does not depend on the schedule.
pub fn reduct_with_schedule(
    vs: &ViewSystem,
    db: &Database,
    schedule: &[(usize, usize)],
) -> Result<Reduct> {
    let views = vs.views();
    let n = views.len();
    let mut tables = view_tables(vs, db)?;
    let mut trace = Vec::new();

    // Position of each pair in the schedule, used to re-queue in order.
    let mut dependents: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &(t, s) in schedule {
        dependents[s].push((t, s));
    }
    let mut queued = vec![vec![false; n]; n];
    let mut work: VecDeque<(usize, usize)> = VecDeque::new();
    for &(t, s) in schedule {
        if !queued[t][s] {
            queued[t][s] = true;
            work.push_back((t, s));
        }
    }

    let mut wiped = tables.iter().any(Table::is_empty);
    while !wiped {
        let Some((t, s)) = work.pop_front() else { break };
        queued[t][s] = false;
        let kept = tables[t].semijoin(&tables[s]);
        let deleted = tables[t].len() - kept.len();
        if deleted == 0 {
            continue;
        }
        trace.push(TraceStep {
            target: views[t].name.clone(),
            source: views[s].name.clone(),
            deleted,
        });
        tables[t] = kept;
        if tables[t].is_empty() {
            wiped = true;
            break;
        }
        for &(u, _) in &dependents[t] {
            if !queued[u][t] {
                queued[u][t] = true;
                work.push_back((u, t));
            }
        }
    }

    let mut emptied = Vec::new();
    if wiped {
        for (i, table) in tables.iter_mut().enumerate() {
            if !table.is_empty() {
                trace.push(TraceStep {
                    target: views[i].name.clone(),
                    source: String::from("<empty>"),
                    deleted: table.len(),
                });
            }
            table.clear();
            emptied.push(views[i].name.clone());
        }
    }
    let mut database = db.clone();
    for (view, table) in views.iter().zip(&tables) {
        database.set_table(view.name.clone(), table, &view.vars);
    }
    Ok(Reduct {
        database,
        emptied_views: emptied,
        trace,
    })
}

/// `w^DB ⊇ Q^DB[w]`.
pub fn is_view_consistent(view: &View, q: &Query, db: &Database) -> Result<bool> {
    let stored = db.table(&view.name, &view.vars)?;
    Ok(evaluate(q, db, &view.vars)?.subset_of(&stored))
}

/// `gc(V, DB, Q)`: every query view equals the answers projected onto it.
pub fn is_globally_consistent(q: &Query, vs: &ViewSystem, db: &Database) -> Result<bool> {
    if let Some(why) = legality_violation(q, vs, db, Legality::Cheap)? {
        return Err(Error::NotLegal(why));
    }
    for (_, view) in vs.query_views() {
        let stored = db.table(&view.name, &view.vars)?;
        if !evaluate(q, db, &view.vars)?.same_as(&stored) {
            return Ok(false);
        }
    }
    Ok(true)
}
