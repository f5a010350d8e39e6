//! Backtracking evaluation of conjunctive queries.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Database, Query, Table, Term};
use crate::Result;

const UNBOUND: u32 = u32::MAX;

/// One join step: an atom whose bound variables select the candidate
/// completions for its free variables.
struct Step {
    bound: Vec<usize>,
    free: Vec<usize>,
    index: BTreeMap<Vec<u32>, Vec<Vec<u32>>>,
}

/// A query prepared against a database: values interned, atoms filtered by
/// their constants and repeated variables, and a static join order.
pub(crate) struct Solver {
    vars: Vec<String>,
    values: Vec<String>,
    steps: Vec<Step>,
    /// Values that injective searches may not assign to variables.
    reserved: BTreeSet<u32>,
    empty: bool,
}

impl Solver {
    pub(crate) fn new(q: &Query, db: &Database) -> Result<Self> {
        db.check_query(q)?;
        let vars = q.var_list();
        let var_idx = |v: &str| vars.binary_search_by(|w| w.as_str().cmp(v)).unwrap();

        let mut interner: BTreeMap<&str, u32> = BTreeMap::new();
        let mut values: Vec<String> = Vec::new();
        for (_, rel) in db.relations() {
            for x in rel.tuples().iter().flatten() {
                interner.entry(x.as_str()).or_insert_with(|| {
                    values.push(x.clone());
                    (values.len() - 1) as u32
                });
            }
        }
        let mut reserved = BTreeSet::new();
        for c in q.constants() {
            if let Some(&id) = interner.get(c) {
                reserved.insert(id);
            }
        }

        // Per atom: distinct variables in first-occurrence order and the
        // matching tuples projected onto them.
        let mut atom_vars: Vec<Vec<usize>> = Vec::new();
        let mut atom_rows: Vec<BTreeSet<Vec<u32>>> = Vec::new();
        let mut empty = false;
        for a in q.atoms() {
            let mut av: Vec<usize> = Vec::new();
            let mut slot: Vec<Option<usize>> = Vec::new();
            for t in &a.terms {
                match t {
                    Term::Var(v) => {
                        let x = var_idx(v);
                        let pos = av.iter().position(|&y| y == x).unwrap_or_else(|| {
                            av.push(x);
                            av.len() - 1
                        });
                        slot.push(Some(pos));
                    }
                    Term::Const(_) => slot.push(None),
                }
            }
            let mut rows = BTreeSet::new();
            'tuples: for tuple in db.relation(&a.relation)?.tuples() {
                let mut row = vec![UNBOUND; av.len()];
                for (i, t) in a.terms.iter().enumerate() {
                    let value = interner[tuple[i].as_str()];
                    match (t, slot[i]) {
                        (Term::Const(c), _) => {
                            if tuple[i] != *c {
                                continue 'tuples;
                            }
                        }
                        (Term::Var(_), Some(p)) => {
                            if row[p] == UNBOUND {
                                row[p] = value;
                            } else if row[p] != value {
                                continue 'tuples;
                            }
                        }
                        (Term::Var(_), None) => unreachable!(),
                    }
                }
                rows.insert(row);
            }
            if rows.is_empty() {
                empty = true;
            }
            atom_vars.push(av);
            atom_rows.push(rows);
        }

        // Static order: fully bound atoms first, then most bound variables,
        // then fewest tuples.
        let n = q.len();
        let mut done = vec![false; n];
        let mut bound = vec![false; vars.len()];
        let mut steps = Vec::with_capacity(n);
        for _ in 0..n {
            let pick = (0..n)
                .filter(|&i| !done[i])
                .min_by_key(|&i| {
                    let b = atom_vars[i].iter().filter(|&&x| bound[x]).count();
                    let full = b == atom_vars[i].len();
                    (!full, usize::MAX - b, atom_rows[i].len(), i)
                })
                .unwrap();
            done[pick] = true;
            let av = &atom_vars[pick];
            let bpos: Vec<usize> = (0..av.len()).filter(|&p| bound[av[p]]).collect();
            let fpos: Vec<usize> = (0..av.len()).filter(|&p| !bound[av[p]]).collect();
            let mut index: BTreeMap<Vec<u32>, Vec<Vec<u32>>> = BTreeMap::new();
            for row in &atom_rows[pick] {
                index
                    .entry(bpos.iter().map(|&p| row[p]).collect())
                    .or_default()
                    .push(fpos.iter().map(|&p| row[p]).collect());
            }
            steps.push(Step {
                bound: bpos.iter().map(|&p| av[p]).collect(),
                free: fpos.iter().map(|&p| av[p]).collect(),
                index,
            });
            for &x in av {
                bound[x] = true;
            }
        }
        Ok(Solver {
            vars,
            values,
            steps,
            reserved,
            empty,
        })
    }

    pub(crate) fn vars(&self) -> &[String] {
        &self.vars
    }

    pub(crate) fn value(&self, id: u32) -> &str {
        &self.values[id as usize]
    }

    /// Runs the search, calling `visit` on each full assignment until it
    /// returns `false`. Variables occurring in no atom stay unbound.
    pub(crate) fn search<F: FnMut(&[u32]) -> bool>(&self, injective: bool, mut visit: F) {
        if self.empty {
            return;
        }
        let mut assignment = vec![UNBOUND; self.vars.len()];
        let mut used = self.reserved.clone();
        let stop = self.steps.len();
        self.step(0, stop, injective, &mut assignment, &mut used, &mut visit);
    }

    /// Number of leading steps after which every variable in `vars` is bound.
    fn depth_binding(&self, vars: &[usize]) -> usize {
        let mut pending: BTreeSet<usize> = vars.iter().copied().collect();
        let mut depth = 0;
        while !pending.is_empty() {
            for x in &self.steps[depth].free {
                pending.remove(x);
            }
            depth += 1;
        }
        depth
    }

    /// Distinct projections of the answers onto `vars`. Once the projected
    /// variables are bound, only one completion is searched for.
    fn project(&self, vars: &[usize]) -> BTreeSet<Vec<u32>> {
        let mut out = BTreeSet::new();
        if self.empty {
            return out;
        }
        let cut = self.depth_binding(vars);
        let end = self.steps.len();
        let mut assignment = vec![UNBOUND; self.vars.len()];
        let mut used = BTreeSet::new();
        self.step(0, cut, false, &mut assignment, &mut used, &mut |a: &[u32]| {
            let key: Vec<u32> = vars.iter().map(|&x| a[x]).collect();
            if out.contains(&key) {
                return true;
            }
            let mut rest = a.to_vec();
            let mut found = false;
            self.step(cut, end, false, &mut rest, &mut BTreeSet::new(), &mut |_| {
                found = true;
                false
            });
            if found {
                out.insert(key);
            }
            true
        });
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn step<F: FnMut(&[u32]) -> bool>(
        &self,
        depth: usize,
        stop: usize,
        injective: bool,
        assignment: &mut [u32],
        used: &mut BTreeSet<u32>,
        visit: &mut F,
    ) -> bool {
        if depth == stop {
            return visit(assignment);
        }
        let step = &self.steps[depth];
        let key: Vec<u32> = step.bound.iter().map(|&x| assignment[x]).collect();
        let Some(candidates) = step.index.get(&key) else {
            return true;
        };
        'rows: for row in candidates {
            if injective {
                for (i, v) in row.iter().enumerate() {
                    if used.contains(v) || row[..i].contains(v) {
                        continue 'rows;
                    }
                }
                used.extend(row.iter().copied());
            }
            for (&x, &v) in step.free.iter().zip(row) {
                assignment[x] = v;
            }
            let go_on = self.step(depth + 1, stop, injective, assignment, used, visit);
            for &x in &step.free {
                assignment[x] = UNBOUND;
            }
            if injective {
                for v in row {
                    used.remove(v);
                }
            }
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// `Q^D[output]`: all answers restricted to `output`, as a table whose
/// columns follow `output`. An empty `output` yields `{h_true}` or `∅`.
pub fn evaluate(q: &Query, db: &Database, output: &[String]) -> Result<Table> {
    q.check_vars(output.iter().map(String::as_str))?;
    let solver = Solver::new(q, db)?;
    let pos: Vec<usize> = output
        .iter()
        .map(|v| solver.vars.iter().position(|w| w == v).unwrap())
        .collect();
    let rows = solver.project(&pos);
    Ok(Table::from_rows(
        output.to_vec(),
        rows.into_iter().map(|r| {
            r.into_iter()
                .map(|v| String::from(solver.value(v)))
                .collect()
        }),
    ))
}

/// `Q^D` over all variables, columns sorted by name.
pub fn evaluate_all(q: &Query, db: &Database) -> Result<Table> {
    evaluate(q, db, &q.var_list())
}

/// Whether `Q^D` is non-empty.
pub fn exists(q: &Query, db: &Database) -> Result<bool> {
    Ok(!evaluate(q, db, &[])?.is_empty())
}
