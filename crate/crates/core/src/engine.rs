//! Yannakakis-style evaluation over a tree projection.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::game::TreeProjection;
use crate::relational::{Database, Query, Table};
use crate::{Error, JoinTree, Result, ViewSystem};

/// A join tree over the edges of a tree projection, each vertex holding a
/// relation over its variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationPlan {
    pub tree: JoinTree,
    /// Sorted variables of each vertex.
    pub vertex_vars: Vec<Vec<String>>,
    pub relations: Vec<Table>,
    /// The vertex each query atom was semijoined into.
    pub anchor: Vec<usize>,
    /// Index of the view each vertex relation was projected from.
    pub source_view: Vec<usize>,
    reduced: bool,
}

/// Result of a bottom-up pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decision {
    pub nonempty: bool,
    pub semijoins: usize,
}

/// Builds a plan from a tree projection of `H_Q` with respect to `H_V`.
pub fn build_plan(q: &Query, vs: &ViewSystem, db: &Database, tp: &TreeProjection) -> Result<EvaluationPlan> {
    build_plan_with(q, vs, db, tp, |candidates| candidates[0])
}

/// Like [`build_plan`], with `pick` choosing among the views covering a
/// vertex (given in view order).
pub fn build_plan_with<F: Fn(&[usize]) -> usize>(
    q: &Query,
    vs: &ViewSystem,
    db: &Database,
    tp: &TreeProjection,
    pick: F,
) -> Result<EvaluationPlan> {
    let hq = q.hypergraph()?;
    let ha = &tp.hypergraph;
    if ha.edge_count() == 0 || !tp.join_tree.is_valid_for(ha) {
        return Err(Error::SandwichViolation("invalid join tree".to_string()));
    }
    if !hq.covered_by(ha) || !ha.covered_by(&vs.hypergraph()) {
        return Err(Error::SandwichViolation(
            "not a tree projection of the query with respect to the views".to_string(),
        ));
    }
    let vertex_vars: Vec<Vec<String>> = (0..ha.edge_count())
        .map(|i| ha.edge_names(i).into_iter().map(String::from).collect())
        .collect();
    let mut relations = Vec::with_capacity(vertex_vars.len());
    let mut source_view = Vec::with_capacity(vertex_vars.len());
    for vars in &vertex_vars {
        let candidates: Vec<usize> = (0..vs.len()).filter(|&i| vs.views()[i].covers(vars)).collect();
        let chosen = pick(&candidates);
        relations.push(vs.table(chosen, db)?.project(vars));
        source_view.push(chosen);
    }
    let mut anchor = Vec::with_capacity(q.len());
    for (a, atom) in q.atoms().iter().enumerate() {
        let avars: Vec<String> = atom.vars().into_iter().map(String::from).collect();
        let v = vertex_vars
            .iter()
            .position(|vv| avars.iter().all(|x| vv.contains(x)))
            .ok_or_else(|| Error::SandwichViolation("atom not covered".to_string()))?;
        let w = vs.table(vs.query_view(a), db)?;
        relations[v] = relations[v].semijoin(&w);
        anchor.push(v);
    }
    let first_atom = (0..q.len())
        .min_by(|&a, &b| q.atoms()[a].cmp(&q.atoms()[b]))
        .expect("queries have atoms");
    let tree = tp.join_tree.rerooted(anchor[first_atom]);
    Ok(EvaluationPlan {
        tree,
        vertex_vars,
        relations,
        anchor,
        source_view,
        reduced: false,
    })
}

impl EvaluationPlan {
    pub fn vertex_count(&self) -> usize {
        self.relations.len()
    }

    pub fn root(&self) -> usize {
        self.tree.root
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    fn upward(&mut self) -> usize {
        let order = self.tree.top_down();
        let mut count = 0;
        for &v in order.iter().rev() {
            if let Some(p) = self.tree.parent[v] {
                self.relations[p] = self.relations[p].semijoin(&self.relations[v]);
                count += 1;
            }
        }
        count
    }

    /// Bottom-up semijoins; the answer is non-empty iff the root relation is.
    pub fn decide(&self) -> Decision {
        let mut work = self.clone();
        let semijoins = work.upward();
        Decision {
            nonempty: !work.relations[work.root()].is_empty(),
            semijoins,
        }
    }

    /// Bottom-up then top-down semijoins. Returns the reduced plan and the
    /// number of semijoins performed.
    pub fn full_reduce(&self) -> (EvaluationPlan, usize) {
        let mut work = self.clone();
        let mut count = work.upward();
        for &v in &work.tree.top_down() {
            if let Some(p) = work.tree.parent[v] {
                work.relations[v] = work.relations[v].semijoin(&work.relations[p]);
                count += 1;
            }
        }
        work.reduced = true;
        (work, count)
    }

    /// Streams the distinct answers projected onto `output`, at most `limit`.
    pub fn enumerate(&self, output: &[String], limit: Option<usize>) -> Result<Answers<'_>> {
        if !self.reduced {
            return Err(Error::NotReduced);
        }
        let mut holder = Vec::with_capacity(output.len());
        for x in output {
            match self.vertex_vars.iter().position(|vv| vv.contains(x)) {
                Some(v) => holder.push(v),
                None => return Err(Error::OutputNotCovered(x.clone())),
            }
        }
        let order = self.steiner_order(&holder);
        let mut steps = Vec::with_capacity(order.len());
        for (i, &v) in order.iter().enumerate() {
            let parent = if i == 0 { None } else { self.tree.parent[v] };
            let shared: Vec<String> = match parent {
                Some(p) => self.vertex_vars[v]
                    .iter()
                    .filter(|x| self.vertex_vars[p].contains(x))
                    .cloned()
                    .collect(),
                None => Vec::new(),
            };
            let key_cols: Vec<usize> = shared
                .iter()
                .map(|x| self.relations[v].column(x).unwrap())
                .collect();
            let mut index: BTreeMap<Vec<&String>, usize> = BTreeMap::new();
            let mut groups: Vec<Vec<&Vec<String>>> = Vec::new();
            for row in self.relations[v].rows() {
                let g = *index
                    .entry(key_cols.iter().map(|&c| &row[c]).collect())
                    .or_insert_with(|| {
                        groups.push(Vec::new());
                        groups.len() - 1
                    });
                groups[g].push(row);
            }
            let parent_cols: Vec<(usize, usize)> = match parent {
                Some(p) => {
                    let pos = order.iter().position(|&u| u == p).unwrap();
                    shared
                        .iter()
                        .map(|x| (pos, self.relations[p].column(x).unwrap()))
                        .collect()
                }
                None => Vec::new(),
            };
            steps.push(Step {
                index,
                groups,
                parent_cols,
            });
        }
        let out_cols: Vec<(usize, usize)> = output
            .iter()
            .zip(&holder)
            .map(|(x, v)| {
                let pos = order.iter().position(|u| u == v).unwrap();
                (pos, self.relations[*v].column(x).unwrap())
            })
            .collect();
        let empty = self.relations.iter().any(Table::is_empty);
        Ok(Answers {
            steps,
            out_cols,
            stack: Vec::new(),
            chosen: Vec::new(),
            seen: BTreeSet::new(),
            limit,
            produced: 0,
            started: false,
            exhausted: empty,
            wrong_choices: 0,
        })
    }

    /// Vertices of the smallest subtree containing `marked`, parents first.
    fn steiner_order(&self, marked: &[usize]) -> Vec<usize> {
        if marked.is_empty() {
            return Vec::new();
        }
        let n = self.vertex_count();
        let mut count = vec![0usize; n];
        for &m in marked.iter().collect::<BTreeSet<_>>() {
            count[m] += 1;
        }
        let total: usize = count.iter().sum();
        let top_down = self.tree.top_down();
        for &v in top_down.iter().rev() {
            if let Some(p) = self.tree.parent[v] {
                count[p] += count[v];
            }
        }
        // The top of the subtree is the deepest vertex seeing every mark.
        let mut top = self.tree.root;
        loop {
            let children = self.tree.children(top);
            match children.into_iter().find(|&c| count[c] == total) {
                Some(c) if !marked.contains(&top) => top = c,
                _ => break,
            }
        }
        let mut order = vec![top];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for c in self.tree.children(v) {
                if count[c] > 0 {
                    order.push(c);
                }
            }
            i += 1;
        }
        order
    }
}

struct Step<'a> {
    index: BTreeMap<Vec<&'a String>, usize>,
    groups: Vec<Vec<&'a Vec<String>>>,
    /// For each key column: position in the order of the parent, column.
    parent_cols: Vec<(usize, usize)>,
}

/// Iterator over distinct projected answers of a reduced plan.
pub struct Answers<'a> {
    steps: Vec<Step<'a>>,
    out_cols: Vec<(usize, usize)>,
    /// Per assigned step: candidate group and the next candidate to try.
    stack: Vec<(usize, usize)>,
    chosen: Vec<&'a Vec<String>>,
    seen: BTreeSet<Vec<String>>,
    limit: Option<usize>,
    produced: usize,
    started: bool,
    exhausted: bool,
    wrong_choices: usize,
}

impl<'a> Answers<'a> {
    /// Times the search reached a vertex with no tuple consistent with the
    /// choices made so far.
    pub fn wrong_choices(&self) -> usize {
        self.wrong_choices
    }

    fn candidates(&self, depth: usize) -> Option<usize> {
        let step = &self.steps[depth];
        let key: Vec<&String> = step
            .parent_cols
            .iter()
            .map(|&(pos, col)| &self.chosen[pos][col])
            .collect();
        step.index.get(&key).copied()
    }

    /// Advances to the next full assignment of the subtree.
    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            if self.steps.is_empty() {
                return true;
            }
            match self.candidates(0) {
                Some(g) => self.stack.push((g, 0)),
                None => return false,
            }
        } else if self.steps.is_empty() {
            return false;
        }
        loop {
            let depth = match self.stack.len() {
                0 => return false,
                n => n - 1,
            };
            let (g, next) = self.stack[depth];
            let group = &self.steps[depth].groups[g];
            if next >= group.len() {
                self.stack.pop();
                self.chosen.truncate(depth);
                continue;
            }
            let row = group[next];
            self.stack[depth].1 += 1;
            self.chosen.truncate(depth);
            self.chosen.push(row);
            if depth + 1 == self.steps.len() {
                return true;
            }
            match self.candidates(depth + 1) {
                Some(g) => self.stack.push((g, 0)),
                None => self.wrong_choices += 1,
            }
        }
    }
}

impl Iterator for Answers<'_> {
    type Item = Vec<String>;

    fn next(&mut self) -> Option<Vec<String>> {
        if self.exhausted || self.limit.is_some_and(|l| self.produced >= l) {
            return None;
        }
        while self.advance() {
            let answer: Vec<String> = self
                .out_cols
                .iter()
                .map(|&(pos, col)| self.chosen[pos][col].clone())
                .collect();
            if self.seen.insert(answer.clone()) {
                self.produced += 1;
                return Some(answer);
            }
        }
        self.exhausted = true;
        None
    }
}

#[cfg(test)]
mod tests {
    use alloc::collections::BTreeSet;
    use alloc::string::String;
    use alloc::vec::Vec;

    use super::*;
    use crate::analysis::exact_tree_projection;
    use crate::relational::{evaluate, Relation};
    use crate::views::{make_view_system, query_view_database};

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

    fn plan(q: &Query, extra: &[BTreeSet<String>], base: &Database) -> EvaluationPlan {
        let vs = make_view_system(q, extra).unwrap();
        let mut vdb = query_view_database(q, &vs, base).unwrap();
        for (i, v) in vs.views().iter().enumerate() {
            if !v.is_query_view() {
                let t = evaluate(q, base, &v.vars).unwrap();
                vdb.set_table(vs.views()[i].name.clone(), &t, &v.vars);
            }
        }
        let tp = exact_tree_projection(&q.hypergraph().unwrap(), &vs.hypergraph())
            .unwrap()
            .unwrap();
        build_plan(q, &vs, &vdb, &tp).unwrap()
    }

    #[test]
    fn chain_with_dangling_tuple() {
        let query = q("r(A,B) ∧ s(B,C)");
        let base = db(&[("r", 2, &[&["a", "b"], &["x", "y"]]), ("s", 2, &[&["b", "c"]])]);
        let p = plan(&query, &[], &base);
        assert_eq!(p.vertex_count(), 2);
        let d = p.decide();
        assert!(d.nonempty);
        assert_eq!(d.semijoins, 1);
        assert_eq!(p.enumerate(&vars(&["A"]), None).err(), Some(Error::NotReduced));
        let (reduced, n) = p.full_reduce();
        assert_eq!(n, 2);
        assert!(reduced.relations.iter().all(|t| t.len() == 1));
        let mut answers = reduced.enumerate(&vars(&["A", "B", "C"]), None).unwrap();
        assert_eq!(answers.next(), Some(vars(&["a", "b", "c"])));
        assert_eq!(answers.next(), None);
        assert_eq!(answers.wrong_choices(), 0);
        assert_eq!(reduced.full_reduce().0, reduced);
    }

    #[test]
    fn empty_vertex_decides_false() {
        let query = q("r(A,B) ∧ s(B,C)");
        let base = db(&[("r", 2, &[&["a", "b"]]), ("s", 2, &[])]);
        let p = plan(&query, &[], &base);
        assert!(!p.decide().nonempty);
        let (reduced, _) = p.full_reduce();
        assert_eq!(reduced.enumerate(&vars(&["A"]), None).unwrap().count(), 0);
    }

    #[test]
    fn single_vertex_plan() {
        let query = q("r(A,B) ∧ r(B,C) ∧ r(A,C)");
        let extra = [["A", "B", "C"].iter().map(|s| String::from(*s)).collect()];
        let base = db(&[("r", 2, &[&["1", "2"], &["2", "3"], &["1", "3"], &["3", "1"]])]);
        let p = plan(&query, &extra, &base);
        assert_eq!(p.vertex_count(), 1);
        let (reduced, n) = p.full_reduce();
        assert_eq!(n, 0);
        let got: Vec<_> = reduced.enumerate(&vars(&["C", "A"]), None).unwrap().collect();
        assert_eq!(got, [vars(&["3", "1"])]);
    }

    #[test]
    fn projection_dedup_and_limit() {
        let query = q("r(A,B) ∧ s(B,C)");
        let base = db(&[
            ("r", 2, &[&["a", "b"], &["a", "c"], &["d", "b"]]),
            ("s", 2, &[&["b", "1"], &["c", "1"], &["c", "2"]]),
        ]);
        let (reduced, _) = plan(&query, &[], &base).full_reduce();
        let got: BTreeSet<_> = reduced.enumerate(&vars(&["A"]), None).unwrap().collect();
        assert_eq!(got, [vars(&["a"]), vars(&["d"])].into_iter().collect());
        assert_eq!(reduced.enumerate(&vars(&["A", "C"]), Some(2)).unwrap().count(), 2);
        let all: BTreeSet<_> = reduced.enumerate(&vars(&["A", "B", "C"]), None).unwrap().collect();
        let expected = evaluate(&query, &base, &vars(&["A", "B", "C"])).unwrap();
        assert_eq!(&all, expected.rows());
        assert_eq!(reduced.enumerate(&[], None).unwrap().count(), 1);
        assert_eq!(
            reduced.enumerate(&vars(&["Z"]), None).err(),
            Some(Error::OutputNotCovered(String::from("Z")))
        );
    }
}
