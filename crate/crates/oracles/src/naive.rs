//! Brute-force oracles.

use std::collections::{BTreeMap, BTreeSet};

use tpq_core::{Atom, Database, Hypergraph, Query, Term};

use crate::{edges_of, Edge};

/// Decodes a Prüfer sequence over `n ≥ 2` labels into tree edges.
fn prufer_tree(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut out = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&i| degree[i] == 1).unwrap();
        out.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
    out.push((rest[0], rest[1]));
    out
}

/// Every labeled tree over `n` vertices.
pub fn all_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    match n {
        0 | 1 => vec![Vec::new()],
        2 => vec![vec![(0, 1)]],
        _ => {
            let mut out = Vec::new();
            let mut seq = vec![0usize; n - 2];
            loop {
                out.push(prufer_tree(&seq, n));
                let mut i = 0;
                while i < seq.len() {
                    seq[i] += 1;
                    if seq[i] < n {
                        break;
                    }
                    seq[i] = 0;
                    i += 1;
                }
                if i == seq.len() {
                    return out;
                }
            }
        }
    }
}

/// Whether `tree` (edges over edge indices) satisfies the connectedness
/// condition for `edges`.
pub fn is_join_tree(edges: &[Edge], tree: &[(usize, usize)]) -> bool {
    if edges.len() > 1 && tree.len() != edges.len() - 1 {
        return false;
    }
    let nodes: BTreeSet<&String> = edges.iter().flatten().collect();
    for x in nodes {
        let holding: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].contains(x)).collect();
        let mut reached = BTreeSet::from([holding[0]]);
        let mut grew = true;
        while grew {
            grew = false;
            for &(a, b) in tree {
                let (ina, inb) = (holding.contains(&a), holding.contains(&b));
                if ina && inb && (reached.contains(&a) != reached.contains(&b)) {
                    reached.insert(a);
                    reached.insert(b);
                    grew = true;
                }
            }
        }
        if reached.len() != holding.len() {
            return false;
        }
    }
    true
}

/// Join-tree existence by trying every labeled tree over the edges.
pub fn has_join_tree(edges: &[Edge]) -> bool {
    all_trees(edges.len()).iter().any(|t| is_join_tree(edges, t))
}

/// Acyclicity by unordered ear removal: drop nodes private to one edge and
/// edges contained in another, until nothing changes.
pub fn gyo_acyclic(edges: &[Edge]) -> bool {
    let mut es: Vec<Edge> = edges.to_vec();
    loop {
        let before = es.clone();
        let mut count: BTreeMap<String, usize> = BTreeMap::new();
        for e in &es {
            for x in e {
                *count.entry(x.clone()).or_default() += 1;
            }
        }
        for e in &mut es {
            e.retain(|x| count[x] > 1);
        }
        let mut kept: Vec<Edge> = Vec::new();
        for (i, e) in es.iter().enumerate() {
            let absorbed = es
                .iter()
                .enumerate()
                .any(|(j, f)| j != i && e.is_subset(f) && (e != f || j < i));
            if !absorbed && !e.is_empty() {
                kept.push(e.clone());
            }
        }
        es = kept;
        if es.len() <= 1 {
            return true;
        }
        if es == before {
            return false;
        }
    }
}

fn covered_by(a: &[Edge], b: &[Edge]) -> bool {
    a.iter().all(|e| b.iter().any(|f| e.is_subset(f)))
}

/// Tree-projection existence via elimination orderings: a tree projection
/// exists iff the covered nodes of `h1` can be eliminated one at a time so
/// that each eliminated node together with its current neighbours fits in
/// an edge of `h2`. Dynamic programming over eliminated sets.
pub fn tree_projection_exists(h1: &Hypergraph, h2: &Hypergraph) -> bool {
    let e1 = edges_of(h1);
    let e2 = edges_of(h2);
    let nodes: Vec<String> = e1.iter().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let n = nodes.len();
    assert!(n <= 20, "oracle limited to 20 nodes");
    let idx = |x: &String| nodes.iter().position(|y| y == x).unwrap();
    let mut adj = vec![0u32; n];
    for e in &e1 {
        for a in e {
            for b in e {
                if a != b {
                    adj[idx(a)] |= 1 << idx(b);
                }
            }
        }
    }
    let fits = |bag: u32| {
        e2.iter().any(|f| (0..n).filter(|&i| bag >> i & 1 == 1).all(|i| f.contains(&nodes[i])))
    };
    // Neighbours of v once `gone` is eliminated: reachable through `gone`.
    let bag = |v: usize, gone: u32| -> u32 {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut out = 1u32 << v;
        while let Some(x) = stack.pop() {
            let mut nb = adj[x] & !seen;
            while nb != 0 {
                let y = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                seen |= 1 << y;
                if gone >> y & 1 == 1 {
                    stack.push(y);
                } else {
                    out |= 1 << y;
                }
            }
        }
        out
    };
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut ok = vec![false; 1 << n];
    ok[0] = true;
    for s in 0..=full {
        if !ok[s as usize] {
            continue;
        }
        for v in 0..n {
            if s >> v & 1 == 0 && !ok[(s | 1 << v) as usize] && fits(bag(v, s)) {
                ok[(s | 1 << v) as usize] = true;
            }
        }
    }
    ok[full as usize]
}

/// Tree-projection existence by enumerating every family of pairwise
/// incomparable node sets that each fit in an edge of `h2`, on at most four
/// nodes.
pub fn tree_projection_exists_literal(h1: &Hypergraph, h2: &Hypergraph) -> bool {
    let e1 = edges_of(h1);
    let nodes: Vec<String> = h1.nodes().to_vec();
    assert!(nodes.len() <= 4, "literal oracle limited to 4 nodes");
    let e2: Vec<Edge> = edges_of(h2)
        .into_iter()
        .map(|f| f.into_iter().filter(|x| nodes.contains(x)).collect())
        .collect();
    let candidates: Vec<Edge> = (1u32..1 << nodes.len())
        .map(|m| (0..nodes.len()).filter(|&i| m >> i & 1 == 1).map(|i| nodes[i].clone()).collect::<Edge>())
        .filter(|s| e2.iter().any(|f| s.is_subset(f)))
        .collect();
    fn search(cands: &[Edge], i: usize, chosen: &mut Vec<Edge>, e1: &[Edge]) -> bool {
        if i == cands.len() {
            return covered_by(e1, chosen) && gyo_acyclic(chosen);
        }
        if search(cands, i + 1, chosen, e1) {
            return true;
        }
        let c = &cands[i];
        if chosen.iter().all(|d| !c.is_subset(d) && !d.is_subset(c)) {
            chosen.push(c.clone());
            let found = search(cands, i + 1, chosen, e1);
            chosen.pop();
            if found {
                return true;
            }
        }
        false
    }
    search(&candidates, 0, &mut Vec::new(), &e1)
}

/// Answers of `q` over `db` projected to `output`, by trying every
/// assignment of domain values to variables.
pub fn evaluate(q: &Query, db: &Database, output: &[String]) -> BTreeSet<Vec<String>> {
    let vars: Vec<String> = q.vars().into_iter().map(String::from).collect();
    let mut domain: BTreeSet<String> = db.active_domain().into_iter().map(String::from).collect();
    domain.extend(q.constants().into_iter().map(String::from));
    let domain: Vec<String> = domain.into_iter().collect();
    let mut out = BTreeSet::new();
    if domain.is_empty() {
        return out;
    }
    let mut choice = vec![0usize; vars.len()];
    loop {
        let val: BTreeMap<&str, &str> = vars
            .iter()
            .zip(&choice)
            .map(|(v, &c)| (v.as_str(), domain[c].as_str()))
            .collect();
        let holds = q.atoms().iter().all(|a| {
            let tuple: Vec<String> = a
                .terms
                .iter()
                .map(|t| match t {
                    Term::Var(v) => val[v.as_str()].to_string(),
                    Term::Const(c) => c.clone(),
                })
                .collect();
            db.get(&a.relation).is_some_and(|r| r.contains(&tuple))
        });
        if holds {
            out.insert(output.iter().map(|x| val[x.as_str()].to_string()).collect());
        }
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < domain.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            return out;
        }
    }
}

/// Whether some variable mapping sends every atom of `from` onto an atom of
/// `to`, by trying every mapping into the terms of `to`.
pub fn homomorphic(from: &Query, to: &Query) -> bool {
    let vars: Vec<&str> = from.vars().into_iter().collect();
    let targets: Vec<Term> = to
        .atoms()
        .iter()
        .flat_map(|a| a.terms.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let atoms: BTreeSet<&Atom> = to.atoms().iter().collect();
    let mut choice = vec![0usize; vars.len()];
    loop {
        let image = |t: &Term| match t {
            Term::Var(v) => targets[choice[vars.iter().position(|x| x == v).unwrap()]].clone(),
            c => c.clone(),
        };
        if from.atoms().iter().all(|a| {
            let mapped = Atom::new(a.relation.clone(), a.terms.iter().map(image).collect());
            atoms.contains(&mapped)
        }) {
            return true;
        }
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < targets.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            return false;
        }
    }
}

/// Whether `q` maps into none of its proper atom subsets.
pub fn is_core(q: &Query) -> bool {
    let n = q.len();
    (1u32..(1 << n) - 1).all(|mask| {
        let atoms: Vec<Atom> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| q.atoms()[i].clone()).collect();
        match Query::new(atoms) {
            Ok(sub) => !homomorphic(q, &sub),
            Err(_) => true,
        }
    })
}

/// The greedy game, decided by plain recursion. Positions repeated along
/// the current line of play count as lost for the Captain.
pub fn greedy_wins(h1: &Hypergraph, h2: &Hypergraph, monotone_only: bool) -> bool {
    let edges = edges_of(h1);
    let universe: Edge = edges.iter().flatten().cloned().collect();
    let squads: Vec<Edge> = edges_of(h2)
        .into_iter()
        .map(|f| f.intersection(&universe).cloned().collect())
        .collect();
    if universe.is_empty() {
        return true;
    }
    let game = Game {
        edges,
        squads,
        monotone_only,
    };
    game.wins(&universe, None, &mut Vec::new(), &mut BTreeSet::new())
}

struct Game {
    edges: Vec<Edge>,
    squads: Vec<Edge>,
    monotone_only: bool,
}

type Position = (Edge, Option<usize>);

impl Game {
    fn frontier(&self, c: &Edge) -> Edge {
        let mut out = c.clone();
        for e in &self.edges {
            if !e.is_disjoint(c) {
                out.extend(e.iter().cloned());
            }
        }
        out
    }

    fn reach(&self, start: &Edge, blocked: &Edge) -> Edge {
        let mut seen: Edge = start.difference(blocked).cloned().collect();
        loop {
            let mut grown = seen.clone();
            for e in &self.edges {
                if !e.is_disjoint(&seen) {
                    grown.extend(e.difference(blocked).cloned());
                }
            }
            if grown == seen {
                return seen;
            }
            seen = grown;
        }
    }

    fn escapes(&self, c: &Edge, cops: &Edge) -> Vec<Edge> {
        let border: Edge = self.frontier(c).difference(c).cloned().collect();
        let staying: Edge = border.intersection(cops).cloned().collect();
        let mut left: Edge = self.reach(c, &staying).difference(cops).cloned().collect();
        let mut out = Vec::new();
        while let Some(x) = left.iter().next().cloned() {
            let comp = self.reach(&Edge::from([x]), cops);
            left = left.difference(&comp).cloned().collect();
            out.push(comp);
        }
        out
    }

    fn wins(&self, c: &Edge, forced: Option<usize>, line: &mut Vec<Position>, won: &mut BTreeSet<Position>) -> bool {
        let pos = (c.clone(), forced);
        if won.contains(&pos) {
            return true;
        }
        if line.contains(&pos) {
            return false;
        }
        line.push(pos.clone());
        let frontier = self.frontier(c);
        let options: Vec<usize> = match forced {
            Some(h) => vec![h],
            None => (0..self.squads.len()).collect(),
        };
        let result = options.into_iter().any(|h| {
            let cops: Edge = self.squads[h].intersection(&frontier).cloned().collect();
            let escapes = self.escapes(c, &cops);
            if self.monotone_only && !escapes.iter().all(|e| e.is_subset(c)) {
                return false;
            }
            escapes.iter().all(|e| {
                let next = (!self.squads[h].is_disjoint(e)).then_some(h);
                self.wins(e, next, line, won)
            })
        });
        line.pop();
        if result {
            won.insert(pos);
        }
        result
    }
}
