//! Hypergraph algebra: coverage, `[V]`-components, GYO acyclicity, join trees
//! and the expansions used by the decomposition methods.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, NodeSet, Result};

/// Default cap on the number of edges produced by [`Hypergraph::cluster_expand`].
pub const DEFAULT_EXPANSION_CAP: u128 = 1_000_000;
/// Default cap on the edge arity accepted by [`Hypergraph::simplicial`].
pub const DEFAULT_ARITY_CAP: usize = 16;

/// A finite hypergraph over named nodes.
///
/// Nodes are kept sorted by name, so node indices follow the lexicographic
/// order of the names. Edges are non-empty, stored in canonical order and
/// free of exact duplicates. Subsumed edges are kept; see
/// [`Hypergraph::prune_subsumed`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    nodes: Vec<String>,
    edges: Vec<NodeSet>,
}

/// A `[V]`-component together with its border and frontier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub component: NodeSet,
    pub border: NodeSet,
    pub frontier: NodeSet,
}

/// A join tree over the edges of a hypergraph.
///
/// Vertices are edge indices of the source hypergraph. `parent[i]` is the
/// parent of edge `i`, `None` for the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinTree {
    pub parent: Vec<Option<usize>>,
    pub root: usize,
}

impl Hypergraph {
    /// Builds a hypergraph whose node set is the union of `edges`.
    pub fn from_edges<E, I, S>(edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = I>,
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self::build(None::<Vec<String>>, edges)
    }

    /// Builds a hypergraph with explicitly declared nodes. Declared nodes that
    /// occur in no edge are kept as isolated nodes.
    pub fn with_nodes<N, T, E, I, S>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator<Item = T>,
        T: AsRef<str>,
        E: IntoIterator<Item = I>,
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self::build(Some(nodes), edges)
    }

    fn build<N, T, E, I, S>(nodes: Option<N>, edges: E) -> Result<Self>
    where
        N: IntoIterator<Item = T>,
        T: AsRef<str>,
        E: IntoIterator<Item = I>,
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let raw: Vec<BTreeSet<String>> = edges
            .into_iter()
            .map(|e| e.into_iter().map(|s| s.as_ref().to_string()).collect())
            .collect();
        if let Some(i) = raw.iter().position(BTreeSet::is_empty) {
            return Err(Error::EmptyEdge(i));
        }
        let names: BTreeSet<String> = match nodes {
            Some(declared) => {
                let declared: BTreeSet<String> =
                    declared.into_iter().map(|s| s.as_ref().to_string()).collect();
                for e in &raw {
                    if let Some(missing) = e.iter().find(|x| !declared.contains(*x)) {
                        return Err(Error::UndeclaredNode(missing.clone()));
                    }
                }
                declared
            }
            None => raw.iter().flatten().cloned().collect(),
        };
        let nodes: Vec<String> = names.into_iter().collect();
        let n = nodes.len();
        let edges = raw
            .iter()
            .map(|e| {
                NodeSet::from_indices(
                    n,
                    e.iter().map(|x| nodes.binary_search(x).expect("node was collected")),
                )
            })
            .collect();
        Ok(Self::from_parts(nodes, edges))
    }

    /// Assembles a hypergraph from sorted, duplicate-free node names and edges
    /// over their indices. Edges are canonicalized; empty edges are dropped.
    pub fn from_parts(nodes: Vec<String>, edges: Vec<NodeSet>) -> Self {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let n = nodes.len();
        let set: BTreeSet<NodeSet> = edges
            .into_iter()
            .filter(|e| !e.is_empty())
            .map(|e| NodeSet::from_indices(n, e.iter()))
            .collect();
        Hypergraph {
            nodes,
            edges: set.into_iter().collect(),
        }
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[NodeSet] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.binary_search_by(|x| x.as_str().cmp(name)).ok()
    }

    /// Translates node names into a set over this hypergraph's indices.
    /// Returns `None` if some name is not a node.
    pub fn node_set<I, S>(&self, names: I) -> Option<NodeSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = NodeSet::empty(self.nodes.len());
        for name in names {
            set.insert(self.node_index(name.as_ref())?);
        }
        Some(set)
    }

    pub fn names<'a>(&'a self, set: &NodeSet) -> Vec<&'a str> {
        set.iter().map(|i| self.nodes[i].as_str()).collect()
    }

    pub fn edge_names(&self, edge: usize) -> Vec<&str> {
        self.names(&self.edges[edge])
    }

    /// All edges as sorted name lists, in canonical order.
    pub fn edge_name_lists(&self) -> Vec<Vec<String>> {
        (0..self.edges.len())
            .map(|i| self.edge_names(i).into_iter().map(String::from).collect())
            .collect()
    }

    /// Union of all edges.
    pub fn covered_nodes(&self) -> NodeSet {
        let mut out = NodeSet::empty(self.nodes.len());
        for e in &self.edges {
            out.union_with(e);
        }
        out
    }

    /// Maps each node of `self` to its index in `other`, if present.
    pub fn index_map(&self, other: &Hypergraph) -> Vec<Option<usize>> {
        self.nodes.iter().map(|x| other.node_index(x)).collect()
    }

    /// Re-expresses `set` (over `self`) over the indices of `other`, dropping
    /// nodes `other` does not have.
    pub fn translate(&self, set: &NodeSet, other: &Hypergraph) -> NodeSet {
        NodeSet::from_indices(
            other.node_count(),
            set.iter().filter_map(|i| other.node_index(&self.nodes[i])),
        )
    }

    /// `self ≤ other`: every edge of `self` is contained in some edge of `other`.
    pub fn covered_by(&self, other: &Hypergraph) -> bool {
        covers(self, other)
    }

    /// Edges are the intersections of this hypergraph's edges with
    /// `nodes(onto)`; the node set becomes that of `onto`.
    pub fn project_onto(&self, onto: &Hypergraph) -> Hypergraph {
        let edges = self.edges.iter().map(|e| self.translate(e, onto)).collect();
        Hypergraph::from_parts(onto.nodes.clone(), edges)
    }

    /// Drops edges strictly contained in another edge.
    pub fn prune_subsumed(&self) -> Hypergraph {
        let edges = self
            .edges
            .iter()
            .filter(|e| !self.edges.iter().any(|f| f != *e && e.is_subset(f)))
            .cloned()
            .collect();
        Hypergraph::from_parts(self.nodes.clone(), edges)
    }

    pub fn max_arity(&self) -> usize {
        self.edges.iter().map(NodeSet::len).max().unwrap_or(0)
    }

    /// `C ∪ nodes(edges(C))`.
    pub fn frontier(&self, component: &NodeSet) -> NodeSet {
        let mut out = component.clone();
        for e in &self.edges {
            if e.intersects(component) {
                out.union_with(e);
            }
        }
        out
    }

    /// Maximal `[blocked]`-connected sets of nodes outside `blocked`, ordered
    /// by smallest member. Nodes in no edge form singleton components.
    pub fn components(&self, blocked: &NodeSet) -> Vec<NodeSet> {
        let n = self.nodes.len();
        let incidence = self.incidence();
        let mut seen = blocked.clone();
        let mut out = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = NodeSet::empty(n);
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(x) = queue.pop_front() {
                comp.insert(x);
                for &e in &incidence[x] {
                    for y in self.edges[e].iter() {
                        if !seen.contains(y) {
                            seen.insert(y);
                            queue.push_back(y);
                        }
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// All `[v]`-components with their borders and frontiers.
    pub fn separate(&self, v: &NodeSet) -> Vec<Separation> {
        self.components(v)
            .into_iter()
            .map(|component| {
                let frontier = self.frontier(&component);
                let border = frontier.difference(&component);
                Separation {
                    component,
                    border,
                    frontier,
                }
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components(&NodeSet::empty(self.nodes.len())).len() <= 1
    }

    fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.nodes.len()];
        for (i, e) in self.edges.iter().enumerate() {
            for x in e.iter() {
                inc[x].push(i);
            }
        }
        inc
    }

    /// α-acyclicity via GYO ear removal.
    pub fn is_acyclic(&self) -> bool {
        self.edges.is_empty() || self.join_tree().is_ok()
    }

    /// Builds a join tree by repeatedly removing the smallest ear; the ear's
    /// parent is the smallest edge witnessing it.
    pub fn join_tree(&self) -> Result<JoinTree> {
        let m = self.edges.len();
        if m == 0 {
            return Err(Error::EmptyHypergraph);
        }
        let mut alive = vec![true; m];
        let mut occurrences = vec![0usize; self.nodes.len()];
        for e in &self.edges {
            for x in e.iter() {
                occurrences[x] += 1;
            }
        }
        let mut parent = vec![None; m];
        for _ in 1..m {
            let ear = (0..m).filter(|&e| alive[e]).find_map(|e| {
                let shared = NodeSet::from_indices(
                    self.nodes.len(),
                    self.edges[e].iter().filter(|&x| occurrences[x] >= 2),
                );
                (0..m)
                    .find(|&f| f != e && alive[f] && shared.is_subset(&self.edges[f]))
                    .map(|f| (e, f))
            });
            let (e, f) = ear.ok_or(Error::NotAcyclic)?;
            alive[e] = false;
            parent[e] = Some(f);
            for x in self.edges[e].iter() {
                occurrences[x] -= 1;
            }
        }
        let root = alive.iter().position(|&a| a).expect("one edge survives");
        Ok(JoinTree { parent, root })
    }

    /// `H^k`: all unions of between 1 and `k` edges.
    pub fn union_expand(&self, k: usize) -> Hypergraph {
        assert!(k >= 1, "union expansion needs k >= 1");
        let mut all: BTreeSet<NodeSet> = self.edges.iter().cloned().collect();
        let mut frontier: Vec<NodeSet> = self.edges.clone();
        for _ in 1..k {
            let mut next = Vec::new();
            for s in &frontier {
                for e in &self.edges {
                    let u = s.union(e);
                    if all.insert(u.clone()) {
                        next.push(u);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Hypergraph {
            nodes: self.nodes.clone(),
            edges: all.into_iter().collect(),
        }
    }

    /// `H^tk`: every non-empty node set of size at most `k + 1`.
    pub fn cluster_expand(&self, k: usize, cap: u128) -> Result<Hypergraph> {
        assert!(k >= 1, "cluster expansion needs k >= 1");
        let n = self.nodes.len();
        let size = (k + 1).min(n);
        let requested: u128 = (1..=size).map(|i| binomial(n, i)).sum();
        if requested > cap {
            return Err(Error::ExpansionTooLarge { requested, cap });
        }
        let mut edges = Vec::with_capacity(requested as usize);
        for s in 1..=size {
            for_each_combination(n, s, |combo| {
                edges.push(NodeSet::from_indices(n, combo.iter().copied()))
            });
        }
        Ok(Hypergraph::from_parts(self.nodes.clone(), edges))
    }

    /// The simplicial version: every non-empty subset of every edge.
    pub fn simplicial(&self, arity_cap: usize) -> Result<Hypergraph> {
        let arity = self.max_arity();
        if arity > arity_cap {
            return Err(Error::ArityCapExceeded {
                arity,
                cap: arity_cap,
            });
        }
        let n = self.nodes.len();
        let mut all = BTreeSet::new();
        for e in &self.edges {
            let members = e.to_vec();
            for mask in 1u32..(1u32 << members.len()) {
                all.insert(NodeSet::from_indices(
                    n,
                    members
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &x)| x),
                ));
            }
        }
        Ok(Hypergraph {
            nodes: self.nodes.clone(),
            edges: all.into_iter().collect(),
        })
    }
}

/// `h1 ≤ h2`: every edge of `h1` is contained in some edge of `h2`, matching
/// nodes by name.
pub fn covers(h1: &Hypergraph, h2: &Hypergraph) -> bool {
    let map = h1.index_map(h2);
    h1.edges.iter().all(|e| {
        let mut translated = NodeSet::empty(h2.node_count());
        for x in e.iter() {
            match map[x] {
                Some(y) => translated.insert(y),
                None => return false,
            }
        }
        h2.edges.iter().any(|f| translated.is_subset(f))
    })
}

impl JoinTree {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// `(parent, child)` pairs.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (p, c)))
            .collect()
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.parent.len())
            .filter(|&c| self.parent[c] == Some(v))
            .collect()
    }

    /// Vertices in breadth-first order from the root.
    pub fn top_down(&self) -> Vec<usize> {
        let mut order = vec![self.root];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            order.extend(self.children(v));
            i += 1;
        }
        order
    }

    /// The same undirected tree rooted at `new_root`.
    pub fn rerooted(&self, new_root: usize) -> JoinTree {
        let n = self.parent.len();
        let mut adj = vec![Vec::new(); n];
        for (p, c) in self.tree_edges() {
            adj[p].push(c);
            adj[c].push(p);
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([new_root]);
        seen[new_root] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        JoinTree {
            parent,
            root: new_root,
        }
    }

    /// Checks that the tree spans all edges of `h` and satisfies the
    /// connectedness condition for every node.
    pub fn is_valid_for(&self, h: &Hypergraph) -> bool {
        let m = h.edge_count();
        if m == 0 {
            return self.parent.is_empty();
        }
        if self.parent.len() != m || self.parent[self.root].is_some() {
            return false;
        }
        if self.top_down().len() != m {
            return false;
        }
        // For every node, the vertices containing it must form a subtree: all
        // of them except one have their parent also containing the node.
        (0..h.node_count()).all(|x| {
            let holders: Vec<usize> = (0..m).filter(|&e| h.edges()[e].contains(x)).collect();
            let tops = holders
                .iter()
                .filter(|&&e| match self.parent[e] {
                    Some(p) => !h.edges()[p].contains(x),
                    None => true,
                })
                .count();
            holders.is_empty() || tops == 1
        })
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Calls `f` on every `k`-combination of `0..n` in lexicographic order.
pub(crate) fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
