//! Strategy graphs, nice strategies and component graphs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::Board;
use crate::{Error, Hypergraph, NodeSet, Result};

/// A configuration `(h, M, C)`. The initial configuration has no squad;
/// capture configurations have an empty robber set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Config {
    pub squad: Option<usize>,
    pub cops: NodeSet,
    pub robber: NodeSet,
}

/// A Captain move: the squad and the cops it puts in action.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Move {
    pub squad: usize,
    pub cops: NodeSet,
}

/// The strategy graph of a Captain strategy. `moves[v]` is the move chosen
/// at configuration `v`; `children[v]` are the configurations it leads to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyGraph {
    pub configs: Vec<Config>,
    pub moves: Vec<Option<Move>>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
    index: BTreeMap<Config, usize>,
}

impl StrategyGraph {
    /// A graph holding only the initial configuration over `universe`.
    pub(crate) fn trivial(universe: NodeSet) -> Self {
        let empty = NodeSet::empty(universe.universe());
        let root = Config {
            squad: None,
            cops: empty,
            robber: universe,
        };
        let mut index = BTreeMap::new();
        index.insert(root.clone(), 0);
        StrategyGraph {
            configs: vec![root],
            moves: vec![None],
            children: vec![Vec::new()],
            root: 0,
            index,
        }
    }

    pub(crate) fn intern(&mut self, c: Config) -> usize {
        if let Some(&i) = self.index.get(&c) {
            return i;
        }
        let i = self.configs.len();
        self.index.insert(c.clone(), i);
        self.configs.push(c);
        self.moves.push(None);
        self.children.push(Vec::new());
        i
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    /// Whether the graph is acyclic, i.e. the strategy is winning.
    pub fn is_winning(&self) -> bool {
        topological_order(&self.children).is_some()
    }

    /// Whether every move is monotone: the Robber never leaves her component.
    pub fn is_monotone(&self) -> bool {
        (0..self.len()).all(|v| {
            self.children[v]
                .iter()
                .all(|&c| self.configs[c].robber.is_subset(&self.configs[v].robber))
        })
    }

    /// Whether every move is greedy with respect to `(h1, h2)`.
    pub fn is_greedy(&self, h1: &Hypergraph, h2: &Hypergraph) -> bool {
        let board = Board::new(h1, h2);
        (0..self.len()).all(|v| {
            let Some(m) = &self.moves[v] else { return true };
            let c = &self.configs[v];
            let forced = c.squad.filter(|&h| board.squad(h).intersects(&c.robber));
            forced.is_none_or(|h| h == m.squad)
                && m.cops == board.squad(m.squad).intersection(&board.frontier(&c.robber))
        })
    }

    /// Checks that moves are legal and that children are exactly the
    /// Robber's options (or one capture configuration).
    pub fn validate(&self, h1: &Hypergraph, h2: &Hypergraph) -> Result<(), String> {
        let board = Board::new(h1, h2);
        for v in 0..self.len() {
            let c = &self.configs[v];
            match &self.moves[v] {
                None if c.robber.is_empty() => {
                    if !self.children[v].is_empty() {
                        return Err(format!("capture configuration {v} has children"));
                    }
                }
                None => return Err(format!("configuration {v} has no move")),
                Some(m) => {
                    let legal = board.squad(m.squad).intersection(&board.frontier(&c.robber));
                    if !m.cops.is_subset(&legal) {
                        return Err(format!("move at {v} uses unavailable cops"));
                    }
                    let mut expected: Vec<Config> = board
                        .escape_components(&c.robber, &m.cops)
                        .into_iter()
                        .map(|r| Config {
                            squad: Some(m.squad),
                            cops: m.cops.clone(),
                            robber: r,
                        })
                        .collect();
                    if expected.is_empty() {
                        expected.push(Config {
                            squad: Some(m.squad),
                            cops: m.cops.clone(),
                            robber: NodeSet::empty(c.robber.universe()),
                        });
                    }
                    let mut actual: Vec<Config> =
                        self.children[v].iter().map(|&k| self.configs[k].clone()).collect();
                    expected.sort();
                    actual.sort();
                    if expected != actual {
                        return Err(format!("children of {v} differ from the Robber's options"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether every configuration whose border is strictly inside its cops
    /// first retreats to the border.
    pub fn is_nice(&self, h1: &Hypergraph) -> bool {
        let board = Board::without_squads(h1);
        (0..self.len()).all(|v| {
            let c = &self.configs[v];
            if c.robber.is_empty() || c.squad.is_none() {
                return true;
            }
            let border = board.border(&c.robber);
            border == c.cops
                || matches!(&self.moves[v], Some(m) if Some(m.squad) == c.squad && m.cops == border)
        })
    }
}

/// Inserts the border-restriction configuration `(h, ∂C, C)` before every
/// configuration `(h, M, C)` with `∂C ⊂ M`.
pub fn to_nice(g: &StrategyGraph, h1: &Hypergraph) -> Result<StrategyGraph> {
    if !g.is_winning() {
        return Err(Error::NotWinning);
    }
    let board = Board::without_squads(h1);
    let mut out = g.clone();
    for v in 0..g.len() {
        let c = g.configs[v].clone();
        let (Some(h), false) = (c.squad, c.robber.is_empty()) else { continue };
        let border = board.border(&c.robber);
        if border == c.cops {
            continue;
        }
        debug_assert!(border.is_subset(&c.cops));
        if matches!(&g.moves[v], Some(m) if m.squad == h && m.cops == border) {
            continue;
        }
        let r = out.intern(Config {
            squad: Some(h),
            cops: border.clone(),
            robber: c.robber.clone(),
        });
        if out.moves[r].is_none() {
            out.moves[r] = g.moves[v].clone();
            out.children[r] = g.children[v].clone();
        }
        out.moves[v] = Some(Move {
            squad: h,
            cops: border,
        });
        out.children[v] = vec![r];
    }
    Ok(out)
}

/// A node `(h, C)` of a component graph with the move made there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CgNode {
    pub squad: Option<usize>,
    pub comp: NodeSet,
    /// Absent for capture nodes.
    pub mv: Option<Move>,
    pub children: Vec<usize>,
}

/// Compact encoding of a nice strategy by `(squad, component)` nodes.
///
/// Moves keep their cop sets explicitly. Nodes removed by [`super::monotonize`]
/// stay in `nodes` with `alive` cleared so that indices remain stable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentGraph {
    pub nodes: Vec<CgNode>,
    pub alive: Vec<bool>,
    pub root: usize,
}

impl ComponentGraph {
    /// Encodes a nice strategy graph.
    pub fn from_nice(g: &StrategyGraph, h1: &Hypergraph) -> Result<Self> {
        if !g.is_nice(h1) {
            return Err(Error::NotNice);
        }
        if !g.is_winning() {
            return Err(Error::NotWinning);
        }
        let board = Board::without_squads(h1);
        // Configurations that only retreat to the border stand for their child.
        let resolve = |mut v: usize| -> usize {
            loop {
                let c = &g.configs[v];
                if c.robber.is_empty() || c.squad.is_none() || board.border(&c.robber) == c.cops {
                    return v;
                }
                v = g.children[v][0];
            }
        };
        let mut ids: BTreeMap<(Option<usize>, NodeSet), usize> = BTreeMap::new();
        let mut nodes: Vec<CgNode> = Vec::new();
        let mut of_config: BTreeMap<usize, usize> = BTreeMap::new();
        let mut stack = vec![resolve(g.root)];
        while let Some(v) = stack.pop() {
            if of_config.contains_key(&v) {
                continue;
            }
            let c = &g.configs[v];
            let key = (c.squad, c.robber.clone());
            let id = *ids.entry(key).or_insert_with(|| {
                nodes.push(CgNode {
                    squad: c.squad,
                    comp: c.robber.clone(),
                    mv: g.moves[v].clone(),
                    children: Vec::new(),
                });
                nodes.len() - 1
            });
            of_config.insert(v, id);
            for &k in &g.children[v] {
                stack.push(resolve(k));
            }
        }
        for (&v, &id) in &of_config {
            let mut kids: Vec<usize> = g.children[v].iter().map(|&k| of_config[&resolve(k)]).collect();
            kids.sort_unstable();
            kids.dedup();
            nodes[id].children = kids;
        }
        let root = of_config[&resolve(g.root)];
        let alive = vec![true; nodes.len()];
        Ok(ComponentGraph { nodes, alive, root })
    }

    pub fn live_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&v| self.alive[v])
    }

    pub fn node_count(&self) -> usize {
        self.live_nodes().count()
    }

    pub fn parents(&self) -> Vec<Vec<usize>> {
        let mut p = vec![Vec::new(); self.nodes.len()];
        for v in self.live_nodes() {
            for &c in &self.nodes[v].children {
                p[c].push(v);
            }
        }
        p
    }

    pub fn max_in_degree(&self) -> usize {
        self.parents().iter().map(Vec::len).max().unwrap_or(0)
    }

    fn live_children(&self) -> Vec<Vec<usize>> {
        (0..self.nodes.len())
            .map(|v| if self.alive[v] { self.nodes[v].children.clone() } else { Vec::new() })
            .collect()
    }

    /// Live nodes with leaves first and the root last.
    pub fn leaves_first_order(&self) -> Option<Vec<usize>> {
        let mut order = topological_order(&self.live_children())?;
        order.retain(|&v| self.alive[v]);
        order.reverse();
        Some(order)
    }

    pub fn is_winning(&self) -> bool {
        topological_order(&self.live_children()).is_some()
    }

    /// Whether the move at `v` keeps the Robber inside `comp(v)`.
    pub fn is_monotone_at(&self, v: usize) -> bool {
        let node = &self.nodes[v];
        node.children
            .iter()
            .all(|&c| self.nodes[c].comp.is_subset(&node.comp))
    }

    pub fn is_monotone(&self) -> bool {
        self.live_nodes().all(|v| self.is_monotone_at(v))
    }

    /// The distinct non-empty cop sets of live moves, in node order.
    pub fn cop_sets(&self) -> Vec<NodeSet> {
        let mut out: Vec<NodeSet> = Vec::new();
        for v in self.live_nodes() {
            if let Some(m) = &self.nodes[v].mv {
                if !m.cops.is_empty() && !out.contains(&m.cops) {
                    out.push(m.cops.clone());
                }
            }
        }
        out
    }

    /// Checks the component-graph conditions against `(h1, h2)`: the root is
    /// the only node without incoming arcs, every move is legal, and the
    /// children of each node are exactly the Robber's options.
    pub fn validate(&self, h1: &Hypergraph, h2: &Hypergraph) -> Result<(), String> {
        let board = Board::new(h1, h2);
        let parents = self.parents();
        let root = &self.nodes[self.root];
        if !self.alive[self.root] || root.squad.is_some() || &root.comp != board.universe() {
            return Err(String::from("bad root"));
        }
        if !parents[self.root].is_empty() {
            return Err(String::from("root has incoming arcs"));
        }
        if !self.is_winning() {
            return Err(String::from("cyclic"));
        }
        for v in self.live_nodes() {
            let node = &self.nodes[v];
            if v != self.root && parents[v].is_empty() {
                return Err(format!("node {v} has no incoming arcs"));
            }
            if node.children.iter().any(|&c| !self.alive[c]) {
                return Err(format!("node {v} points to a removed node"));
            }
            if let Some(h) = node.squad {
                if !node.comp.is_empty() && !board.border(&node.comp).is_subset(board.squad(h)) {
                    return Err(format!("border of node {v} is not inside its squad"));
                }
            }
            match &node.mv {
                None if node.comp.is_empty() && node.children.is_empty() => {}
                None => return Err(format!("node {v} has no move")),
                Some(m) => {
                    if node.comp.is_empty() {
                        return Err(format!("capture node {v} has a move"));
                    }
                    let legal = board.squad(m.squad).intersection(&board.frontier(&node.comp));
                    if !m.cops.is_subset(&legal) {
                        return Err(format!("move at {v} uses unavailable cops"));
                    }
                    let mut expected = board.escape_components(&node.comp, &m.cops);
                    if expected.is_empty() {
                        expected.push(NodeSet::empty(node.comp.universe()));
                    }
                    let mut actual: Vec<NodeSet> = Vec::new();
                    for &c in &node.children {
                        if self.nodes[c].squad != Some(m.squad) {
                            return Err(format!("child {c} of {v} has the wrong squad"));
                        }
                        actual.push(self.nodes[c].comp.clone());
                    }
                    expected.sort();
                    actual.sort();
                    if expected != actual {
                        return Err(format!("children of {v} differ from the Robber's options"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Kahn order of a graph given by child lists, or `None` if it has a cycle.
pub(crate) fn topological_order(children: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = children.len();
    let mut indeg = vec![0usize; n];
    for cs in children {
        for &c in cs {
            indeg[c] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    ready.reverse();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        order.push(v);
        for &c in &children[v] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.push(c);
            }
        }
    }
    (order.len() == n).then_some(order)
}
