//! Greedy strategy search.
//!
//! A greedy configuration `(h, M, C)` only matters through `C` and whether the
//! next squad is forced (`h ∩ C ≠ ∅`), so the search runs over such states.
//! The reachable state graph is explored once and solved exactly by a
//! backward attractor computation; every winning state gets a rank, and the
//! chosen move only leads to states of smaller rank.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::strategy::{Config, Move, StrategyGraph};
use super::Board;
use crate::{Hypergraph, NodeSet};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    comp: NodeSet,
    forced: Option<usize>,
}

struct Choice {
    squad: usize,
    children: Vec<usize>,
}

/// Outcome of a greedy search.
#[derive(Clone, Debug)]
pub struct Solution {
    /// Distinct game states explored.
    pub states: usize,
    pub strategy: Option<StrategyGraph>,
}

struct Explorer<'a> {
    board: &'a Board,
    monotone_only: bool,
    states: Vec<State>,
    index: BTreeMap<State, usize>,
    choices: Vec<Vec<Choice>>,
}

impl Explorer<'_> {
    fn intern(&mut self, s: State, queue: &mut VecDeque<usize>) -> usize {
        if let Some(&i) = self.index.get(&s) {
            return i;
        }
        let i = self.states.len();
        self.states.push(s.clone());
        self.index.insert(s, i);
        self.choices.push(Vec::new());
        queue.push_back(i);
        i
    }

    fn expand(&mut self, s: usize, queue: &mut VecDeque<usize>) {
        let State { comp, forced } = self.states[s].clone();
        let frontier = self.board.frontier(&comp);
        let candidates: Vec<usize> = match forced {
            Some(h) => vec![h],
            None => (0..self.board.squads().len()).collect(),
        };
        let mut escapes: BTreeMap<NodeSet, Option<Vec<NodeSet>>> = BTreeMap::new();
        let mut seen: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
        let mut out = Vec::new();
        for h in candidates {
            let squad = self.board.squad(h);
            let cops = squad.intersection(&frontier);
            let comps = escapes
                .entry(cops.clone())
                .or_insert_with(|| {
                    let comps = self.board.escape_components(&comp, &cops);
                    if self.monotone_only && !comps.iter().all(|c| c.is_subset(&comp)) {
                        None
                    } else {
                        Some(comps)
                    }
                })
                .clone();
            let Some(comps) = comps else { continue };
            let mut children: Vec<usize> = comps
                .into_iter()
                .map(|c| {
                    let forced = squad.intersects(&c).then_some(h);
                    self.intern(State { comp: c, forced }, queue)
                })
                .collect();
            children.sort_unstable();
            if seen.insert(children.clone(), ()).is_none() {
                out.push(Choice { squad: h, children });
            }
        }
        self.choices[s] = out;
    }
}

/// Explores the greedy game and, if the Captain wins, returns a winning
/// greedy strategy. With `monotone_only`, only monotone moves are allowed.
pub fn solve(h1: &Hypergraph, h2: &Hypergraph, monotone_only: bool) -> Solution {
    let board = Board::new(h1, h2);
    let mut ex = Explorer {
        board: &board,
        monotone_only,
        states: Vec::new(),
        index: BTreeMap::new(),
        choices: Vec::new(),
    };
    let mut queue = VecDeque::new();
    let root = ex.intern(
        State {
            comp: board.universe().clone(),
            forced: None,
        },
        &mut queue,
    );
    if board.universe().is_empty() {
        return Solution {
            states: 1,
            strategy: Some(StrategyGraph::trivial(board.universe().clone())),
        };
    }
    while let Some(s) = queue.pop_front() {
        ex.expand(s, &mut queue);
    }

    // Backward attractor with ranks.
    let n = ex.states.len();
    let mut parents: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut pending: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (s, cs) in ex.choices.iter().enumerate() {
        let mut counts = Vec::with_capacity(cs.len());
        for (k, c) in cs.iter().enumerate() {
            let mut distinct = c.children.clone();
            distinct.dedup();
            for &child in &distinct {
                parents[child].push((s, k));
            }
            counts.push(distinct.len());
        }
        pending.push(counts);
    }
    let mut rank: Vec<Option<usize>> = vec![None; n];
    let mut wins: VecDeque<usize> = VecDeque::new();
    for s in 0..n {
        if pending[s].contains(&0) {
            rank[s] = Some(1);
            wins.push_back(s);
        }
    }
    while let Some(w) = wins.pop_front() {
        let r = rank[w].unwrap();
        for &(s, k) in &parents[w] {
            pending[s][k] -= 1;
            if pending[s][k] == 0 && rank[s].is_none() {
                rank[s] = Some(r + 1);
                wins.push_back(s);
            }
        }
    }

    let strategy = rank[root].map(|_| {
        let pick = |s: usize| -> usize {
            let r = rank[s].unwrap();
            ex.choices[s]
                .iter()
                .filter(|c| c.children.iter().all(|&t| rank[t].is_some_and(|rt| rt < r)))
                .map(|c| c.squad)
                .min()
                .expect("a winning state has a ranked choice")
        };
        build_graph(&board, &ex.index, pick)
    });
    Solution {
        states: n,
        strategy,
    }
}

/// A greedy winning strategy, if one exists.
pub fn greedy_strategy(h1: &Hypergraph, h2: &Hypergraph, monotone_only: bool) -> Option<StrategyGraph> {
    solve(h1, h2, monotone_only).strategy
}

fn build_graph<F: Fn(usize) -> usize>(
    board: &Board,
    index: &BTreeMap<State, usize>,
    pick: F,
) -> StrategyGraph {
    let mut g = StrategyGraph::trivial(board.universe().clone());
    let mut stack = vec![g.root];
    let mut done = vec![false];
    while let Some(v) = stack.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        let Config { squad, robber, .. } = g.configs[v].clone();
        if robber.is_empty() {
            continue;
        }
        let forced = squad.filter(|&h| board.squad(h).intersects(&robber));
        let state = index[&State {
            comp: robber.clone(),
            forced,
        }];
        let h = pick(state);
        let cops = board.squad(h).intersection(&board.frontier(&robber));
        let comps = board.escape_components(&robber, &cops);
        let mut kids = Vec::new();
        if comps.is_empty() {
            kids.push(g.intern(Config {
                squad: Some(h),
                cops: cops.clone(),
                robber: NodeSet::empty(robber.universe()),
            }));
        }
        for c in comps {
            kids.push(g.intern(Config {
                squad: Some(h),
                cops: cops.clone(),
                robber: c,
            }));
        }
        done.resize(g.configs.len(), false);
        for &k in &kids {
            if !done[k] {
                stack.push(k);
            }
        }
        g.moves[v] = Some(Move { squad: h, cops });
        g.children[v] = kids;
    }
    g
}
