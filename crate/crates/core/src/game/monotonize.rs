//! Monotonization of nice winning strategies and tree projection extraction.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::strategy::{CgNode, ComponentGraph, Move};
use super::Board;
use crate::{Error, Hypergraph, JoinTree, NodeSet, Result};

/// Turns a nice winning component graph into a monotone winning one.
///
/// Nodes are visited leaves first. At a node `v` whose move `(h_s, M_s)` lets
/// the Robber out of `C_v`, each parent `p` is patched in turn: `p` now
/// keeps the escape door `E = ∂C_v \ M_s` occupied by playing
/// `M' = cops(p) \ E`, and points to a fresh node for the enlarged component
/// `C'` of `M'` containing `C_v ∪ E`, which repeats the move of `v`.
pub fn monotonize(cg: &ComponentGraph, h1: &Hypergraph, h2: &Hypergraph) -> Result<ComponentGraph> {
    if !cg.is_winning() {
        return Err(Error::NotWinning);
    }
    let board = Board::new(h1, h2);
    for v in cg.live_nodes() {
        let node = &cg.nodes[v];
        if let (Some(h), false) = (node.squad, node.comp.is_empty()) {
            if !board.border(&node.comp).is_subset(board.squad(h)) {
                return Err(Error::NotNice);
            }
        }
    }
    let order = cg.leaves_first_order().ok_or(Error::NotWinning)?;
    let bound = cg.node_count() * cg.max_in_degree().max(1);
    let mut g = cg.clone();
    let mut iterations = 0usize;

    for &v in &order {
        if v == g.root {
            break;
        }
        while g.alive[v] && !g.is_monotone_at(v) {
            iterations += 1;
            assert!(iterations <= bound, "monotonization exceeded its iteration bound");
            let parents = g.parents();
            let p = parents[v][0];
            let node = g.nodes[v].clone();
            let own = node.mv.clone().expect("non-monotone nodes move");
            let parent_move = g.nodes[p].mv.clone().expect("parents move");

            let door = board.border(&node.comp).difference(&own.cops);
            debug_assert!(!door.is_empty());
            let kept = parent_move.cops.difference(&door);
            let seed = node.comp.union(&door);
            let grown = board
                .components(&kept)
                .into_iter()
                .find(|c| seed.is_subset(c))
                .expect("the escape door joins the Robber's component");

            // (i) the enlarged node repeats the move of v.
            let fresh = g.nodes.len();
            g.nodes.push(CgNode {
                squad: node.squad,
                comp: grown,
                mv: Some(own),
                children: node.children.clone(),
            });
            g.alive.push(true);

            // (ii) and (iii): the parent plays the reduced cop set.
            let parent_comp = g.nodes[p].comp.clone();
            let options = board.escape_components(&parent_comp, &kept);
            let mut kids: Vec<usize> = g.nodes[p]
                .children
                .iter()
                .copied()
                .filter(|&c| options.contains(&g.nodes[c].comp) && c != v)
                .collect();
            kids.push(fresh);
            g.nodes[p].children = kids;
            g.nodes[p].mv = Some(Move {
                squad: parent_move.squad,
                cops: kept,
            });

            // (iv) drop what became unreachable.
            prune_orphans(&mut g);
        }
    }
    debug_assert!(g.is_monotone());
    Ok(g)
}

fn prune_orphans(g: &mut ComponentGraph) {
    loop {
        let parents = g.parents();
        let orphans: Vec<usize> = g
            .live_nodes()
            .filter(|&v| v != g.root && parents[v].is_empty())
            .collect();
        if orphans.is_empty() {
            return;
        }
        for v in orphans {
            g.alive[v] = false;
        }
    }
}

/// An acyclic hypergraph `Ha` with `H1 ≤ Ha ≤ H2`, with the evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeProjection {
    /// Over the nodes of `H1`.
    pub hypergraph: Hypergraph,
    pub join_tree: JoinTree,
    /// For each edge of `Ha`, an `H2` edge containing it.
    pub squad_of_edge: Vec<usize>,
    /// For each edge of `H1`, an edge of `Ha` containing it.
    pub edge_of_h1: Vec<usize>,
}

impl TreeProjection {
    /// Builds and checks a tree projection from candidate edges over the
    /// nodes of `h1`.
    pub fn from_edges(h1: &Hypergraph, h2: &Hypergraph, edges: Vec<NodeSet>) -> Result<Self> {
        let violation = |m: String| Error::SandwichViolation(m);
        let ha = Hypergraph::from_parts(h1.nodes().to_vec(), edges);
        let join_tree = if ha.edge_count() == 0 {
            JoinTree {
                parent: Vec::new(),
                root: 0,
            }
        } else {
            ha.join_tree()
                .map_err(|_| violation(String::from("candidate is not acyclic")))?
        };
        let mut squad_of_edge = Vec::with_capacity(ha.edge_count());
        for e in ha.edges() {
            let names = ha.names(e);
            let inside = h2.edges().iter().position(|f| {
                names
                    .iter()
                    .all(|x| h2.node_index(x).is_some_and(|i| f.contains(i)))
            });
            match inside {
                Some(i) => squad_of_edge.push(i),
                None => return Err(violation(format!("edge {names:?} is not inside any H2 edge"))),
            }
        }
        let mut edge_of_h1 = Vec::with_capacity(h1.edge_count());
        for e in h1.edges() {
            match ha.edges().iter().position(|f| e.is_subset(f)) {
                Some(i) => edge_of_h1.push(i),
                None => {
                    return Err(violation(format!(
                        "H1 edge {:?} is not covered",
                        h1.names(e)
                    )))
                }
            }
        }
        Ok(TreeProjection {
            hypergraph: ha,
            join_tree,
            squad_of_edge,
            edge_of_h1,
        })
    }

    /// Re-checks acyclicity, the join tree and both coverings.
    pub fn verify(&self, h1: &Hypergraph, h2: &Hypergraph) -> bool {
        self.hypergraph.nodes() == h1.nodes()
            && self.hypergraph.is_acyclic()
            && self.join_tree.is_valid_for(&self.hypergraph)
            && h1.covered_by(&self.hypergraph)
            && self.hypergraph.covered_by(h2)
    }
}

/// Reads a tree projection off a monotone winning component graph: its
/// edges are the cop sets of the moves.
pub fn extract_tree_projection(
    cg: &ComponentGraph,
    h1: &Hypergraph,
    h2: &Hypergraph,
) -> Result<TreeProjection> {
    if !cg.is_winning() {
        return Err(Error::NotWinning);
    }
    if !cg.is_monotone() {
        return Err(Error::NotMonotone);
    }
    TreeProjection::from_edges(h1, h2, cg.cop_sets())
}
