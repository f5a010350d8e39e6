use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tpq_core::hypergraph::{covers, DEFAULT_ARITY_CAP, DEFAULT_EXPANSION_CAP};
use tpq_core::{Hypergraph, NodeSet};
use tpq_oracles::naive::{has_join_tree, is_join_tree};
use tpq_oracles::{edges_of, gen};

fn random(seed: u64, edges: usize) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen::hypergraph(&mut rng, 6, edges, 3)
}

fn subset(h: &Hypergraph, mask: u64) -> NodeSet {
    NodeSet::from_indices(h.node_count(), (0..h.node_count()).filter(|i| mask >> i & 1 == 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn acyclicity_matches_join_tree_search(seed: u64, m in 1usize..=5) {
        let h = random(seed, m);
        prop_assert_eq!(h.is_acyclic(), has_join_tree(&edges_of(&h)));
    }

    #[test]
    fn join_trees_are_connected(seed: u64, m in 1usize..=6) {
        let h = random(seed, m);
        if let Ok(jt) = h.join_tree() {
            prop_assert!(is_join_tree(&edges_of(&h), &jt.tree_edges()));
            prop_assert_eq!(jt.len(), h.edge_count());
        } else {
            prop_assert!(!h.is_acyclic());
        }
    }

    #[test]
    fn covers_is_a_preorder(a: u64, b: u64, c: u64) {
        let (x, y, z) = (random(a, 3), random(b, 2), random(c, 2));
        prop_assert!(covers(&x, &x));
        if covers(&x, &y) && covers(&y, &z) {
            prop_assert!(covers(&x, &z));
        }
    }

    #[test]
    fn expansions_grow_with_k(seed: u64, m in 1usize..=4) {
        let h = random(seed, m);
        prop_assert_eq!(h.union_expand(1), h.clone());
        let mut prev = h.clone();
        for k in 2..=3 {
            let next = h.union_expand(k);
            prop_assert!(covers(&prev, &next));
            prev = next;
        }
        let t1 = h.cluster_expand(1, DEFAULT_EXPANSION_CAP).unwrap();
        let t2 = h.cluster_expand(2, DEFAULT_EXPANSION_CAP).unwrap();
        prop_assert!(covers(&t1, &t2));
        prop_assert!(t2.edges().iter().all(|e| e.len() <= 3));
    }

    #[test]
    fn simplicial_covers_both_ways(seed: u64, m in 1usize..=4) {
        let h = random(seed, m);
        let s = h.simplicial(DEFAULT_ARITY_CAP).unwrap();
        prop_assert!(covers(&h, &s));
        prop_assert!(covers(&s, &h.prune_subsumed()));
        prop_assert!(s.edge_count() <= (1 << h.max_arity()) * h.edge_count());
    }

    #[test]
    fn separations_are_maximal_components(seed: u64, mask in 0u64..64) {
        let h = random(seed, 4);
        let v = subset(&h, mask);
        let seps = h.separate(&v);
        let mut seen = NodeSet::empty(h.node_count());
        for s in &seps {
            prop_assert!(s.component.is_disjoint(&seen));
            prop_assert!(s.component.is_disjoint(&v));
            prop_assert!(s.border.is_subset(&v));
            seen.union_with(&s.component);
            // Connected: the single component of itself.
            let inner = h.components(&NodeSet::full(h.node_count()).difference(&s.component));
            prop_assert_eq!(inner.len(), 1);
            // Maximal: no edge links it to an outside node off `v`.
            for e in h.edges() {
                if e.intersects(&s.component) {
                    prop_assert!(e.difference(&v).is_subset(&s.component));
                }
            }
        }
        prop_assert_eq!(seen, NodeSet::full(h.node_count()).difference(&v));
    }
}
