use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tpq_core::analysis::{is_tp_covered, lc_gc_certificate, width, WidthMode};
use tpq_core::views::make_view_system;
use tpq_oracles::{fixtures, gen};

#[test]
fn grid_certificate_uses_an_edge_core() {
    let q = fixtures::grid(2);
    let vs = make_view_system(&q, &[]).unwrap();
    let cert = tpq_core::analysis::lc_nonempty_certificate(&q, &vs).unwrap();
    assert!(cert.holds);
    let witness = &cert.obligations.iter().find(|o| o.coverage.covered).unwrap().subject;
    assert_eq!(witness.len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn widths_are_ordered(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = gen::query(&mut rng, 5, 6, 3, 5);
        let g = width(&q, WidthMode::Ghw, 3).unwrap().value;
        let r = width(&q, WidthMode::Grhw, 3).unwrap().value;
        let h = width(&q, WidthMode::Hw, 3).unwrap().value;
        if let (Some(g), Some(r), Some(h)) = (g, r, h) {
            prop_assert!(g <= r && r <= h);
        }
        if q.hypergraph().unwrap().is_acyclic() {
            prop_assert_eq!((g, r, h), (Some(1), Some(1), Some(1)));
        }
    }

    #[test]
    fn acyclic_queries_cover_their_atoms(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = gen::acyclic_query(&mut rng, 4, 3);
        let vs = make_view_system(&q, &[]).unwrap();
        prop_assert!(lc_gc_certificate(&q, &vs).unwrap().holds);
        let vars: Vec<String> = q.atoms()[0].vars().into_iter().map(String::from).collect();
        prop_assert!(is_tp_covered(&q, &vs, &vars).unwrap().covered);
    }
}
