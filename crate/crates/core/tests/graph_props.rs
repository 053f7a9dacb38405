mod common;

use pcsel::graph::{
    apply_meek_rules, cpdag_from_dag, d_separated, enumerate_dags, is_valid_cpdag, maximal_pdag,
    parse_dot, parse_edge_list, to_dot, to_edge_list, Dag, EdgeMark, Knowledge, MixedGraph,
    ValidityLevel, DEFAULT_ENUMERATION_CAP,
};
use pcsel::NodeSet;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn d_separation_matches_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..60 {
        let d = rng.gen_range(3..=6);
        let dag = common::random_dag(d, 0.45, &mut rng);
        for i in 0..d {
            for j in i + 1..d {
                let rest = NodeSet::full(d).without(i).without(j);
                for bits in 0..(1u64 << d) {
                    let s = NodeSet::from_bits(bits);
                    if !s.is_subset(rest) {
                        continue;
                    }
                    assert_eq!(
                        d_separated(&dag, i, j, s).unwrap(),
                        common::dsep_by_paths(&dag, i, j, s),
                        "{dag:?} {i} {j} {s:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let d = rng.gen_range(2..=5);
        let dag = common::random_dag(d, rng.gen_range(0.2..0.9), &mut rng);
        let c = cpdag_from_dag(&dag);
        let mut got = enumerate_dags(&c, DEFAULT_ENUMERATION_CAP).unwrap().dags;
        let mut want = common::brute_force_class(&c);
        got.sort_by_key(|g| g.edges());
        want.sort_by_key(|g| g.edges());
        assert_eq!(got, want, "{c:?}");
        assert!(got.contains(&dag));
    }
}

#[test]
fn meek_closure_is_idempotent_and_tier_safe() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let d = rng.gen_range(3..=8);
        let dag = common::random_dag(d, 0.4, &mut rng);
        let k = Knowledge::from_tiers(common::consistent_tiers(&dag, &mut rng));
        let once = maximal_pdag(&dag, &k);
        let twice = apply_meek_rules(&once, &k).graph;
        assert_eq!(once, twice);
        for (a, b, m) in once.edges() {
            match m {
                EdgeMark::Out => assert!(k.tiers.tier(a) <= k.tiers.tier(b)),
                EdgeMark::In => assert!(k.tiers.tier(b) <= k.tiers.tier(a)),
                _ => {}
            }
        }
        // every compelled edge of the plain CPDAG survives the tiered closure
        let plain = cpdag_from_dag(&dag);
        for (a, b, m) in plain.edges() {
            if matches!(m, EdgeMark::Out | EdgeMark::In) {
                assert_eq!(once.mark(a, b), m);
            }
        }
        assert!(is_valid_cpdag(&once, ValidityLevel::Strict, &k));
    }
}

fn arb_graph() -> impl Strategy<Value = MixedGraph> {
    (2usize..9).prop_flat_map(|d| {
        proptest::collection::vec(0u8..5, d * (d - 1) / 2).prop_map(move |marks| {
            let mut g = MixedGraph::empty(d);
            let mut k = 0;
            for a in 0..d {
                for b in a + 1..d {
                    let m = match marks[k] {
                        0 => EdgeMark::None,
                        1 => EdgeMark::Undirected,
                        2 => EdgeMark::Out,
                        3 => EdgeMark::In,
                        _ => EdgeMark::Bidirected,
                    };
                    g.set_mark(a, b, m);
                    k += 1;
                }
            }
            g
        })
    })
}

proptest! {
    #[test]
    fn edge_list_round_trips(g in arb_graph()) {
        let text = to_edge_list(&g);
        prop_assert_eq!(parse_edge_list(&text).unwrap(), g.clone());
        prop_assert_eq!(to_edge_list(&parse_edge_list(&text).unwrap()), text);
    }

    #[test]
    fn dot_round_trips(g in arb_graph()) {
        let names: Vec<String> = (0..g.n_nodes()).map(|v| format!("V{v}")).collect();
        let (back, parsed) = parse_dot(&to_dot(&g, Some(&names))).unwrap();
        prop_assert_eq!(back, g.clone());
        prop_assert_eq!(parsed, Some(names));
        let (plain, none) = parse_dot(&to_dot(&g, None)).unwrap();
        prop_assert_eq!(plain, g);
        prop_assert_eq!(none, None);
    }
}

#[test]
fn cpdag_of_chain_and_collider() {
    let chain = Dag::new(3, &[(0, 1), (1, 2)]).unwrap();
    assert!(!cpdag_from_dag(&chain).edges().any(|(_, _, m)| m != EdgeMark::Undirected));
    let collider = Dag::new(3, &[(0, 1), (2, 1)]).unwrap();
    assert_eq!(cpdag_from_dag(&collider), collider.to_mixed());
}
