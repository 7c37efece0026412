use std::collections::BTreeMap;

use bgc_core::fixtures::{random_standard_graph, sample_tree};
use bgc_core::oracle::{oracle_equivalent, SearchBounds, Verdict};
use bgc_core::{
    apply_trace, canonical_form, gamma0, intersection_determinant, invert_trace, normalize_branch_weights, segments,
    CaseTag, Move, Trace, VertexId, Weight, WeightedGraph,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn standard_graph(max_vertices: usize) -> impl Strategy<Value = WeightedGraph> {
    any::<u64>().prop_map(move |seed| random_standard_graph(&mut ChaCha8Rng::seed_from_u64(seed), max_vertices))
}

fn tree(max_vertices: usize) -> impl Strategy<Value = WeightedGraph> {
    standard_graph(max_vertices).prop_filter("trees only", |g| !g.is_circular())
}

fn encoding(g: &WeightedGraph) -> String {
    canonical_form(g).unwrap().encoding
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn relabeling_keeps_encoding(g in standard_graph(12), seed in any::<u64>()) {
        let ids: Vec<VertexId> = g.vertex_ids().collect();
        let mut targets: Vec<u32> = (100..100 + ids.len() as u32).collect();
        targets.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let map: BTreeMap<VertexId, VertexId> = ids.iter().zip(targets).map(|(&a, b)| (a, VertexId(b))).collect();
        prop_assert_eq!(encoding(&g), encoding(&g.relabel(&map).unwrap()));
    }

    #[test]
    fn reversion_keeps_encoding(g in tree(12), pick in any::<prop::sample::Index>()) {
        let segs = segments(&g);
        let s = pick.get(&segs);
        let h = Move::ReverseSegment { vertices: s.vertices.clone() }.apply(&g).unwrap();
        prop_assert_eq!(encoding(&g), encoding(&h));
    }

    #[test]
    fn redistribution(g in tree(12), seed in any::<u64>(), bump in 1i64..4) {
        let d = gamma0(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in d.components.iter().filter(|c| !c.branch_subset.is_empty()) {
            let ids: Vec<VertexId> = c.branch_subset.iter().copied().collect();
            let mut w: Vec<Weight> = ids.iter().map(|_| rand::Rng::gen_range(&mut rng, -6..=6)).collect();
            let fix = c.weight_sum - w.iter().sum::<Weight>();
            w[0] += fix;
            let same = g.with_weights(ids.iter().copied().zip(w.iter().copied())).unwrap();
            prop_assert_eq!(encoding(&g), encoding(&same));
            w[0] += bump;
            let moved = g.with_weights(ids.iter().copied().zip(w.iter().copied())).unwrap();
            match c.case {
                CaseTag::EndVertex => prop_assert_eq!(encoding(&g), encoding(&moved)),
                CaseTag::Interior => prop_assert_ne!(encoding(&g), encoding(&moved)),
            }
        }
    }

    #[test]
    fn normalization_replays_and_is_idempotent(g in tree(12)) {
        let (h, t) = normalize_branch_weights(&g).unwrap();
        prop_assert_eq!(&apply_trace(&g, &t).unwrap(), &h);
        let (again, t2) = normalize_branch_weights(&h).unwrap();
        prop_assert_eq!(&again, &h);
        prop_assert!(t2.is_empty());
        prop_assert_eq!(encoding(&g), encoding(&h));
        prop_assert_eq!(intersection_determinant(&g).abs(), intersection_determinant(&h).abs());
        let back = invert_trace(&g, &t).unwrap();
        prop_assert_eq!(apply_trace(&h, &back).unwrap(), g.clone());
        let sums = |x: &WeightedGraph| -> Vec<Weight> {
            gamma0(x).unwrap().components.iter().map(|c| c.weight_sum).collect()
        };
        let cases: Vec<CaseTag> = gamma0(&g).unwrap().components.iter().map(|c| c.case).collect();
        for ((a, b), case) in sums(&g).into_iter().zip(sums(&h)).zip(cases) {
            if case == CaseTag::Interior {
                prop_assert_eq!(a, b);
            } else {
                prop_assert_eq!(b, 0);
            }
        }
    }

    #[test]
    fn inverse_traces_round_trip(g in standard_graph(8), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cur = g.clone();
        let mut t = Trace::new();
        for _ in 0..12 {
            let mut moves: Vec<Move> = cur.vertex_ids().map(|v| Move::BlowUpAtVertex { v, fresh: None })
                .chain(cur.edges().map(|(u, v)| Move::BlowUpEdge { u, v, fresh: None }))
                .chain(cur.vertex_ids().map(|x| Move::BlowDown { x }))
                .collect();
            moves.shuffle(&mut rng);
            if let Some((m, next)) = moves.into_iter().find_map(|m| m.apply(&cur).ok().map(|n| (m, n))) {
                t.push(m);
                cur = next;
            }
        }
        prop_assert_eq!(apply_trace(&g, &t).unwrap(), cur.clone());
        let back = invert_trace(&g, &t).unwrap();
        prop_assert_eq!(apply_trace(&cur, &back).unwrap(), g);
    }
}

#[test]
fn oracle_never_joins_distinct_odd_zero_chains() {
    let b = SearchBounds { max_states: 100_000, ..SearchBounds::default() };
    let a = WeightedGraph::chain(&[0]).unwrap();
    let c = WeightedGraph::chain(&[0, 0, 0]).unwrap();
    assert_ne!(encoding(&a), encoding(&c));
    let v = oracle_equivalent(&a, &c, &b);
    assert!(matches!(v, Verdict::Inconclusive { .. }), "{v:?}");
}

#[test]
fn sample_tree_redistributions_agree_with_search() {
    let b = SearchBounds { max_states: 200_000, ..SearchBounds::default() };
    let g = sample_tree(&[2, -3]);
    for w in [[0, -1], [-1, 0], [3, -4], [-4, 3]] {
        let h = sample_tree(&w);
        assert_eq!(encoding(&g), encoding(&h));
        assert!(oracle_equivalent(&g, &h, &b).is_true(), "{w:?}");
    }
    let h = sample_tree(&[0, 0]);
    assert_ne!(encoding(&g), encoding(&h));
    assert!(!oracle_equivalent(&g, &h, &b).is_true());
}
