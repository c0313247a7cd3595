mod common;

use std::collections::BTreeSet;

use itertools::Itertools;
use lcltrees::classify::{
    decide_fullness, decide_greediness, fullness_threshold, is_l_full, DecideOptions,
    FullnessCertificate, GreedyCertificate,
};
use lcltrees::homproblems::{build_h_delta, hom_solve_h_delta, maximal_discrete_set, SimpleGraph};
use lcltrees::io::{parse_coloring, parse_graph, parse_lcl, serialize_coloring, serialize_graph, serialize_lcl};
use lcltrees::random::{random_bounded_graph, random_forest, random_forest_edges, random_tree, rng, shuffled};
use lcltrees::solve::{greedy_color, toast_color};
use lcltrees::toast::{build_toast, verify_toast};
use lcltrees::treesolve::{complete, is_extendable, CompletionQuery};
use lcltrees::{verify_coloring, verify_coloring_within, Coloring, HalfEdgeGraph, Label, Lcl, VertexId};
use proptest::prelude::*;

use common::*;

fn corpus_entry() -> impl Strategy<Value = Lcl> {
    let corpus = corpus();
    (0..corpus.len()).prop_map(move |i| corpus[i].1.clone())
}

/// Every labeling of the half edges that agrees with `partial` and is a
/// Π-coloring.
fn brute_extendable(g: &HalfEdgeGraph, lcl: &Lcl, partial: &Coloring) -> bool {
    let halves: Vec<_> = g.half_edges().collect();
    let free: Vec<_> = halves.iter().filter(|&&(v, e)| partial.get(v, e).is_none()).collect();
    if free.is_empty() {
        return verify_coloring(g, lcl, partial).ok();
    }
    free.iter()
        .map(|_| lcl.labels())
        .multi_cartesian_product()
        .any(|labels| {
            let mut c = partial.clone();
            for (&&(v, e), l) in free.iter().zip(labels) {
                c.set(v, e, l);
            }
            verify_coloring(g, lcl, &c).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lcl_documents_round_trip(lcl in corpus_entry()) {
        let text = serialize_lcl(&lcl);
        let back = parse_lcl(&text).unwrap();
        prop_assert_eq!(&back, &lcl);
        prop_assert_eq!(serialize_lcl(&back), text);
    }

    #[test]
    fn graph_and_coloring_documents_round_trip(seed in 0u64..10_000, n in 1usize..40) {
        let g = random_bounded_graph(seed, n, 3);
        let text = serialize_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(serialize_graph(&back), text);
        let lcl = k(4, 3);
        let cert = decide_greediness(&lcl, DecideOptions::default()).unwrap().unwrap();
        let c = greedy_color(&g, &lcl, &cert, None).unwrap();
        let ct = serialize_coloring(&g, &lcl, &c);
        prop_assert_eq!(parse_coloring(&ct, &back, &lcl).unwrap(), c);
    }

    #[test]
    fn tree_completion_matches_brute_force(
        lcl in corpus_entry(),
        seed in 0u64..10_000,
        pre in proptest::collection::vec((any::<bool>(), 0u16..8), 12),
    ) {
        let n = if lcl.delta() == 2 { 4 } else { 3 };
        prop_assume!(lcl.num_labels() <= 3);
        let g = random_forest(seed, n, lcl.delta());
        let mut partial = Coloring::new();
        for ((v, e), &(set, l)) in g.half_edges().zip(&pre) {
            if set {
                partial.set(v, e, Label(l % lcl.num_labels() as u16));
            }
        }
        let q = CompletionQuery::new(&g, &lcl, &partial);
        let fast = is_extendable(&q).unwrap();
        prop_assert_eq!(fast, brute_extendable(&g, &lcl, &partial));
        if let Some(c) = complete(&q).unwrap() {
            prop_assert!(verify_coloring(&g, &lcl, &c).ok());
            for ((v, e), l) in partial.iter() {
                prop_assert_eq!(c.get(v, e), Some(l));
            }
        } else {
            prop_assert!(!fast);
        }
    }

    #[test]
    fn fullness_is_monotone_in_l(lcl in corpus_entry(), l in 1usize..12) {
        for vp in subsets(&lcl) {
            if is_l_full(&lcl, &vp, l) {
                prop_assert!(is_l_full(&lcl, &vp, l + 1));
            }
            if let Some(t) = fullness_threshold(&lcl, &vp).unwrap() {
                prop_assert_eq!(is_l_full(&lcl, &vp, l), l >= t);
            }
        }
    }

    #[test]
    fn path_sweep_agrees_with_enumeration(lcl in corpus_entry(), len in 1usize..5) {
        let vp = lcl.vertex_constraints().to_vec();
        prop_assume!(!vp.is_empty());
        for (_, alpha, _, beta) in quadruples(&vp) {
            prop_assert_eq!(
                path_extends(&lcl, &vp, alpha, beta, len),
                path_extends_exhaustive(&lcl, &vp, alpha, beta, len)
            );
        }
    }

    #[test]
    fn certificates_validate_and_round_trip(lcl in corpus_entry()) {
        if let Some(c) = decide_fullness(&lcl, DecideOptions::default()).unwrap() {
            c.validate(&lcl).unwrap();
            prop_assert_eq!(FullnessCertificate::from_json(&c.to_json(&lcl), &lcl).unwrap(), c);
        }
        if let Some(c) = decide_greediness(&lcl, DecideOptions::default()).unwrap() {
            c.validate(&lcl).unwrap();
            prop_assert_eq!(GreedyCertificate::from_json(&c.to_json(&lcl), &lcl).unwrap(), c);
        }
    }

    #[test]
    fn toasts_are_valid_for_any_stream(seed in 0u64..10_000, n in 1usize..120, l in 1usize..5) {
        let g = random_forest(seed, n, 3);
        let stream = shuffled(&mut rng(seed), g.vertices());
        let t = build_toast(&g, l, Some(&stream)).unwrap();
        let v = verify_toast(&g, l, &t.pieces);
        prop_assert!(v.ok(), "{:?}", v.violations);
    }

    #[test]
    fn greedy_colors_any_order(seed in 0u64..10_000, n in 1usize..80, delta in 2usize..4) {
        let lcl = k(delta + 1, delta);
        let cert = decide_greediness(&lcl, DecideOptions::default()).unwrap().unwrap();
        let g = random_bounded_graph(seed, n, delta);
        let order = shuffled(&mut rng(seed ^ 1), g.vertices());
        let c = greedy_color(&g, &lcl, &cert, Some(&order)).unwrap();
        prop_assert!(verify_coloring(&g, &lcl, &c).ok());
    }

    #[test]
    fn toast_solver_any_stream(seed in 0u64..10_000, n in 1usize..80, which in 0usize..3) {
        let lcl = [k(3, 2), k(3, 3), h2()][which].clone();
        let cert = decide_fullness(&lcl, DecideOptions::default()).unwrap().unwrap();
        let g = random_tree(seed, n, lcl.delta());
        let stream = shuffled(&mut rng(seed ^ 2), g.vertices());
        let c = toast_color(&g, &lcl, &cert, Some(&stream)).unwrap();
        prop_assert!(verify_coloring_within(&g, &lcl, &c, &cert.v_prime).ok());
    }

    #[test]
    fn discrete_sets_are_discrete_and_maximal(seed in 0u64..10_000, n in 1usize..60, r in 0usize..5) {
        let edges = random_forest_edges(&mut rng(seed), n, 3, 0.1);
        let pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
        let g = simple(n, &pairs);
        let order = shuffled(&mut rng(seed ^ 3), &(0..n).collect::<Vec<_>>());
        let set = maximal_discrete_set(&g, r, Some(&order));
        let dist = |s: usize| -> Vec<usize> {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = std::collections::VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for y in g.neighbors(x) {
                    if d[y] == usize::MAX {
                        d[y] = d[x] + 1;
                        q.push_back(y);
                    }
                }
            }
            d
        };
        let mut covered = BTreeSet::new();
        for &a in &set {
            let d = dist(a);
            for &b in &set {
                prop_assert!(a == b || d[b] > r);
            }
            covered.extend((0..n).filter(|&v| d[v] <= r));
        }
        prop_assert_eq!(covered.len(), n);
    }

    #[test]
    fn homomorphisms_into_h_delta(seed in 0u64..10_000, n in 0usize..120, delta in 2usize..6) {
        let edges = random_forest_edges(&mut rng(seed), n, delta, 0.1);
        let pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
        let f = simple(n, &pairs);
        let h = build_h_delta(delta).unwrap();
        let m = hom_solve_h_delta(&f, delta).unwrap();
        prop_assert!(m.is_homomorphism(&f, &h));
        prop_assert_eq!(SimpleGraph::from_json(&f.to_json()).unwrap(), f);
    }
}

#[test]
fn gaps_between_anchors_on_paths_are_long() {
    for n in 1..40 {
        let p = simple(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>());
        let anchors: Vec<usize> = maximal_discrete_set(&p, 4, None).into_iter().collect();
        for w in anchors.windows(2) {
            let gap = w[1] - w[0] - 1;
            assert!((4..=7).contains(&gap), "gap {gap} on path of {n}");
        }
        let m = hom_solve_h_delta(&p, 2).unwrap();
        assert!(anchors.iter().all(|&a| m.image[a] == 0));
    }
}

#[test]
fn unknown_stream_vertex_is_rejected() {
    let g = random_tree(1, 5, 2);
    assert!(build_toast(&g, 1, Some(&[VertexId(99)])).is_err());
}
