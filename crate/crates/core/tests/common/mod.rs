#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use lcltrees::homproblems::{build_h_delta, lcl_from_graph, SimpleGraph};
use lcltrees::random::rng;
use lcltrees::{Label, LabelMultiset, Lcl};
use rand::Rng;

pub fn complete_graph(n: usize) -> SimpleGraph {
    simple(n, &(0..n).tuple_combinations().collect::<Vec<_>>())
}

pub fn simple(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
    let mut g = SimpleGraph::with_vertices(n);
    for &(a, b) in edges {
        g.add_edge(a, b).unwrap();
    }
    g
}

/// Proper coloring with labels named `1..=n`.
pub fn k(n: usize, delta: usize) -> Lcl {
    let h = complete_graph(n);
    let renamed = SimpleGraph::new((1..=n).map(|i| i.to_string())).unwrap();
    let mut g = renamed;
    for (a, b) in h.edges() {
        g.add_edge(a, b).unwrap();
    }
    lcl_from_graph(&g, delta).unwrap()
}

pub fn h2() -> Lcl {
    lcl_from_graph(&build_h_delta(2).unwrap(), 2).unwrap()
}

/// One matched half edge per vertex, matched edges agree.
pub fn perfect_matching(delta: usize) -> Lcl {
    let mut star = vec!["M"];
    star.extend(std::iter::repeat("U").take(delta - 1));
    Lcl::from_names(delta, &["M", "U"], &[&star], &[["M", "M"], ["U", "U"]]).unwrap()
}

/// Out-degree at least one; an edge carries one head and one tail.
pub fn sinkless_orientation() -> Lcl {
    Lcl::from_names(
        3,
        &["O", "I"],
        &[&["O", "I", "I"], &["O", "O", "I"], &["O", "O", "O"]],
        &[["O", "I"]],
    )
    .unwrap()
}

fn random_lcl(seed: u64) -> Lcl {
    let mut r = rng(seed);
    let n = r.gen_range(2..=3usize);
    let delta = r.gen_range(2..=3usize);
    let labels: Vec<Label> = (0..n as u16).map(Label).collect();
    let stars: Vec<LabelMultiset> = labels
        .iter()
        .copied()
        .combinations_with_replacement(delta)
        .map(LabelMultiset::new)
        .collect();
    let pairs: Vec<LabelMultiset> = labels
        .iter()
        .copied()
        .combinations_with_replacement(2)
        .map(LabelMultiset::new)
        .collect();
    let mut vs: Vec<LabelMultiset> = stars.into_iter().filter(|_| r.gen_bool(0.45)).collect();
    if vs.is_empty() {
        vs.push(LabelMultiset::constant(Label(0), delta));
    }
    let es: Vec<LabelMultiset> = pairs.into_iter().filter(|_| r.gen_bool(0.5)).collect();
    let sigma = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Lcl::new(delta, sigma, vs, es).unwrap()
}

/// Fixed corpus: the named problems plus seeded random ones with at most
/// three labels and Δ ∈ {2, 3}.
pub fn corpus() -> Vec<(String, Lcl)> {
    let mut out = vec![
        ("K2 d2".to_string(), k(2, 2)),
        ("K3 d2".to_string(), k(3, 2)),
        ("H2 d2".to_string(), h2()),
        ("matching d2".to_string(), perfect_matching(2)),
        ("K2 d3".to_string(), k(2, 3)),
        ("K3 d3".to_string(), k(3, 3)),
        ("matching d3".to_string(), perfect_matching(3)),
        ("sinkless d3".to_string(), sinkless_orientation()),
    ];
    for seed in 0..20 {
        out.push((format!("random #{seed}"), random_lcl(1000 + seed)));
    }
    out
}

/// Every endpoint quadruple `(a, α, b, β)` drawn from `vp`.
pub fn quadruples(vp: &[LabelMultiset]) -> Vec<(LabelMultiset, Label, LabelMultiset, Label)> {
    let mut out = Vec::new();
    for a in vp {
        for alpha in a.distinct() {
            for b in vp {
                for beta in b.distinct() {
                    out.push((a.clone(), alpha, b.clone(), beta));
                }
            }
        }
    }
    out
}

/// Ways an inner path vertex with star `v` can put labels on its two path
/// half edges, as (toward previous, toward next).
fn inner_choices(v: &LabelMultiset) -> Vec<(Label, Label)> {
    let ls = v.labels();
    let mut out = BTreeSet::new();
    for i in 0..ls.len() {
        for j in 0..ls.len() {
            if i != j {
                out.insert((ls[i], ls[j]));
            }
        }
    }
    out.into_iter().collect()
}

/// Whether the path of length `len` with endpoint stars `a`, `b` (α and β on
/// the path) extends inside `vp`, by sweeping the set of labels that can sit
/// on each successive path half edge.
pub fn path_extends(
    lcl: &Lcl,
    vp: &[LabelMultiset],
    alpha: Label,
    beta: Label,
    len: usize,
) -> bool {
    assert!(len >= 1);
    let choices: Vec<(Label, Label)> = vp.iter().flat_map(inner_choices).collect();
    let mut frontier: BTreeSet<Label> = BTreeSet::from([alpha]);
    for _ in 1..len {
        frontier = choices
            .iter()
            .filter(|(l, _)| frontier.iter().any(|&s| lcl.edge_allowed(s, *l)))
            .map(|&(_, r)| r)
            .collect();
    }
    frontier.iter().any(|&s| lcl.edge_allowed(s, beta))
}

/// Same question by listing every assignment of inner stars; only for short
/// paths.
pub fn path_extends_exhaustive(
    lcl: &Lcl,
    vp: &[LabelMultiset],
    alpha: Label,
    beta: Label,
    len: usize,
) -> bool {
    let choices: Vec<(Label, Label)> = vp.iter().flat_map(inner_choices).collect();
    if len == 1 {
        return lcl.edge_allowed(alpha, beta);
    }
    (0..len - 1)
        .map(|_| choices.iter())
        .multi_cartesian_product()
        .any(|inner| {
            let mut prev = alpha;
            for &&(l, r) in &inner {
                if !lcl.edge_allowed(prev, l) {
                    return false;
                }
                prev = r;
            }
            lcl.edge_allowed(prev, beta)
        })
}

/// Nonempty subsets of the vertex constraints.
pub fn subsets(lcl: &Lcl) -> Vec<Vec<LabelMultiset>> {
    let vs = lcl.vertex_constraints();
    (1..=vs.len())
        .flat_map(|s| vs.iter().cloned().combinations(s))
        .collect()
}

/// All labeled simple graphs on `n` vertices.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = SimpleGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        simple(n, &edges)
    })
}

/// One representative per isomorphism class, by least adjacency bitmask
/// over all relabelings.
pub fn graphs_up_to_iso(n: usize) -> Vec<SimpleGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let moved: Vec<Vec<u64>> = (0..n)
        .permutations(n)
        .map(|p| pairs.iter().map(|&(a, b)| 1u64 << index(p[a], p[b])).collect())
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let canon = moved
            .iter()
            .map(|m| {
                (0..pairs.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .fold(0u64, |acc, i| acc | m[i])
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| canon >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            out.push(simple(n, &edges));
        }
    }
    out
}
