//! Seeded generators for random test instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{GraphBuilder, HalfEdgeGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Edges of a uniformly grown random tree on `0..n` with maximum degree
/// `max_degree`. Each new vertex attaches to a random earlier vertex with
/// spare degree.
pub fn random_tree_edges<R: Rng>(rng: &mut R, n: usize, max_degree: usize) -> Vec<(u64, u64)> {
    assert!(max_degree >= 1 || n <= 1);
    let mut deg = vec![0usize; n];
    let mut open: Vec<usize> = Vec::new();
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 0..n {
        if v > 0 {
            let k = rng.gen_range(0..open.len());
            let p = open[k];
            edges.push((p as u64, v as u64));
            deg[p] += 1;
            deg[v] += 1;
            if deg[p] == max_degree {
                open.swap_remove(k);
            }
        }
        if deg[v] < max_degree {
            open.push(v);
        }
    }
    edges
}

/// A random forest with `n` vertices: a random tree with each edge dropped
/// with probability `drop`.
pub fn random_forest_edges<R: Rng>(
    rng: &mut R,
    n: usize,
    max_degree: usize,
    drop: f64,
) -> Vec<(u64, u64)> {
    random_tree_edges(rng, n, max_degree)
        .into_iter()
        .filter(|_| !rng.gen_bool(drop))
        .collect()
}

/// Random simple graph with maximum degree `max_degree`, built from
/// `attempts` random vertex pairs; usually contains cycles.
pub fn random_bounded_graph_edges<R: Rng>(
    rng: &mut R,
    n: usize,
    max_degree: usize,
    attempts: usize,
) -> Vec<(u64, u64)> {
    let mut deg = vec![0usize; n];
    let mut edges: Vec<(u64, u64)> = Vec::new();
    if n < 2 {
        return edges;
    }
    for _ in 0..attempts {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let key = (a.min(b) as u64, a.max(b) as u64);
        if a == b || deg[a] >= max_degree || deg[b] >= max_degree || edges.contains(&key) {
            continue;
        }
        deg[a] += 1;
        deg[b] += 1;
        edges.push(key);
    }
    edges
}

/// Pad a simple graph on `0..n` with virtual edges to a Δ-regular half-edge
/// graph. Panics if some degree exceeds `delta`.
pub fn pad_to_half_edge(n: usize, edges: &[(u64, u64)], delta: usize) -> HalfEdgeGraph {
    let mut b = GraphBuilder::new();
    for v in 0..n as u64 {
        b.vertex(v);
    }
    for &(x, y) in edges {
        b.true_edge(x, y);
    }
    b.pad(delta).build(delta).expect("degrees are bounded by delta")
}

pub fn random_tree(seed: u64, n: usize, delta: usize) -> HalfEdgeGraph {
    let mut r = rng(seed);
    pad_to_half_edge(n, &random_tree_edges(&mut r, n, delta), delta)
}

pub fn random_forest(seed: u64, n: usize, delta: usize) -> HalfEdgeGraph {
    let mut r = rng(seed);
    pad_to_half_edge(n, &random_forest_edges(&mut r, n, delta, 0.05), delta)
}

pub fn random_bounded_graph(seed: u64, n: usize, delta: usize) -> HalfEdgeGraph {
    let mut r = rng(seed);
    let edges = random_bounded_graph_edges(&mut r, n, delta, n * delta);
    pad_to_half_edge(n, &edges, delta)
}

/// A random permutation of `items`.
pub fn shuffled<T: Clone, R: Rng>(rng: &mut R, items: &[T]) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trees_respect_degree_and_are_forests() {
        for seed in 0..20 {
            let g = random_tree(seed, 60, 3);
            assert!(g.is_forest());
            assert_eq!(g.components().len(), 1);
            assert!(g.vertices().iter().all(|&v| g.degree(v) <= 3));
        }
    }

    #[test]
    fn bounded_graphs_have_cycles_sometimes() {
        let cyclic = (0..20).filter(|&s| !random_bounded_graph(s, 12, 3).is_forest()).count();
        assert!(cyclic > 0);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_forest(7, 40, 3), random_forest(7, 40, 3));
    }
}
