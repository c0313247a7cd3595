//! Online toast construction and validation.
//!
//! A toast with parameter `l` is a family of finite connected pieces where any
//! two pieces are either more than `l` apart or one contains the other with
//! an `l`-buffer, and any two vertices of a component share some piece.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coloring::Verdict;
use crate::error::{Error, Result};
use crate::graph::{HalfEdgeGraph, VertexId};
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub id: usize,
    /// Position in the stream of the vertex whose stage created the piece.
    pub stage: usize,
    pub vertices: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Toast {
    pub l: usize,
    pub pieces: Vec<Piece>,
}

impl Toast {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap()
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        serde_json::from_value(value.clone()).map_err(|e| Error::Semantic(e.to_string()))
    }
}

/// Dense adjacency over vertex indices, true edges only.
pub(crate) struct Adjacency(Vec<Vec<usize>>);

impl Adjacency {
    pub(crate) fn new(g: &HalfEdgeGraph) -> Self {
        Adjacency(
            g.vertices()
                .iter()
                .map(|&v| {
                    g.neighbors(v)
                        .map(|w| g.vertex_index(w).unwrap())
                        .collect()
                })
                .collect(),
        )
    }

    fn len(&self) -> usize {
        self.0.len()
    }

    /// All vertices within distance `r` of `set`.
    pub(crate) fn ball(&self, set: &FixedBitSet, r: usize) -> FixedBitSet {
        let mut out = set.clone();
        let mut frontier: Vec<usize> = set.ones().collect();
        for _ in 0..r {
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in &self.0[x] {
                    if !out.contains(y) {
                        out.insert(y);
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out
    }

    fn is_connected(&self, set: &FixedBitSet) -> bool {
        let Some(start) = set.ones().next() else {
            return true;
        };
        let mut seen = FixedBitSet::with_capacity(self.len());
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &self.0[x] {
                if set.contains(y) && !seen.contains(y) {
                    seen.insert(y);
                    stack.push(y);
                }
            }
        }
        seen.count_ones(..) == set.count_ones(..)
    }
}

fn singleton(n: usize, i: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert(i);
    s
}

/// Condition (1) for two pieces given their `l`-balls.
fn separated(c: &FixedBitSet, bc: &FixedBitSet, d: &FixedBitSet, bd: &FixedBitSet) -> bool {
    bc.is_subset(d) || bd.is_subset(c) || bc.is_disjoint(d)
}

/// Build a toast by the least-radius rule: at each stage `n` (in stream
/// order), unless some piece already contains `B(n,1)`, add `B(n,r)` for the
/// least `r > 0` keeping every pair of pieces separated.
///
/// `stream` defaults to ascending vertex id; a prefix of the stream is allowed.
pub fn build_toast(graph: &HalfEdgeGraph, l: usize, stream: Option<&[VertexId]>) -> Result<Toast> {
    let default: Vec<VertexId>;
    let stream = match stream {
        Some(s) => s,
        None => {
            default = graph.vertices().to_vec();
            &default
        }
    };
    let adj = Adjacency::new(graph);
    let n = adj.len();
    let mut seen = FixedBitSet::with_capacity(n);
    let mut pieces: Vec<(FixedBitSet, FixedBitSet)> = Vec::new();
    let mut out = Vec::new();
    for (stage, &v) in stream.iter().enumerate() {
        let i = graph.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
        if seen.contains(i) {
            return Err(Error::BadParameter(format!("{v} appears twice in the stream")));
        }
        seen.insert(i);
        let b1 = adj.ball(&singleton(n, i), 1);
        if pieces.iter().any(|(c, _)| b1.is_subset(c)) {
            continue;
        }
        let mut cand = b1;
        loop {
            let bc = adj.ball(&cand, l);
            if pieces.iter().all(|(d, bd)| separated(&cand, &bc, d, bd)) {
                out.push(Piece {
                    id: out.len(),
                    stage,
                    vertices: cand.ones().map(|k| graph.vertices()[k]).collect(),
                });
                pieces.push((cand, bc));
                break;
            }
            let grown = adj.ball(&cand, 1);
            // a saturated ball is the whole component, which always separates
            assert!(grown != cand, "saturated candidate must be accepted");
            cand = grown;
        }
    }
    Ok(Toast { l, pieces: out })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToastViolation {
    EmptyPiece(usize),
    UnknownVertex { piece: usize, vertex: VertexId },
    Disconnected(usize),
    NotSeparated { c: usize, d: usize },
    NoCommonPiece { x: VertexId, y: VertexId },
}

/// Check nonemptiness, connectivity, condition (1) on all pairs and
/// condition (2) on all same-component vertex pairs.
pub fn verify_toast(graph: &HalfEdgeGraph, l: usize, pieces: &[Piece]) -> Verdict<ToastViolation> {
    verify_toast_with(graph, l, pieces, Exec::default())
}

pub fn verify_toast_with(
    graph: &HalfEdgeGraph,
    l: usize,
    pieces: &[Piece],
    exec: Exec,
) -> Verdict<ToastViolation> {
    let adj = Adjacency::new(graph);
    let n = adj.len();
    let mut violations = Vec::new();
    let mut sets = Vec::with_capacity(pieces.len());
    for p in pieces {
        let mut s = FixedBitSet::with_capacity(n);
        for &v in &p.vertices {
            match graph.vertex_index(v) {
                Some(i) => s.insert(i),
                None => violations.push(ToastViolation::UnknownVertex {
                    piece: p.id,
                    vertex: v,
                }),
            }
        }
        if p.vertices.is_empty() {
            violations.push(ToastViolation::EmptyPiece(p.id));
        } else if !adj.is_connected(&s) {
            violations.push(ToastViolation::Disconnected(p.id));
        }
        sets.push(s);
    }
    let balls: Vec<FixedBitSet> = par::map(exec, &sets, |s| adj.ball(s, l));
    let pairs: Vec<(usize, usize)> = (0..sets.len())
        .flat_map(|i| (i + 1..sets.len()).map(move |j| (i, j)))
        .collect();
    let bad_pairs = par::map(exec, &pairs, |&(i, j)| {
        (!separated(&sets[i], &balls[i], &sets[j], &balls[j])).then_some((i, j))
    });
    violations.extend(bad_pairs.into_iter().flatten().map(|(i, j)| {
        ToastViolation::NotSeparated {
            c: pieces[i].id,
            d: pieces[j].id,
        }
    }));
    let comp = graph.component_labels();
    let uncovered = par::map_range(exec, n, |x| {
        let mut union = FixedBitSet::with_capacity(n);
        for s in sets.iter().filter(|s| s.contains(x)) {
            union.union_with(s);
        }
        (0..n)
            .find(|&y| y != x && comp[y] == comp[x] && !union.contains(y))
            .map(|y| (x, y))
    });
    let mut reported = std::collections::BTreeSet::new();
    for (x, y) in uncovered.into_iter().flatten() {
        let key = (x.min(y), x.max(y));
        if reported.insert(key) {
            violations.push(ToastViolation::NoCommonPiece {
                x: graph.vertices()[key.0],
                y: graph.vertices()[key.1],
            });
        }
    }
    Verdict::from_violations(violations)
}
