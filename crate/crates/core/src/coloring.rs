//! Half-edge colorings and their verification.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Ends, HalfEdge, HalfEdgeGraph, VertexId};
use crate::lcl::{Label, LabelMultiset, Lcl};

/// A partial map from half edges to labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coloring {
    assignments: BTreeMap<HalfEdge, Label>,
}

impl Coloring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: VertexId, e: EdgeId) -> Option<Label> {
        self.assignments.get(&(v, e)).copied()
    }

    pub fn set(&mut self, v: VertexId, e: EdgeId, label: Label) -> Option<Label> {
        self.assignments.insert((v, e), label)
    }

    pub fn remove(&mut self, v: VertexId, e: EdgeId) -> Option<Label> {
        self.assignments.remove(&(v, e))
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (HalfEdge, Label)> + '_ {
        self.assignments.iter().map(|(&k, &l)| (k, l))
    }

    /// Labels around `v` in incidence order, if all are assigned.
    pub fn star(&self, graph: &HalfEdgeGraph, v: VertexId) -> Option<Vec<Label>> {
        graph.incident(v).iter().map(|&e| self.get(v, e)).collect()
    }

    pub fn star_multiset(&self, graph: &HalfEdgeGraph, v: VertexId) -> Option<LabelMultiset> {
        self.star(graph, v).map(LabelMultiset::new)
    }

    /// Every key must be an incidence pair of `graph`.
    pub fn check_keys(&self, graph: &HalfEdgeGraph) -> Result<()> {
        for &(v, e) in self.assignments.keys() {
            if !graph.contains_vertex(v) {
                return Err(Error::UnknownVertex(v));
            }
            if !graph.is_incident(v, e) {
                return Err(Error::Semantic(format!(
                    "assignment on ({v}, edge #{}) is not a half edge of the graph",
                    e.0
                )));
            }
        }
        Ok(())
    }
}

impl FromIterator<(HalfEdge, Label)> for Coloring {
    fn from_iter<I: IntoIterator<Item = (HalfEdge, Label)>>(iter: I) -> Self {
        Coloring {
            assignments: iter.into_iter().collect(),
        }
    }
}

/// Outcome of a check: ok iff there are no violations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<V> {
    pub violations: Vec<V>,
}

impl<V> Verdict<V> {
    pub fn from_violations(violations: Vec<V>) -> Self {
        Verdict { violations }
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringViolation {
    Incomplete(Vec<HalfEdge>),
    Edge {
        edge: EdgeId,
        observed: LabelMultiset,
    },
    Vertex {
        vertex: VertexId,
        observed: LabelMultiset,
    },
}

/// Check that `coloring` is a Π-coloring of `graph`. All violations are
/// reported; virtual edges carry no edge constraint.
pub fn verify_coloring(
    graph: &HalfEdgeGraph,
    lcl: &Lcl,
    coloring: &Coloring,
) -> Verdict<ColoringViolation> {
    verify_with(graph, lcl, coloring, |star| lcl.vertex_allowed(star))
}

/// As [`verify_coloring`], with vertex stars additionally restricted to `allowed`.
pub fn verify_coloring_within(
    graph: &HalfEdgeGraph,
    lcl: &Lcl,
    coloring: &Coloring,
    allowed: &[LabelMultiset],
) -> Verdict<ColoringViolation> {
    verify_with(graph, lcl, coloring, |star| {
        lcl.vertex_allowed(star) && allowed.contains(star)
    })
}

fn verify_with(
    graph: &HalfEdgeGraph,
    lcl: &Lcl,
    coloring: &Coloring,
    vertex_ok: impl Fn(&LabelMultiset) -> bool,
) -> Verdict<ColoringViolation> {
    let mut violations = Vec::new();
    let missing: Vec<HalfEdge> = graph
        .half_edges()
        .filter(|&(v, e)| coloring.get(v, e).is_none())
        .collect();
    if !missing.is_empty() {
        violations.push(ColoringViolation::Incomplete(missing));
    }
    for (i, edge) in graph.edges().iter().enumerate() {
        let e = EdgeId(i as u32);
        if let Ends::True(a, b) = edge.ends {
            if let (Some(x), Some(y)) = (coloring.get(a, e), coloring.get(b, e)) {
                if !lcl.edge_allowed(x, y) {
                    violations.push(ColoringViolation::Edge {
                        edge: e,
                        observed: LabelMultiset::pair(x, y),
                    });
                }
            }
        }
    }
    for &v in graph.vertices() {
        if let Some(star) = coloring.star_multiset(graph, v) {
            if !vertex_ok(&star) {
                violations.push(ColoringViolation::Vertex {
                    vertex: v,
                    observed: star,
                });
            }
        }
    }
    Verdict::from_violations(violations)
}
