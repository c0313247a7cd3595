//! Δ-regular graphs in the half-edge formalism.
//!
//! Every vertex owns exactly Δ incident edges. An edge with two endpoints is
//! *true*; an edge with a single endpoint is *virtual* and only contributes a
//! half edge to its vertex. Adjacency, degree and distance use true edges only.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct VertexId(pub u64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position of an edge in its graph's canonical edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A half edge: an incidence pair (vertex, edge).
pub type HalfEdge = (VertexId, EdgeId);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ends {
    Virtual(VertexId),
    True(VertexId, VertexId),
}

impl Ends {
    pub fn is_true(&self) -> bool {
        matches!(self, Ends::True(..))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        match *self {
            Ends::Virtual(a) => a == v,
            Ends::True(a, b) => a == v || b == v,
        }
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        match *self {
            Ends::Virtual(a) => vec![a],
            Ends::True(a, b) => vec![a, b],
        }
    }

    /// The endpoint other than `v`, for a true edge.
    pub fn other(&self, v: VertexId) -> Option<VertexId> {
        match *self {
            Ends::True(a, b) if a == v => Some(b),
            Ends::True(a, b) if b == v => Some(a),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub ends: Ends,
}

/// Input record for [`HalfEdgeGraph::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub name: String,
    pub ends: Vec<VertexId>,
}

impl EdgeRecord {
    pub fn new(name: impl Into<String>, ends: &[u64]) -> Self {
        EdgeRecord {
            name: name.into(),
            ends: ends.iter().map(|&v| VertexId(v)).collect(),
        }
    }
}

/// Compare edge names so that embedded numbers sort numerically (`e2 < e10`).
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(cb.iter()) {
        let ord = match (x, y) {
            ((true, p), (true, q)) => {
                let (p, q) = (p.trim_start_matches('0'), q.trim_start_matches('0'));
                p.len().cmp(&q.len()).then_with(|| p.cmp(q))
            }
            ((_, p), (_, q)) => p.cmp(q),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfEdgeGraph {
    delta: usize,
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<EdgeId>>,
}

impl HalfEdgeGraph {
    /// Validate and build a graph. Edges are reordered into canonical
    /// (natural name) order; [`EdgeId`]s refer to that order.
    pub fn new(vertex_ids: &[u64], edge_records: Vec<EdgeRecord>, delta: usize) -> Result<Self> {
        let mut vertices: Vec<VertexId> = vertex_ids.iter().map(|&v| VertexId(v)).collect();
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        let mut records = edge_records;
        records.sort_by(|a, b| natural_cmp(&a.name, &b.name));
        if let Some(w) = records.windows(2).find(|w| w[0].name == w[1].name) {
            return Err(Error::DuplicateEdge(w[0].name.clone()));
        }
        let mut incidence = vec![Vec::with_capacity(delta); vertices.len()];
        let mut edges = Vec::with_capacity(records.len());
        let mut pairs = BTreeSet::new();
        for (i, rec) in records.into_iter().enumerate() {
            let ends = match rec.ends.as_slice() {
                [a] => Ends::Virtual(*a),
                [a, b] if a != b => {
                    let key = ((*a).min(*b), (*a).max(*b));
                    if !pairs.insert(key) {
                        return Err(Error::MultiEdge(key.0, key.1));
                    }
                    Ends::True(*a, *b)
                }
                other => {
                    return Err(Error::BadEndpointCount {
                        edge: rec.name,
                        count: other.len(),
                    })
                }
            };
            for &v in rec.ends.iter() {
                let idx = vertices.binary_search(&v).map_err(|_| Error::UnknownVertex(v))?;
                incidence[idx].push(EdgeId(i as u32));
            }
            edges.push(Edge { name: rec.name, ends });
        }
        for (idx, inc) in incidence.iter().enumerate() {
            if inc.len() != delta {
                return Err(Error::DegreeMismatch {
                    vertex: vertices[idx],
                    found: inc.len(),
                    expected: delta,
                });
            }
        }
        Ok(HalfEdgeGraph {
            delta,
            vertices,
            edges,
            incidence,
        })
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertex_index(v).is_some()
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges
            .binary_search_by(|e| natural_cmp(&e.name, name))
            .ok()
            .map(|i| EdgeId(i as u32))
    }

    /// The Δ edges at `v`, in ascending edge order.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        match self.vertex_index(v) {
            Some(i) => &self.incidence[i],
            None => &[],
        }
    }

    pub fn incident_at(&self, idx: usize) -> &[EdgeId] {
        &self.incidence[idx]
    }

    pub fn is_incident(&self, v: VertexId, e: EdgeId) -> bool {
        e.index() < self.edges.len() && self.edges[e.index()].ends.contains(v)
    }

    /// All half edges, ordered by vertex then edge.
    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdge> + '_ {
        self.vertices
            .iter()
            .zip(self.incidence.iter())
            .flat_map(|(&v, inc)| inc.iter().map(move |&e| (v, e)))
    }

    pub fn num_half_edges(&self) -> usize {
        self.vertices.len() * self.delta
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incident(v)
            .iter()
            .filter_map(move |&e| self.edges[e.index()].ends.other(v))
    }

    /// Number of true edges at `v`.
    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).count()
    }

    pub fn is_truly_regular(&self) -> bool {
        self.edges.iter().all(|e| e.ends.is_true())
    }

    pub fn max_vertex_id(&self) -> Option<VertexId> {
        self.vertices.last().copied()
    }

    /// Breadth-first distances from a set of sources, truncated at `radius`.
    pub fn distances_from(
        &self,
        sources: &[VertexId],
        radius: Option<usize>,
    ) -> Result<BTreeMap<VertexId, usize>> {
        let mut dist = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &s in sources {
            if !self.contains_vertex(s) {
                return Err(Error::UnknownVertex(s));
            }
            if dist.insert(s, 0).is_none() {
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            if radius.is_some_and(|r| d >= r) {
                continue;
            }
            for w in self.neighbors(v) {
                if !dist.contains_key(&w) {
                    dist.insert(w, d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// `B(S, r)`: every vertex within path distance `r` of `S`.
    pub fn neighborhood(&self, set: &[VertexId], r: usize) -> Result<BTreeSet<VertexId>> {
        Ok(self.distances_from(set, Some(r))?.into_keys().collect())
    }

    /// Connected components (via true edges), each sorted, ordered by least member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut comp = vec![usize::MAX; self.vertices.len()];
        let mut out: Vec<Vec<VertexId>> = Vec::new();
        for start in 0..self.vertices.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![self.vertices[start]];
            comp[start] = id;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let v = self.vertices[i];
                for w in self.neighbors(v) {
                    let j = self.vertex_index(w).expect("endpoint is a vertex");
                    if comp[j] == usize::MAX {
                        comp[j] = id;
                        members.push(w);
                        stack.push(j);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Component index of every vertex, aligned with [`Self::vertices`].
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![0; self.vertices.len()];
        for (c, members) in self.components().iter().enumerate() {
            for v in members {
                label[self.vertex_index(*v).unwrap()] = c;
            }
        }
        label
    }

    pub fn is_forest(&self) -> bool {
        let true_edges = self.edges.iter().filter(|e| e.ends.is_true()).count();
        true_edges + self.components().len() == self.vertices.len()
    }

    /// Subgraph on `keep`: edges with both endpoints kept stay true, edges with
    /// one kept endpoint become virtual at it, the rest are dropped. Edge names
    /// are preserved. Also returns, for each edge of the subgraph, its id here.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> (HalfEdgeGraph, Vec<EdgeId>) {
        let vertices: Vec<VertexId> = keep
            .iter()
            .copied()
            .filter(|v| self.contains_vertex(*v))
            .collect();
        let mut origin = Vec::new();
        let mut edges = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let ends = match e.ends {
                Ends::Virtual(a) if keep.contains(&a) => Ends::Virtual(a),
                Ends::True(a, b) => match (keep.contains(&a), keep.contains(&b)) {
                    (true, true) => Ends::True(a, b),
                    (true, false) => Ends::Virtual(a),
                    (false, true) => Ends::Virtual(b),
                    (false, false) => continue,
                },
                _ => continue,
            };
            origin.push(EdgeId(i as u32));
            edges.push(Edge {
                name: e.name.clone(),
                ends,
            });
        }
        let index: BTreeMap<u32, u32> = origin
            .iter()
            .enumerate()
            .map(|(new, old)| (old.0, new as u32))
            .collect();
        let incidence = vertices
            .iter()
            .map(|&v| {
                self.incident(v)
                    .iter()
                    .map(|e| EdgeId(index[&e.0]))
                    .collect()
            })
            .collect();
        (
            HalfEdgeGraph {
                delta: self.delta,
                vertices,
                edges,
                incidence,
            },
            origin,
        )
    }

    /// Edge records in canonical order, suitable for [`HalfEdgeGraph::new`].
    pub fn edge_records(&self) -> Vec<EdgeRecord> {
        self.edges
            .iter()
            .map(|e| EdgeRecord {
                name: e.name.clone(),
                ends: match e.ends {
                    Ends::Virtual(a) => vec![a],
                    Ends::True(a, b) => vec![a, b],
                },
            })
            .collect()
    }
}

/// Assembles graphs whose edges are named `e0, e1, ...` in creation order.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<u64>,
    edges: Vec<EdgeRecord>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, v: u64) -> &mut Self {
        self.vertices.push(v);
        self
    }

    pub fn true_edge(&mut self, a: u64, b: u64) -> &mut Self {
        let name = format!("e{}", self.edges.len());
        self.edges.push(EdgeRecord::new(name, &[a, b]));
        self
    }

    pub fn virtual_edge(&mut self, a: u64) -> &mut Self {
        let name = format!("e{}", self.edges.len());
        self.edges.push(EdgeRecord::new(name, &[a]));
        self
    }

    /// Add virtual edges until every vertex has `delta` incidences.
    pub fn pad(&mut self, delta: usize) -> &mut Self {
        let mut count: BTreeMap<u64, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for e in &self.edges {
            for v in &e.ends {
                *count.entry(v.0).or_default() += 1;
            }
        }
        for v in self.vertices.clone() {
            for _ in count[&v]..delta {
                self.virtual_edge(v);
            }
        }
        self
    }

    pub fn build(&self, delta: usize) -> Result<HalfEdgeGraph> {
        HalfEdgeGraph::new(&self.vertices, self.edges.clone(), delta)
    }
}

/// The Δ-regular path of length `len`: vertices `0..=len`, consecutive ones
/// adjacent, every other incidence virtual.
pub fn build_path(delta: usize, len: usize) -> HalfEdgeGraph {
    let mut b = GraphBuilder::new();
    for v in 0..=len as u64 {
        b.vertex(v);
    }
    for v in 0..len as u64 {
        b.true_edge(v, v + 1);
    }
    b.pad(delta).build(delta).expect("paths are valid graphs")
}

/// The star with center `0` adjacent to leaves `1..=k`; all other incidences
/// virtual.
pub fn build_star(delta: usize, k: usize) -> Result<HalfEdgeGraph> {
    if k > delta {
        return Err(Error::KOutOfRange { k, delta });
    }
    let mut b = GraphBuilder::new();
    for v in 0..=k as u64 {
        b.vertex(v);
    }
    for i in 1..=k as u64 {
        b.true_edge(0, i);
    }
    b.pad(delta).build(delta)
}
