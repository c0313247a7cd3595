//! Homomorphism problems, clique detection, the `H_Δ` family and a
//! homomorphism algorithm from bounded-degree forests into `H_Δ`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::{EdgeRecord, HalfEdgeGraph, VertexId};
use crate::lcl::{LabelMultiset, Lcl};

/// A finite simple graph with named vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    names: Vec<String>,
    adj: Vec<BTreeSet<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimpleGraphDoc {
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
}

impl SimpleGraph {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let unique: BTreeSet<&String> = names.iter().collect();
        if unique.len() != names.len() {
            return Err(Error::Semantic("duplicate vertex name".into()));
        }
        let adj = vec![BTreeSet::new(); names.len()];
        Ok(SimpleGraph { names, adj })
    }

    /// Vertices named `0..n`.
    pub fn with_vertices(n: usize) -> Self {
        SimpleGraph::new((0..n).map(|i| i.to_string())).unwrap()
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(Error::Semantic(format!("loop at {}", self.names[a])));
        }
        if a >= self.len() || b >= self.len() {
            return Err(Error::Semantic("edge endpoint out of range".into()));
        }
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.adj[a].range(a + 1..).map(move |&b| (a, b)))
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_forest(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut components = 0;
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        self.num_edges() + components == self.len()
    }

    /// Subgraph induced on `keep`, with the original index of each new vertex.
    pub fn induced(&self, keep: &BTreeSet<usize>) -> (SimpleGraph, Vec<usize>) {
        let origin: Vec<usize> = keep.iter().copied().collect();
        let mut g = SimpleGraph::new(origin.iter().map(|&v| self.names[v].clone())).unwrap();
        for (i, &v) in origin.iter().enumerate() {
            for (j, &w) in origin.iter().enumerate().skip(i + 1) {
                if self.adjacent(v, w) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        (g, origin)
    }

    pub fn to_json(&self) -> Value {
        let doc = SimpleGraphDoc {
            vertices: self.names.clone(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b)| [self.names[a].clone(), self.names[b].clone()])
                .collect(),
        };
        serde_json::to_value(doc).unwrap()
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let doc: SimpleGraphDoc =
            serde_json::from_value(value.clone()).map_err(|e| Error::Semantic(e.to_string()))?;
        let mut g = SimpleGraph::new(doc.vertices)?;
        for [a, b] in &doc.edges {
            let lookup = |n: &str| {
                g.index_of(n)
                    .ok_or_else(|| Error::Semantic(format!("unknown vertex {n:?}")))
            };
            let (a, b) = (lookup(a)?, lookup(b)?);
            g.add_edge(a, b)?;
        }
        Ok(g)
    }
}

/// The homomorphism problem: each vertex picks one vertex of `h` for its
/// whole star, and the two ends of an edge pick adjacent vertices.
pub fn lcl_from_graph(h: &SimpleGraph, delta: usize) -> Result<Lcl> {
    if h.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let vs = (0..h.len())
        .map(|v| LabelMultiset::constant(crate::lcl::Label(v as u16), delta))
        .collect();
    let es = h
        .edges()
        .into_iter()
        .map(|(a, b)| LabelMultiset::pair(crate::lcl::Label(a as u16), crate::lcl::Label(b as u16)))
        .collect();
    Lcl::new(delta, h.names.clone(), vs, es)
}

pub fn has_clique(h: &SimpleGraph, size: usize) -> bool {
    (0..h.len())
        .combinations(size)
        .any(|c| c.iter().tuple_combinations().all(|(&a, &b)| h.adjacent(a, b)))
}

/// `H_2` is the 5-cycle `v0..v4`; `H_{d+1}` adds an apex `w{d+1}` adjacent to
/// every vertex of `H_d`.
pub fn build_h_delta(delta: usize) -> Result<SimpleGraph> {
    if delta < 2 {
        return Err(Error::DeltaTooSmall { min: 2, got: delta });
    }
    let names = (0..5)
        .map(|i| format!("v{i}"))
        .chain((3..=delta).map(|d| format!("w{d}")));
    let mut h = SimpleGraph::new(names)?;
    for i in 0..5 {
        h.add_edge(i, (i + 1) % 5)?;
    }
    for apex in 5..h.len() {
        for v in 0..apex {
            h.add_edge(apex, v)?;
        }
    }
    Ok(h)
}

/// Greedy scan in `order` (default ascending): keep a vertex iff it is more
/// than `r` away from every vertex kept so far.
pub fn maximal_discrete_set(g: &SimpleGraph, r: usize, order: Option<&[usize]>) -> BTreeSet<usize> {
    let default: Vec<usize> = (0..g.len()).collect();
    let order = order.unwrap_or(&default);
    let mut blocked = vec![false; g.len()];
    let mut chosen = BTreeSet::new();
    for &v in order {
        if blocked[v] {
            continue;
        }
        chosen.insert(v);
        let mut dist = BTreeMap::from([(v, 0usize)]);
        let mut queue = VecDeque::from([v]);
        blocked[v] = true;
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if d == r {
                continue;
            }
            for y in g.neighbors(x) {
                if !dist.contains_key(&y) {
                    dist.insert(y, d + 1);
                    blocked[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    chosen
}

/// A vertex map into `H_Δ`, by vertex index on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomMap {
    pub image: Vec<usize>,
}

impl HomMap {
    pub fn is_homomorphism(&self, g: &SimpleGraph, h: &SimpleGraph) -> bool {
        self.image.len() == g.len()
            && g.edges()
                .into_iter()
                .all(|(a, b)| h.adjacent(self.image[a], self.image[b]))
    }

    pub fn to_json(&self, g: &SimpleGraph, h: &SimpleGraph) -> Value {
        let map: serde_json::Map<String, Value> = self
            .image
            .iter()
            .enumerate()
            .map(|(v, &x)| (g.name(v).to_string(), json!(h.name(x))))
            .collect();
        json!({ "map": map })
    }
}

/// Map a forest of maximum degree at most `delta` homomorphically into
/// `H_delta`. Peels off maximal independent sets onto the apexes until the
/// remaining degree is 2, then anchors each path at a maximal 4-discrete set
/// sent to `v0` and fills the gaps by dynamic programming over the 5-cycle.
pub fn hom_solve_h_delta(forest: &SimpleGraph, delta: usize) -> Result<HomMap> {
    let h = build_h_delta(delta)?;
    if !forest.is_forest() {
        return Err(Error::NotAForest);
    }
    if let Some(v) = (0..forest.len()).find(|&v| forest.degree(v) > delta) {
        return Err(Error::DegreeTooHigh {
            vertex: VertexId(v as u64),
            degree: forest.degree(v),
            max: delta,
        });
    }
    let mut image = vec![usize::MAX; forest.len()];
    let mut rest: BTreeSet<usize> = (0..forest.len()).collect();
    for d in (3..=delta).rev() {
        let apex = h.index_of(&format!("w{d}")).unwrap();
        let (sub, origin) = forest.induced(&rest);
        for i in maximal_discrete_set(&sub, 1, None) {
            image[origin[i]] = apex;
            rest.remove(&origin[i]);
        }
    }
    let (sub, origin) = forest.induced(&rest);
    debug_assert!((0..sub.len()).all(|v| sub.degree(v) <= 2));
    let anchors = maximal_discrete_set(&sub, 4, None);
    let mut local = vec![usize::MAX; sub.len()];
    for &a in &anchors {
        local[a] = 0;
    }
    let gaps: BTreeSet<usize> = (0..sub.len()).filter(|v| !anchors.contains(v)).collect();
    let (gap_graph, gap_origin) = sub.induced(&gaps);
    for comp in path_components(&gap_graph) {
        let touching: Vec<usize> = comp
            .iter()
            .map(|&v| {
                sub.neighbors(gap_origin[v])
                    .filter(|w| anchors.contains(w))
                    .count()
            })
            .collect();
        if touching.iter().sum::<usize>() >= 2 {
            debug_assert!(comp.len() >= 3, "gap between anchors is too short");
        }
        let colors = fill_gap(&touching).ok_or_else(|| {
            Error::InvariantBreach("a gap admits no walk in the 5-cycle".into())
        })?;
        for (&v, c) in comp.iter().zip(colors) {
            local[gap_origin[v]] = c;
        }
    }
    for (i, &c) in local.iter().enumerate() {
        image[origin[i]] = c;
    }
    let map = HomMap { image };
    debug_assert!(map.is_homomorphism(forest, &h));
    Ok(map)
}

/// Components of a graph of maximum degree 2 without cycles, each listed
/// from one end to the other.
fn path_components(g: &SimpleGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.len()];
    let mut out = Vec::new();
    for s in 0..g.len() {
        if seen[s] || g.degree(s) > 1 {
            continue;
        }
        let mut path = vec![s];
        seen[s] = true;
        let mut prev = usize::MAX;
        let mut cur = s;
        while let Some(next) = g.neighbors(cur).find(|&w| w != prev) {
            seen[next] = true;
            path.push(next);
            prev = cur;
            cur = next;
        }
        out.push(path);
    }
    out
}

/// Least 5-cycle walk along a path whose vertices adjacent to an anchor
/// (`touching[i] > 0`) avoid `v0` and sit next to it.
fn fill_gap(touching: &[usize]) -> Option<Vec<usize>> {
    let allowed = |i: usize, c: usize| {
        if touching[i] > 0 {
            c == 1 || c == 4
        } else {
            true
        }
    };
    let adj = |a: usize, b: usize| (a + 1) % 5 == b || (b + 1) % 5 == a;
    let n = touching.len();
    // ok[i][c]: positions i.. can be filled with position i taking c
    let mut ok = vec![[false; 5]; n];
    for i in (0..n).rev() {
        for c in 0..5 {
            ok[i][c] = allowed(i, c) && (i + 1 == n || (0..5).any(|d| adj(c, d) && ok[i + 1][d]));
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let c = (0..5).find(|&c| ok[i][c] && out.last().is_none_or(|&p| adj(p, c)))?;
        out.push(c);
    }
    Some(out)
}

/// The half-edge view: vertex `i` gets id `i`, edges are named `e{n}` in
/// edge order, and every vertex is padded with virtual edges up to `delta`.
pub fn to_half_edge(g: &SimpleGraph, delta: usize) -> Result<HalfEdgeGraph> {
    let mut records: Vec<EdgeRecord> = g
        .edges()
        .into_iter()
        .map(|(a, b)| (a as u64, b as u64))
        .map(|(a, b)| EdgeRecord::new("", &[a, b]))
        .collect();
    for v in 0..g.len() {
        if g.degree(v) > delta {
            return Err(Error::DegreeTooHigh {
                vertex: VertexId(v as u64),
                degree: g.degree(v),
                max: delta,
            });
        }
        for _ in g.degree(v)..delta {
            records.push(EdgeRecord::new("", &[v as u64]));
        }
    }
    for (i, r) in records.iter_mut().enumerate() {
        r.name = format!("e{i}");
    }
    let ids: Vec<u64> = (0..g.len() as u64).collect();
    HalfEdgeGraph::new(&ids, records, delta)
}

/// True edges of a half-edge graph as a simple graph named by vertex id.
pub fn from_half_edge(g: &HalfEdgeGraph) -> SimpleGraph {
    let mut s = SimpleGraph::new(g.vertices().iter().map(|v| v.0.to_string())).unwrap();
    for e in g.edges() {
        if let Some((a, b)) = match e.ends {
            crate::graph::Ends::True(a, b) => Some((a, b)),
            crate::graph::Ends::Virtual(_) => None,
        } {
            s.add_edge(g.vertex_index(a).unwrap(), g.vertex_index(b).unwrap())
                .unwrap();
        }
    }
    s
}

/// The coloring of [`lcl_from_graph`] induced by a vertex map: every half
/// edge at `v` carries the image of `v`.
pub fn coloring_from_map(g: &HalfEdgeGraph, map: &HomMap) -> Coloring {
    g.half_edges()
        .map(|(v, e)| {
            let i = g.vertex_index(v).unwrap();
            ((v, e), crate::lcl::Label(map.image[i] as u16))
        })
        .collect()
}
