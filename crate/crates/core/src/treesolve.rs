//! Exact completion of partial colorings on finite Δ-regular forests.
//!
//! Each component is rooted at its least vertex. A bottom-up pass computes,
//! for every non-root vertex, the set of labels its half edge toward the
//! parent can carry in some valid completion of its subtree; a top-down pass
//! then materializes the lexicographically least witness.

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, HalfEdgeGraph, VertexId};
use crate::lcl::{Label, LabelMultiset, Lcl};

pub(crate) type Mask = u64;

pub(crate) const MAX_LABELS: usize = 64;

#[inline]
pub(crate) fn bit(l: Label) -> Mask {
    1u64 << l.0
}

pub(crate) fn full_mask(n: usize) -> Mask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn mask_labels(mask: Mask) -> impl Iterator<Item = Label> {
    (0..64u16).filter(move |i| mask & (1 << i) != 0).map(Label)
}

/// Lexicographically least arrangement of the sorted multiset `ms` over
/// positions whose admissible labels are `masks`.
pub(crate) fn arrange(ms: &[Label], masks: &[Mask]) -> Option<Vec<Label>> {
    debug_assert_eq!(ms.len(), masks.len());
    let mut distinct: Vec<(Label, usize)> = Vec::new();
    for &l in ms {
        match distinct.last_mut() {
            Some((m, c)) if *m == l => *c += 1,
            _ => distinct.push((l, 1)),
        }
    }
    let mut out = Vec::with_capacity(masks.len());
    fn go(pos: usize, masks: &[Mask], counts: &mut [(Label, usize)], out: &mut Vec<Label>) -> bool {
        if pos == masks.len() {
            return true;
        }
        for i in 0..counts.len() {
            let (l, c) = counts[i];
            if c == 0 || masks[pos] & bit(l) == 0 {
                continue;
            }
            counts[i].1 -= 1;
            out.push(l);
            if go(pos + 1, masks, counts, out) {
                return true;
            }
            out.pop();
            counts[i].1 += 1;
        }
        false
    }
    go(0, masks, &mut distinct, &mut out).then_some(out)
}

/// An extension problem: complete `partial` on the forest `graph` so that
/// every true edge is in ℰ and every vertex star lies in `restrict_vertices`
/// (or in 𝒱 when absent).
#[derive(Debug, Clone, Copy)]
pub struct CompletionQuery<'a> {
    pub graph: &'a HalfEdgeGraph,
    pub lcl: &'a Lcl,
    pub partial: &'a Coloring,
    pub restrict_vertices: Option<&'a [LabelMultiset]>,
}

impl<'a> CompletionQuery<'a> {
    pub fn new(graph: &'a HalfEdgeGraph, lcl: &'a Lcl, partial: &'a Coloring) -> Self {
        CompletionQuery {
            graph,
            lcl,
            partial,
            restrict_vertices: None,
        }
    }

    pub fn restrict(mut self, allowed: &'a [LabelMultiset]) -> Self {
        self.restrict_vertices = Some(allowed);
        self
    }
}

struct Rooted {
    /// BFS order over dense vertex indices, roots first within each component.
    order: Vec<usize>,
    /// Parent index and the edge to it.
    parent: Vec<Option<(usize, EdgeId)>>,
}

fn root_forest(g: &HalfEdgeGraph) -> Result<Rooted> {
    if !g.is_forest() {
        return Err(Error::NotAForest);
    }
    let n = g.num_vertices();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = order.len();
        order.push(root);
        let mut head = start;
        while head < order.len() {
            let i = order[head];
            head += 1;
            let v = g.vertices()[i];
            for &e in g.incident_at(i) {
                if let Some(w) = g.edge(e).ends.other(v) {
                    let j = g.vertex_index(w).expect("endpoint is a vertex");
                    if !seen[j] {
                        seen[j] = true;
                        parent[j] = Some((i, e));
                        order.push(j);
                    }
                }
            }
        }
    }
    Ok(Rooted { order, parent })
}

struct Tables {
    rooted: Rooted,
    allowed: Vec<LabelMultiset>,
    /// Per vertex, admissible labels per incident position (parent position
    /// left unrestricted by the parent).
    masks: Vec<Vec<Mask>>,
    /// Per non-root vertex, feasible labels on the half edge toward the parent.
    up: Vec<Mask>,
}

fn bottom_up(q: &CompletionQuery<'_>) -> Result<Option<Tables>> {
    let (g, lcl) = (q.graph, q.lcl);
    if lcl.num_labels() > MAX_LABELS {
        return Err(Error::BadParameter(format!(
            "at most {MAX_LABELS} labels are supported"
        )));
    }
    if g.delta() != lcl.delta() {
        return Err(Error::BadParameter(format!(
            "graph has Δ={} but the problem has Δ={}",
            g.delta(),
            lcl.delta()
        )));
    }
    q.partial.check_keys(g)?;
    let rooted = root_forest(g)?;
    let allowed: Vec<LabelMultiset> = match q.restrict_vertices {
        Some(r) => lcl
            .vertex_constraints()
            .iter()
            .filter(|m| r.contains(m))
            .cloned()
            .collect(),
        None => lcl.vertex_constraints().to_vec(),
    };
    let n = g.num_vertices();
    let all = full_mask(lcl.num_labels());
    let mut masks: Vec<Vec<Mask>> = vec![Vec::new(); n];
    let mut up = vec![0 as Mask; n];
    // parent-side labels compatible with each child's feasible set
    let mut toward_child = vec![0 as Mask; n];
    for &i in rooted.order.iter().rev() {
        let v = g.vertices()[i];
        let parent_edge = rooted.parent[i].map(|(_, e)| e);
        let mut pos_masks = Vec::with_capacity(g.delta());
        let mut parent_pos = None;
        for (pos, &e) in g.incident_at(i).iter().enumerate() {
            let mut m = match q.partial.get(v, e) {
                Some(l) => bit(l),
                None => all,
            };
            if Some(e) == parent_edge {
                parent_pos = Some(pos);
            } else if let Some(w) = g.edge(e).ends.other(v) {
                let j = g.vertex_index(w).unwrap();
                m &= toward_child[j];
            }
            pos_masks.push(m);
        }
        match parent_pos {
            Some(pp) => {
                let mut feasible: Mask = 0;
                for ms in &allowed {
                    for l in ms.distinct() {
                        if pos_masks[pp] & bit(l) == 0 || feasible & bit(l) != 0 {
                            continue;
                        }
                        let rest = ms.without(l).unwrap();
                        let mut others = pos_masks.clone();
                        others.remove(pp);
                        if arrange(rest.labels(), &others).is_some() {
                            feasible |= bit(l);
                        }
                    }
                }
                if feasible == 0 {
                    return Ok(None);
                }
                up[i] = feasible;
                toward_child[i] = lcl
                    .labels()
                    .filter(|&a| mask_labels(feasible).any(|b| lcl.edge_allowed(a, b)))
                    .fold(0, |acc, a| acc | bit(a));
            }
            None => {
                if !allowed.iter().any(|ms| arrange(ms.labels(), &pos_masks).is_some()) {
                    return Ok(None);
                }
            }
        }
        masks[i] = pos_masks;
    }
    Ok(Some(Tables {
        rooted,
        allowed,
        masks,
        up,
    }))
}

/// Whether `query` has a completion, without building one.
pub fn is_extendable(query: &CompletionQuery<'_>) -> Result<bool> {
    Ok(bottom_up(query)?.is_some())
}

/// A total coloring extending the partial one, or `None` if none exists.
/// Deterministic: least label in sigma order at every choice.
pub fn complete(query: &CompletionQuery<'_>) -> Result<Option<Coloring>> {
    let Some(t) = bottom_up(query)? else {
        return Ok(None);
    };
    let (g, lcl) = (query.graph, query.lcl);
    let mut out = query.partial.clone();
    let mut chosen: Vec<Option<Label>> = vec![None; g.num_vertices()];
    for &i in &t.rooted.order {
        let v = g.vertices()[i];
        let mut pos_masks = t.masks[i].clone();
        if let Some((p, e)) = t.rooted.parent[i] {
            let from_parent = out.get(g.vertices()[p], e).expect("parent assigned first");
            let mu = mask_labels(t.up[i])
                .find(|&m| lcl.edge_allowed(from_parent, m))
                .expect("parent label is compatible with some feasible child label");
            let pp = g.incident_at(i).iter().position(|&x| x == e).unwrap();
            pos_masks[pp] = bit(mu);
            chosen[i] = Some(mu);
        }
        let labels = t
            .allowed
            .iter()
            .find_map(|ms| arrange(ms.labels(), &pos_masks))
            .expect("bottom-up pass guarantees a star");
        for (&e, l) in g.incident_at(i).iter().zip(labels) {
            out.set(v, e, l);
        }
    }
    Ok(Some(out))
}

/// Convenience: vertex ids in the BFS order used for rooting (roots first).
pub fn rooting_order(g: &HalfEdgeGraph) -> Result<Vec<VertexId>> {
    Ok(root_forest(g)?
        .order
        .into_iter()
        .map(|i| g.vertices()[i])
        .collect())
}
