//! The greedy online solver and the toast-driven solver.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::classify::{FullnessCertificate, GreedyCertificate};
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, HalfEdgeGraph, VertexId};
use crate::io::AssignmentDoc;
use crate::lcl::{Label, Lcl};
use crate::toast::build_toast;
use crate::treesolve::{arrange, bit, complete, CompletionQuery, Mask};

/// One committed step of a solver, for tracing.
#[derive(Debug, Clone, Serialize)]
pub struct Commitment {
    pub step: usize,
    /// `"vertex"` for greedy stages, `"piece"` for toast pieces.
    pub kind: &'static str,
    pub id: u64,
    pub assignments: Vec<AssignmentDoc>,
}

fn assignment_docs(
    g: &HalfEdgeGraph,
    lcl: &Lcl,
    items: impl IntoIterator<Item = ((VertexId, EdgeId), Label)>,
) -> Vec<AssignmentDoc> {
    items
        .into_iter()
        .map(|((v, e), l)| AssignmentDoc {
            edge: g.edge(e).name.clone(),
            label: lcl.label_name(l).to_string(),
            vertex: v.0,
        })
        .collect()
}

fn resolve_order(g: &HalfEdgeGraph, order: Option<&[VertexId]>) -> Result<Vec<VertexId>> {
    let Some(order) = order else {
        return Ok(g.vertices().to_vec());
    };
    let mut seen = BTreeSet::new();
    for &v in order {
        if !g.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        if !seen.insert(v) {
            return Err(Error::BadParameter(format!("{v} appears twice in the order")));
        }
    }
    if seen.len() != g.num_vertices() {
        return Err(Error::BadParameter("order must list every vertex".into()));
    }
    Ok(order.to_vec())
}

/// Color the graph one vertex at a time. Half edges from processed neighbors
/// are precolored; the rest of the star gets labels from Σ′, as the greedy
/// condition guarantees. Works on graphs with cycles.
pub fn greedy_color(
    graph: &HalfEdgeGraph,
    lcl: &Lcl,
    cert: &GreedyCertificate,
    order: Option<&[VertexId]>,
) -> Result<Coloring> {
    greedy_color_traced(graph, lcl, cert, order, &mut |_| {})
}

pub fn greedy_color_traced(
    graph: &HalfEdgeGraph,
    lcl: &Lcl,
    cert: &GreedyCertificate,
    order: Option<&[VertexId]>,
    trace: &mut dyn FnMut(&Commitment),
) -> Result<Coloring> {
    cert.validate(lcl)?;
    if graph.delta() != lcl.delta() {
        return Err(Error::BadParameter("graph and problem disagree on Δ".into()));
    }
    let order = resolve_order(graph, order)?;
    let sp: Mask = cert.sigma_prime.iter().fold(0, |m, &l| m | bit(l));
    let mut c = Coloring::new();
    for (step, &v) in order.iter().enumerate() {
        let masks: Vec<Mask> = graph
            .incident(v)
            .iter()
            .map(|&e| {
                let other = graph.edge(e).ends.other(v);
                match other.and_then(|w| c.get(w, e)) {
                    Some(alpha) => lcl
                        .labels()
                        .filter(|&u| lcl.edge_allowed(alpha, u))
                        .fold(0, |m, u| m | bit(u)),
                    None => sp,
                }
            })
            .collect();
        let star = lcl
            .vertex_constraints()
            .iter()
            .find_map(|ms| arrange(ms.labels(), &masks))
            .ok_or_else(|| {
                Error::InvariantBreach(format!("no admissible star at vertex {v}"))
            })?;
        let mut added = Vec::new();
        for (&e, l) in graph.incident(v).iter().zip(star) {
            c.set(v, e, l);
            added.push(((v, e), l));
        }
        if cfg!(debug_assertions) {
            // an edge with one colored half carries a Σ′ label on it
            for &e in graph.incident(v) {
                if let Some(w) = graph.edge(e).ends.other(v) {
                    if c.get(w, e).is_none() {
                        debug_assert!(sp & bit(c.get(v, e).unwrap()) != 0);
                    }
                }
            }
        }
        trace(&Commitment {
            step,
            kind: "vertex",
            id: v.0,
            assignments: assignment_docs(graph, lcl, added),
        });
    }
    Ok(c)
}

/// Color a forest piece by piece along a `(2l+2)`-toast, completing each
/// piece exactly inside V′ around the already committed labels.
pub fn toast_color(
    graph: &HalfEdgeGraph,
    lcl: &Lcl,
    cert: &FullnessCertificate,
    stream: Option<&[VertexId]>,
) -> Result<Coloring> {
    toast_color_traced(graph, lcl, cert, stream, &mut |_| {})
}

pub fn toast_color_traced(
    graph: &HalfEdgeGraph,
    lcl: &Lcl,
    cert: &FullnessCertificate,
    stream: Option<&[VertexId]>,
    trace: &mut dyn FnMut(&Commitment),
) -> Result<Coloring> {
    toast_color_with_buffer(graph, lcl, cert, 2 * cert.l + 2, stream, trace)
}

/// As [`toast_color_traced`] with an explicit toast parameter; smaller
/// buffers carry no success guarantee.
pub fn toast_color_with_buffer(
    graph: &HalfEdgeGraph,
    lcl: &Lcl,
    cert: &FullnessCertificate,
    buffer: usize,
    stream: Option<&[VertexId]>,
    trace: &mut dyn FnMut(&Commitment),
) -> Result<Coloring> {
    cert.validate(lcl)?;
    if !graph.is_forest() {
        return Err(Error::NotAForest);
    }
    if graph.delta() != lcl.delta() {
        return Err(Error::BadParameter("graph and problem disagree on Δ".into()));
    }
    let toast = build_toast(graph, buffer, stream)?;
    let mut committed = Coloring::new();
    let mut done: BTreeSet<VertexId> = BTreeSet::new();
    for (step, piece) in toast.pieces.iter().enumerate() {
        let fresh: Vec<VertexId> = piece
            .vertices
            .iter()
            .copied()
            .filter(|v| !done.contains(v))
            .collect();
        if fresh.is_empty() {
            continue;
        }
        let mut region: BTreeSet<VertexId> = piece.vertices.iter().copied().collect();
        for &v in &fresh {
            region.extend(graph.neighbors(v).filter(|w| done.contains(w)));
        }
        let (sub, origin) = graph.induced(&region);
        let partial: Coloring = origin
            .iter()
            .enumerate()
            .flat_map(|(new, &old)| {
                let committed = &committed;
                graph
                    .edge(old)
                    .ends
                    .vertices()
                    .into_iter()
                    .filter(|v| region.contains(v))
                    .filter_map(move |v| committed.get(v, old).map(|l| ((v, EdgeId(new as u32)), l)))
            })
            .collect();
        let query = CompletionQuery::new(&sub, lcl, &partial).restrict(&cert.v_prime);
        let solved = complete(&query)?.ok_or(Error::CompletionFailure { piece: piece.id })?;
        let mut added = Vec::new();
        for &v in &fresh {
            for &e_new in sub.incident(v) {
                let e = origin[e_new.index()];
                let l = solved.get(v, e_new).expect("completion is total");
                debug_assert!(committed.get(v, e).is_none());
                committed.set(v, e, l);
                added.push(((v, e), l));
            }
            done.insert(v);
        }
        trace(&Commitment {
            step,
            kind: "piece",
            id: piece.id as u64,
            assignments: assignment_docs(graph, lcl, added),
        });
    }
    Ok(committed)
}
