//! Canonical JSON documents for problems, graphs and colorings.
//!
//! Output goes through [`serde_json::Value`], whose maps are ordered, so keys
//! come out sorted; lists are emitted in ascending id order.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::{EdgeRecord, Ends, HalfEdgeGraph, VertexId};
use crate::lcl::{LabelMultiset, Lcl};

/// Pretty-print a value with sorted keys and a trailing newline.
pub fn to_canonical<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("document types serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

/// Single-line form, used for JSON-lines streams.
pub fn to_canonical_line<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("document types serialize");
    serde_json::to_string(&v).expect("values serialize")
}

pub(crate) fn parse_doc<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            Error::Semantic(format!("{e}"))
        } else {
            Error::from_json(&e)
        }
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LclDoc {
    pub delta: usize,
    pub edge_constraints: Vec<Vec<String>>,
    pub sigma: Vec<String>,
    pub vertex_constraints: Vec<Vec<String>>,
}

pub(crate) fn multiset_names(lcl: &Lcl, ms: &LabelMultiset) -> Vec<String> {
    ms.labels()
        .iter()
        .map(|&l| lcl.label_name(l).to_string())
        .collect()
}

pub(crate) fn multiset_from_names(lcl: &Lcl, names: &[String]) -> Result<LabelMultiset> {
    names
        .iter()
        .map(|n| {
            lcl.label_by_name(n)
                .ok_or_else(|| Error::Semantic(format!("label {n:?} is not in sigma")))
        })
        .collect()
}

impl LclDoc {
    pub fn from_lcl(lcl: &Lcl) -> Self {
        LclDoc {
            delta: lcl.delta(),
            edge_constraints: lcl
                .edge_constraints()
                .iter()
                .map(|m| multiset_names(lcl, m))
                .collect(),
            sigma: lcl.sigma().to_vec(),
            vertex_constraints: lcl
                .vertex_constraints()
                .iter()
                .map(|m| multiset_names(lcl, m))
                .collect(),
        }
    }

    pub fn into_lcl(self) -> Result<Lcl> {
        let sigma = self.sigma;
        let lookup = |names: &[String]| -> Result<LabelMultiset> {
            names
                .iter()
                .map(|n| {
                    sigma
                        .iter()
                        .position(|s| s == n)
                        .map(|i| crate::lcl::Label(i as u16))
                        .ok_or_else(|| Error::Semantic(format!("label {n:?} is not in sigma")))
                })
                .collect()
        };
        let vs = self
            .vertex_constraints
            .iter()
            .map(|v| lookup(v))
            .collect::<Result<Vec<_>>>()?;
        let es = self
            .edge_constraints
            .iter()
            .map(|v| lookup(v))
            .collect::<Result<Vec<_>>>()?;
        Lcl::new(self.delta, sigma.clone(), vs, es)
    }
}

pub fn parse_lcl(text: &str) -> Result<Lcl> {
    parse_doc::<LclDoc>(text)?.into_lcl()
}

pub fn serialize_lcl(lcl: &Lcl) -> String {
    to_canonical(&LclDoc::from_lcl(lcl))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub ends: Vec<u64>,
    pub id: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub delta: usize,
    pub edges: Vec<EdgeDoc>,
    pub vertices: Vec<u64>,
}

impl GraphDoc {
    pub fn from_graph(g: &HalfEdgeGraph) -> Self {
        GraphDoc {
            delta: g.delta(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    ends: match e.ends {
                        Ends::Virtual(a) => vec![a.0],
                        Ends::True(a, b) => vec![a.0, b.0],
                    },
                    id: e.name.clone(),
                })
                .collect(),
            vertices: g.vertices().iter().map(|v| v.0).collect(),
        }
    }

    pub fn into_graph(self) -> Result<HalfEdgeGraph> {
        let records = self
            .edges
            .into_iter()
            .map(|e| EdgeRecord {
                name: e.id,
                ends: e.ends.into_iter().map(VertexId).collect(),
            })
            .collect();
        HalfEdgeGraph::new(&self.vertices, records, self.delta).map_err(|e| match e {
            // structural problems in a document are semantic errors of that document
            Error::BadEndpointCount { .. }
            | Error::DegreeMismatch { .. }
            | Error::MultiEdge(..)
            | Error::UnknownVertex(_)
            | Error::DuplicateVertex(_)
            | Error::DuplicateEdge(_) => Error::Semantic(e.to_string()),
            other => other,
        })
    }
}

pub fn parse_graph(text: &str) -> Result<HalfEdgeGraph> {
    parse_doc::<GraphDoc>(text)?.into_graph()
}

pub fn serialize_graph(g: &HalfEdgeGraph) -> String {
    to_canonical(&GraphDoc::from_graph(g))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDoc {
    pub edge: String,
    pub label: String,
    pub vertex: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoringDoc {
    pub assignments: Vec<AssignmentDoc>,
}

impl ColoringDoc {
    pub fn from_coloring(g: &HalfEdgeGraph, lcl: &Lcl, c: &Coloring) -> Self {
        ColoringDoc {
            assignments: c
                .iter()
                .map(|((v, e), l)| AssignmentDoc {
                    edge: g.edge(e).name.clone(),
                    label: lcl.label_name(l).to_string(),
                    vertex: v.0,
                })
                .collect(),
        }
    }

    pub fn into_coloring(self, g: &HalfEdgeGraph, lcl: &Lcl) -> Result<Coloring> {
        let mut c = Coloring::new();
        for a in self.assignments {
            let v = VertexId(a.vertex);
            let e = g
                .edge_by_name(&a.edge)
                .ok_or_else(|| Error::Semantic(format!("unknown edge {:?}", a.edge)))?;
            if !g.is_incident(v, e) {
                return Err(Error::Semantic(format!(
                    "({}, {:?}) is not a half edge of the graph",
                    a.vertex, a.edge
                )));
            }
            let l = lcl
                .label_by_name(&a.label)
                .ok_or_else(|| Error::Semantic(format!("label {:?} is not in sigma", a.label)))?;
            if c.set(v, e, l).is_some() {
                return Err(Error::Semantic(format!(
                    "half edge ({}, {:?}) assigned twice",
                    a.vertex, a.edge
                )));
            }
        }
        Ok(c)
    }
}

/// Colorings name edges and labels, so parsing needs the graph and problem.
pub fn parse_coloring(text: &str, g: &HalfEdgeGraph, lcl: &Lcl) -> Result<Coloring> {
    parse_doc::<ColoringDoc>(text)?.into_coloring(g, lcl)
}

pub fn serialize_coloring(g: &HalfEdgeGraph, lcl: &Lcl, c: &Coloring) -> String {
    to_canonical(&ColoringDoc::from_coloring(g, lcl, c))
}

/// Parse a document into a generic value; used by callers that only need to
/// inspect a field.
pub fn parse_value(text: &str) -> Result<Value> {
    parse_doc(text)
}
