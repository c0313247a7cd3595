//! The two diagonalization constructions, played against a pluggable online
//! solver.
//!
//! The adversary grows a finite Δ-regular forest in stages. At stage `m + 1`
//! the solver gets budget `m` and read-only access to the forest as it stood
//! at stages `0..=m`. A converged answer is final, so a tracked region whose
//! half edges have all converged to something that is not a Π-coloring is a
//! permanent defeat and ends the run.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde_json::{json, Value};

use crate::classify::{
    decide_fullness, decide_greediness, find_bad_path_witness, find_bad_star_witness,
    BadPathWitness, DecideOptions, GreedyCertificate,
};
use crate::coloring::{verify_coloring, Coloring, ColoringViolation};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeRecord, HalfEdgeGraph, VertexId};
use crate::lcl::{Label, LabelMultiset, Lcl};
use crate::treesolve::{arrange, bit, complete, CompletionQuery, Mask};

/// Answer to a stage-indexed query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Undetermined,
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

/// The construction so far, with the stage at which each piece appeared.
#[derive(Debug, Clone)]
struct Build {
    delta: usize,
    vbirth: Vec<usize>,
    /// Incident edges in attachment order; all attached at the vertex's birth.
    vedges: Vec<Vec<EdgeId>>,
    ebirth: Vec<usize>,
    ends: Vec<Vec<(VertexId, usize)>>,
    parent: Vec<u32>,
    size: Vec<u32>,
    open: BTreeSet<EdgeId>,
}

impl Build {
    fn new(delta: usize) -> Self {
        Build {
            delta,
            vbirth: Vec::new(),
            vedges: Vec::new(),
            ebirth: Vec::new(),
            ends: Vec::new(),
            parent: Vec::new(),
            size: Vec::new(),
            open: BTreeSet::new(),
        }
    }

    fn num_vertices(&self) -> usize {
        self.vbirth.len()
    }

    fn add_vertex(&mut self, stage: usize) -> VertexId {
        let v = self.vbirth.len();
        self.vbirth.push(stage);
        self.vedges.push(Vec::with_capacity(self.delta));
        self.parent.push(v as u32);
        self.size.push(1);
        VertexId(v as u64)
    }

    fn add_virtual(&mut self, v: VertexId, stage: usize) -> EdgeId {
        let e = EdgeId(self.ebirth.len() as u32);
        self.ebirth.push(stage);
        self.ends.push(vec![(v, stage)]);
        self.vedges[v.0 as usize].push(e);
        self.open.insert(e);
        e
    }

    fn find(&self, v: VertexId) -> u32 {
        let mut x = v.0 as u32;
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    /// Make virtual edge `e` true by giving it the (new) endpoint `v`.
    fn attach(&mut self, e: EdgeId, v: VertexId, stage: usize) -> Result<()> {
        let ends = &self.ends[e.index()];
        if ends.len() != 1 {
            return Err(Error::InvariantBreach(format!("edge e{} is not virtual", e.0)));
        }
        let (a, b) = (self.find(ends[0].0), self.find(v));
        if a == b {
            return Err(Error::InvariantBreach(format!("joining e{} closes a cycle", e.0)));
        }
        let (big, small) = if self.size[a as usize] >= self.size[b as usize] {
            (a, b)
        } else {
            (b, a)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
        self.ends[e.index()].push((v, stage));
        self.vedges[v.0 as usize].push(e);
        self.open.remove(&e);
        Ok(())
    }

    fn is_virtual(&self, e: EdgeId) -> bool {
        self.ends[e.index()].len() == 1
    }

    fn other(&self, e: EdgeId, v: VertexId) -> Option<VertexId> {
        self.ends[e.index()]
            .iter()
            .map(|&(w, _)| w)
            .find(|&w| w != v)
    }

    fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.vedges[v.0 as usize]
    }

    fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incident(v).iter().filter_map(move |&e| self.other(e, v))
    }

    fn records(&self, stage: usize) -> (Vec<u64>, Vec<EdgeRecord>) {
        let vertices: Vec<u64> = (0..self.num_vertices() as u64)
            .filter(|&v| self.vbirth[v as usize] <= stage)
            .collect();
        let mut edges = Vec::new();
        for (i, ends) in self.ends.iter().enumerate() {
            if self.ebirth[i] > stage {
                continue;
            }
            let kept: Vec<u64> = ends
                .iter()
                .filter(|&&(_, s)| s <= stage)
                .map(|&(v, _)| v.0)
                .collect();
            if !kept.is_empty() {
                edges.push(EdgeRecord::new(format!("e{i}"), &kept));
            }
        }
        (vertices, edges)
    }

    /// The forest as it stood after stage `stage`.
    fn graph_at(&self, stage: usize) -> HalfEdgeGraph {
        let (v, e) = self.records(stage);
        HalfEdgeGraph::new(&v, e, self.delta).expect("stages are Δ-regular")
    }

    /// Current subgraph on `region` with cut edges virtual, and the global
    /// edge id of each local edge.
    fn region_graph(&self, region: &BTreeSet<VertexId>) -> (HalfEdgeGraph, Vec<EdgeId>) {
        let vertices: Vec<u64> = region.iter().map(|v| v.0).collect();
        let edges: BTreeSet<EdgeId> = region
            .iter()
            .flat_map(|&v| self.incident(v).iter().copied())
            .collect();
        let records = edges
            .iter()
            .map(|&e| {
                let ends: Vec<u64> = self.ends[e.index()]
                    .iter()
                    .filter(|(v, _)| region.contains(v))
                    .map(|(v, _)| v.0)
                    .collect();
                EdgeRecord::new(format!("e{}", e.0), &ends)
            })
            .collect();
        (
            HalfEdgeGraph::new(&vertices, records, self.delta).expect("regions are Δ-regular"),
            edges.into_iter().collect(),
        )
    }
}

/// Read-only access to the committed stages of a construction.
pub struct Oracle<'a> {
    build: &'a Build,
    current: usize,
}

impl Oracle<'_> {
    /// Queries about this stage or later are undetermined.
    pub fn current_stage(&self) -> usize {
        self.current
    }

    pub fn vertex_exists(&self, x: VertexId, s: usize) -> Tri {
        if s >= self.current {
            return Tri::Undetermined;
        }
        match self.build.vbirth.get(x.0 as usize) {
            Some(&b) => (b <= s).into(),
            None => Tri::No,
        }
    }

    pub fn incidence(&self, x: VertexId, e: EdgeId, s: usize) -> Tri {
        if s >= self.current {
            return Tri::Undetermined;
        }
        match self.build.ends.get(e.index()) {
            Some(ends) => ends.iter().any(|&(v, t)| v == x && t <= s).into(),
            None => Tri::No,
        }
    }

    pub fn true_edge(&self, e: EdgeId, s: usize) -> Tri {
        if s >= self.current {
            return Tri::Undetermined;
        }
        match self.build.ends.get(e.index()) {
            Some(ends) => (ends.iter().filter(|&&(_, t)| t <= s).count() == 2).into(),
            None => Tri::No,
        }
    }

    /// First stage at which `x` exists, if it is committed.
    pub fn birth_stage(&self, x: VertexId) -> Option<usize> {
        self.build
            .vbirth
            .get(x.0 as usize)
            .copied()
            .filter(|&b| b < self.current)
    }

    pub fn incident_edges(&self, x: VertexId, s: usize) -> Option<Vec<EdgeId>> {
        (self.vertex_exists(x, s) == Tri::Yes).then(|| self.build.incident(x).to_vec())
    }

    pub fn endpoints(&self, e: EdgeId, s: usize) -> Option<Vec<VertexId>> {
        if s >= self.current {
            return None;
        }
        let ends = self.build.ends.get(e.index())?;
        let v: Vec<VertexId> = ends.iter().filter(|&&(_, t)| t <= s).map(|&(v, _)| v).collect();
        (!v.is_empty()).then_some(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverAnswer {
    Converged(Label),
    NotYet,
}

/// A deterministic online solver. Answers must be monotone in the budget:
/// once converged, the same label for every larger budget.
pub trait OnlineSolver {
    fn describe(&self) -> String;
    fn answer(&self, x: VertexId, e: EdgeId, budget: usize, oracle: &Oracle<'_>) -> SolverAnswer;
}

/// Never converges.
pub struct Silent;

impl OnlineSolver for Silent {
    fn describe(&self) -> String {
        "builtin:silent".into()
    }

    fn answer(&self, _: VertexId, _: EdgeId, _: usize, _: &Oracle<'_>) -> SolverAnswer {
        SolverAnswer::NotYet
    }
}

/// Answers a fixed label immediately.
pub struct Oblivious {
    label: Label,
    name: String,
}

impl OnlineSolver for Oblivious {
    fn describe(&self) -> String {
        format!("builtin:oblivious:{}", self.name)
    }

    fn answer(&self, _: VertexId, _: EdgeId, _: usize, _: &Oracle<'_>) -> SolverAnswer {
        SolverAnswer::Converged(self.label)
    }
}

type View = Vec<(VertexId, Vec<(EdgeId, Option<VertexId>)>)>;

/// Waits for the least stage `s` after the vertex's birth at which its
/// radius-`r` view equals the view at `s - 1`, then commits the least
/// completion of that view (edges leaving the ball treated as virtual).
pub struct Lookahead {
    radius: usize,
    lcl: Lcl,
    cache: RefCell<HashMap<VertexId, LookState>>,
}

struct LookState {
    next: usize,
    star: Option<Option<Vec<(EdgeId, Label)>>>,
}

impl Lookahead {
    pub fn new(lcl: &Lcl, radius: usize) -> Self {
        Lookahead {
            radius,
            lcl: lcl.clone(),
            cache: RefCell::new(HashMap::new()),
        }
    }

    fn view(&self, oracle: &Oracle<'_>, x: VertexId, s: usize) -> View {
        let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
        dist.insert(x, 0);
        let mut frontier = vec![x];
        for d in 1..=self.radius {
            let mut next = Vec::new();
            for &v in &frontier {
                for e in oracle.incident_edges(v, s).unwrap_or_default() {
                    for w in oracle.endpoints(e, s).unwrap_or_default() {
                        if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(w) {
                            slot.insert(d);
                            next.push(w);
                        }
                    }
                }
            }
            frontier = next;
        }
        dist.keys()
            .map(|&v| {
                let edges = oracle
                    .incident_edges(v, s)
                    .unwrap_or_default()
                    .into_iter()
                    .map(|e| {
                        let other = oracle
                            .endpoints(e, s)
                            .unwrap_or_default()
                            .into_iter()
                            .find(|&w| w != v && dist.contains_key(&w));
                        (e, other)
                    })
                    .collect();
                (v, edges)
            })
            .collect()
    }

    fn solve_view(&self, view: &View, x: VertexId) -> Option<Vec<(EdgeId, Label)>> {
        let vertices: Vec<u64> = view.iter().map(|(v, _)| v.0).collect();
        let mut records = Vec::new();
        let mut seen = BTreeSet::new();
        for (v, edges) in view {
            for &(e, other) in edges {
                if !seen.insert(e) {
                    continue;
                }
                let ends = match other {
                    Some(w) => vec![v.0, w.0],
                    None => vec![v.0],
                };
                records.push(EdgeRecord::new(format!("e{}", e.0), &ends));
            }
        }
        let g = HalfEdgeGraph::new(&vertices, records, self.lcl.delta()).ok()?;
        let empty = Coloring::new();
        let c = complete(&CompletionQuery::new(&g, &self.lcl, &empty)).ok()??;
        Some(
            g.incident(x)
                .iter()
                .map(|&le| {
                    let global = EdgeId(g.edge(le).name[1..].parse().unwrap());
                    (global, c.get(x, le).unwrap())
                })
                .collect(),
        )
    }
}

impl OnlineSolver for Lookahead {
    fn describe(&self) -> String {
        format!("builtin:lookahead:{}", self.radius)
    }

    fn answer(&self, x: VertexId, e: EdgeId, budget: usize, oracle: &Oracle<'_>) -> SolverAnswer {
        let Some(birth) = oracle.birth_stage(x) else {
            return SolverAnswer::NotYet;
        };
        let mut cache = self.cache.borrow_mut();
        let st = cache.entry(x).or_insert(LookState {
            next: birth + 1,
            star: None,
        });
        while st.star.is_none() && st.next <= budget && st.next < oracle.current_stage() {
            let s = st.next;
            let now = self.view(oracle, x, s);
            if now == self.view(oracle, x, s - 1) {
                st.star = Some(self.solve_view(&now, x));
            } else {
                st.next += 1;
            }
        }
        match &st.star {
            Some(Some(star)) => match star.iter().find(|&&(f, _)| f == e) {
                Some(&(_, l)) => SolverAnswer::Converged(l),
                None => SolverAnswer::NotYet,
            },
            _ => SolverAnswer::NotYet,
        }
    }
}

/// The greedy solver run online: vertices in id order, each star fixed
/// from the labels of smaller neighbors, as soon as the vertex is committed.
pub struct Replay {
    lcl: Lcl,
    sp: Mask,
    stars: RefCell<Vec<Vec<(EdgeId, Label)>>>,
}

impl Replay {
    pub fn new(lcl: &Lcl, cert: &GreedyCertificate) -> Result<Self> {
        cert.validate(lcl).map_err(|e| Error::BadParameter(e.to_string()))?;
        Ok(Replay {
            lcl: lcl.clone(),
            sp: cert.sigma_prime.iter().fold(0, |m, &l| m | bit(l)),
            stars: RefCell::new(Vec::new()),
        })
    }
}

impl OnlineSolver for Replay {
    fn describe(&self) -> String {
        "builtin:replay".into()
    }

    fn answer(&self, x: VertexId, e: EdgeId, budget: usize, oracle: &Oracle<'_>) -> SolverAnswer {
        match oracle.birth_stage(x) {
            Some(b) if b <= budget => {}
            _ => return SolverAnswer::NotYet,
        }
        let mut stars = self.stars.borrow_mut();
        while stars.len() <= x.0 as usize {
            let y = VertexId(stars.len() as u64);
            let b = oracle.birth_stage(y).expect("smaller ids are born no later");
            let edges = oracle.incident_edges(y, b).unwrap();
            let masks: Vec<Mask> = edges
                .iter()
                .map(|&f| {
                    let earlier = oracle
                        .endpoints(f, b)
                        .unwrap_or_default()
                        .into_iter()
                        .find(|&w| w < y);
                    match earlier {
                        Some(w) => {
                            let alpha = stars[w.0 as usize]
                                .iter()
                                .find(|&&(g, _)| g == f)
                                .unwrap()
                                .1;
                            self.lcl
                                .labels()
                                .filter(|&u| self.lcl.edge_allowed(alpha, u))
                                .fold(0, |m, u| m | bit(u))
                        }
                        None => self.sp,
                    }
                })
                .collect();
            let star = self
                .lcl
                .vertex_constraints()
                .iter()
                .find_map(|ms| arrange(ms.labels(), &masks))
                .unwrap_or_default();
            stars.push(edges.into_iter().zip(star).collect());
        }
        match stars[x.0 as usize].iter().find(|&&(f, _)| f == e) {
            Some(&(_, l)) => SolverAnswer::Converged(l),
            None => SolverAnswer::NotYet,
        }
    }
}

/// Parse `builtin:lookahead:R`, `builtin:oblivious:LABEL`, `builtin:replay`
/// or `builtin:silent`.
pub fn builtin_solver(spec: &str, lcl: &Lcl) -> Result<Box<dyn OnlineSolver>> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["builtin", "lookahead", r] => {
            let r: usize = r
                .parse()
                .map_err(|_| Error::BadParameter(format!("bad radius {r:?}")))?;
            Ok(Box::new(Lookahead::new(lcl, r)))
        }
        ["builtin", "oblivious", name] => {
            let label = lcl
                .label_by_name(name)
                .ok_or_else(|| Error::BadParameter(format!("label {name:?} is not in sigma")))?;
            Ok(Box::new(Oblivious {
                label,
                name: name.to_string(),
            }))
        }
        ["builtin", "replay"] => {
            let cert = decide_greediness(lcl, DecideOptions::default())?.ok_or_else(|| {
                Error::BadParameter("replay needs a greedy problem".into())
            })?;
            Ok(Box::new(Replay::new(lcl, &cert)?))
        }
        ["builtin", "silent"] => Ok(Box::new(Silent)),
        _ => Err(Error::BadParameter(format!("unknown solver {spec:?}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Hc,
    Comp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    Initial,
    Uninteresting,
    Interesting,
}

impl Case {
    fn name(self) -> &'static str {
        match self {
            Case::Initial => "initial",
            Case::Uninteresting => "uninteresting",
            Case::Interesting => "interesting",
        }
    }
}

/// Objects the construction is tracking between stages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tracked {
    Hc {
        paths: Vec<Vec<VertexId>>,
        reserves: BTreeMap<LabelMultiset, Vec<VertexId>>,
    },
    Comp {
        centers: Vec<VertexId>,
        reserves: BTreeMap<Label, Vec<(VertexId, EdgeId)>>,
    },
}

impl Tracked {
    /// One vertex per tracked object; they must lie in distinct components.
    pub fn representatives(&self) -> Vec<VertexId> {
        match self {
            Tracked::Hc { paths, reserves } => paths
                .iter()
                .map(|p| p[0])
                .chain(reserves.values().flatten().copied())
                .collect(),
            Tracked::Comp { centers, reserves } => centers
                .iter()
                .copied()
                .chain(reserves.values().flatten().map(|&(v, _)| v))
                .collect(),
        }
    }

    fn to_json(&self, lcl: &Lcl) -> Value {
        let ids = |v: &[VertexId]| v.iter().map(|x| x.0).collect::<Vec<_>>();
        match self {
            Tracked::Hc { paths, reserves } => json!({
                "paths": paths.iter().map(|p| ids(p)).collect::<Vec<_>>(),
                "reserves": reserves
                    .iter()
                    .map(|(c, ys)| (lcl.show(c), json!(ids(ys))))
                    .collect::<serde_json::Map<_, _>>(),
            }),
            Tracked::Comp { centers, reserves } => json!({
                "centers": ids(centers),
                "reserves": reserves
                    .iter()
                    .map(|(a, ys)| {
                        let pairs: Vec<Value> =
                            ys.iter().map(|&(v, e)| json!([v.0, format!("e{}", e.0)])).collect();
                        (lcl.label_name(*a).to_string(), Value::Array(pairs))
                    })
                    .collect::<serde_json::Map<_, _>>(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord {
    pub stage: usize,
    pub case: Case,
    pub n: u64,
    /// Half-open id ranges of vertices and edges created at this stage.
    pub vertices_added: [u64; 2],
    pub edges_added: [u64; 2],
    /// The growing subset (V′ or Σ′), rendered with label names.
    pub tracked_set: Vec<String>,
    pub interesting_so_far: usize,
    pub detail: Option<Value>,
    /// Present when the tracked objects changed at this stage.
    pub tracked: Option<Tracked>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Violation {
        stage: usize,
        region: usize,
        vertices: Vec<VertexId>,
        violations: Vec<String>,
    },
    Divergence {
        stage: usize,
        pending: usize,
        sample: Vec<(VertexId, EdgeId)>,
    },
    BudgetExhausted {
        stage: usize,
        vertices: usize,
    },
}

impl Outcome {
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Violation { .. } => "VIOLATION",
            Outcome::Divergence { .. } => "DIVERGENCE",
            Outcome::BudgetExhausted { .. } => "BUDGET_EXHAUSTED",
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Outcome::Violation {
                stage,
                region,
                vertices,
                violations,
            } => json!({
                "type": "outcome", "outcome": self.kind(), "stage": stage, "region": region,
                "vertices": vertices.iter().map(|v| v.0).collect::<Vec<_>>(),
                "violations": violations,
            }),
            Outcome::Divergence {
                stage,
                pending,
                sample,
            } => json!({
                "type": "outcome", "outcome": self.kind(), "stage": stage, "pending": pending,
                "sample": sample.iter().map(|&(v, e)| json!([v.0, format!("e{}", e.0)])).collect::<Vec<_>>(),
            }),
            Outcome::BudgetExhausted { stage, vertices } => json!({
                "type": "outcome", "outcome": self.kind(), "stage": stage, "vertices": vertices,
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdversaryTranscript {
    pub mode: Mode,
    pub solver: String,
    pub stages: Vec<StageRecord>,
    pub outcome: Outcome,
    lcl: Lcl,
    build: Build,
}

impl AdversaryTranscript {
    pub fn final_graph(&self) -> HalfEdgeGraph {
        self.graph_at(usize::MAX)
    }

    /// The forest after stage `stage`.
    pub fn graph_at(&self, stage: usize) -> HalfEdgeGraph {
        self.build.graph_at(stage)
    }

    pub fn interesting_count(&self) -> usize {
        self.stages
            .iter()
            .filter(|s| s.case == Case::Interesting)
            .count()
    }

    pub fn stage_json(&self, r: &StageRecord) -> Value {
        let mut v = json!({
            "type": "stage",
            "stage": r.stage,
            "case": r.case.name(),
            "n": r.n,
            "vertices_added": r.vertices_added,
            "edges_added": r.edges_added,
            "tracked_set": r.tracked_set,
            "interesting_so_far": r.interesting_so_far,
        });
        if let Some(d) = &r.detail {
            v["detail"] = d.clone();
        }
        if let Some(t) = &r.tracked {
            v["tracked"] = t.to_json(&self.lcl);
        }
        v
    }

    /// One JSON object per stage, then the outcome, newline separated.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let header = json!({
            "type": "header",
            "mode": match self.mode { Mode::Hc => "hc", Mode::Comp => "comp" },
            "solver": self.solver,
        });
        out.push_str(&serde_json::to_string(&header).unwrap());
        out.push('\n');
        for r in &self.stages {
            out.push_str(&serde_json::to_string(&self.stage_json(r)).unwrap());
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&self.outcome.to_json()).unwrap());
        out.push('\n');
        out
    }

    /// Recheck the construction's invariants from the recorded stages.
    /// Returns a description of every breach found.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let fin = self.final_graph();
        if !fin.is_forest() {
            errs.push("final graph has a cycle".into());
        }
        let bound = match self.mode {
            Mode::Hc => self.lcl.vertex_constraints().len(),
            Mode::Comp => self.lcl.num_labels(),
        };
        if self.interesting_count() > bound {
            errs.push(format!("{} interesting cases exceed {bound}", self.interesting_count()));
        }
        let mut tracked: Option<&Tracked> = None;
        let mut prev_set = 0usize;
        let mut prev_n: Option<u64> = None;
        for r in &self.stages {
            if r.n < 1 {
                errs.push(format!("stage {}: N < 1", r.stage));
            }
            if r.case == Case::Interesting {
                if r.tracked_set.len() != prev_set + 1 {
                    errs.push(format!("stage {}: tracked set did not grow by one", r.stage));
                }
                let divisor = match self.mode {
                    Mode::Hc => 4 * bound as u64,
                    Mode::Comp => 2 * self.lcl.delta() as u64 * bound as u64,
                };
                if let Some(p) = prev_n {
                    if r.n * divisor + divisor < p {
                        errs.push(format!("stage {}: N shrank by more than {divisor}", r.stage));
                    }
                }
            } else if r.stage > 0 && r.tracked_set.len() != prev_set {
                errs.push(format!("stage {}: tracked set changed outside an interesting case", r.stage));
            }
            prev_set = r.tracked_set.len();
            prev_n = Some(r.n);
            if let Some(t) = &r.tracked {
                tracked = Some(t);
            }
            let g = self.graph_at(r.stage);
            if let Some(t) = tracked {
                let labels = g.component_labels();
                let mut seen = HashSet::new();
                for v in t.representatives() {
                    let Some(i) = g.vertex_index(v) else {
                        errs.push(format!("stage {}: tracked vertex {v} missing", r.stage));
                        continue;
                    };
                    if !seen.insert(labels[i]) {
                        errs.push(format!("stage {}: two tracked objects share a component", r.stage));
                        break;
                    }
                }
            }
            if self.mode == Mode::Hc && r.case == Case::Uninteresting {
                let older = r.vertices_added[0];
                if g.vertices()
                    .iter()
                    .any(|&v| v.0 < older && g.degree(v) < g.delta())
                {
                    errs.push(format!("stage {}: a capped vertex kept a virtual edge", r.stage));
                }
            }
        }
        errs
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AdversaryOptions {
    pub max_stages: usize,
    pub n0: Option<u64>,
    /// Stop with BUDGET_EXHAUSTED once the forest has more vertices.
    pub max_vertices: usize,
}

impl Default for AdversaryOptions {
    fn default() -> Self {
        AdversaryOptions {
            max_stages: 200,
            n0: None,
            max_vertices: 2_000_000,
        }
    }
}

fn default_n0(base: u64, exp: u32) -> u64 {
    base.max(1).checked_pow(exp).unwrap_or(u64::MAX)
}

/// Converged labels on all half edges at `vertices`, or the pending ones.
fn query(
    solver: &dyn OnlineSolver,
    build: &Build,
    stage: usize,
    vertices: &[VertexId],
) -> std::result::Result<Coloring, Vec<(VertexId, EdgeId)>> {
    let oracle = Oracle {
        build,
        current: stage,
    };
    let mut c = Coloring::new();
    let mut pending = Vec::new();
    for &v in vertices {
        for &e in build.incident(v) {
            match solver.answer(v, e, stage - 1, &oracle) {
                SolverAnswer::Converged(l) => {
                    c.set(v, e, l);
                }
                SolverAnswer::NotYet => pending.push((v, e)),
            }
        }
    }
    if pending.is_empty() {
        Ok(c)
    } else {
        Err(pending)
    }
}

fn star_of(solver: &dyn OnlineSolver, build: &Build, stage: usize, v: VertexId) -> Result<Vec<(EdgeId, Label)>> {
    let c = query(solver, build, stage, &[v]).map_err(|_| {
        Error::InvariantBreach(format!("solver withdrew a converged answer at {v}"))
    })?;
    Ok(build.incident(v).iter().map(|&e| (e, c.get(v, e).unwrap())).collect())
}

fn multiset_of(star: &[(EdgeId, Label)]) -> LabelMultiset {
    star.iter().map(|&(_, l)| l).collect()
}

/// Check a region's converged labels; violations rendered for the transcript.
fn region_violations(
    build: &Build,
    lcl: &Lcl,
    region: &BTreeSet<VertexId>,
    labels: &Coloring,
) -> Vec<String> {
    let (g, ids) = build.region_graph(region);
    let local: Coloring = g
        .half_edges()
        .map(|(v, le)| ((v, le), labels.get(v, ids[le.index()]).unwrap()))
        .collect();
    verify_coloring(&g, lcl, &local)
        .violations
        .into_iter()
        .map(|v| match v {
            ColoringViolation::Edge { edge, observed } => {
                format!("edge e{} carries {}", ids[edge.index()].0, lcl.show(&observed))
            }
            ColoringViolation::Vertex { vertex, observed } => {
                format!("vertex {vertex} carries {}", lcl.show(&observed))
            }
            ColoringViolation::Incomplete(h) => format!("{} half edges unlabeled", h.len()),
        })
        .collect()
}

enum Round {
    Outcome(Outcome),
    AllValid(Vec<Coloring>),
    Uninteresting(Vec<(VertexId, EdgeId)>),
}

fn play_round(
    solver: &dyn OnlineSolver,
    build: &Build,
    lcl: &Lcl,
    stage: usize,
    regions: &[BTreeSet<VertexId>],
) -> Round {
    let mut colorings = Vec::with_capacity(regions.len());
    let mut pending_all = Vec::new();
    for (i, region) in regions.iter().enumerate() {
        let vs: Vec<VertexId> = region.iter().copied().collect();
        match query(solver, build, stage, &vs) {
            Ok(c) => {
                let bad = region_violations(build, lcl, region, &c);
                if !bad.is_empty() {
                    return Round::Outcome(Outcome::Violation {
                        stage,
                        region: i,
                        vertices: vs,
                        violations: bad,
                    });
                }
                colorings.push(c);
            }
            Err(p) => pending_all.extend(p),
        }
    }
    if pending_all.is_empty() {
        Round::AllValid(colorings)
    } else {
        Round::Uninteresting(pending_all)
    }
}

fn divergence(stage: usize, pending: Vec<(VertexId, EdgeId)>) -> Outcome {
    Outcome::Divergence {
        stage,
        pending: pending.len(),
        sample: pending.into_iter().take(16).collect(),
    }
}

fn majority<T: Ord + Clone>(items: impl Iterator<Item = T>) -> Option<T> {
    let mut counts: BTreeMap<T, usize> = BTreeMap::new();
    for t in items {
        *counts.entry(t).or_default() += 1;
    }
    // ties go to the least key
    counts
        .into_iter()
        .fold(None, |best: Option<(T, usize)>, (k, c)| match best {
            Some((_, bc)) if bc >= c => best,
            _ => Some((k, c)),
        })
        .map(|(k, _)| k)
}

fn check_distinct(build: &Build, tracked: &Tracked, stage: usize) -> Result<()> {
    let mut seen = HashSet::new();
    for v in tracked.representatives() {
        if !seen.insert(build.find(v)) {
            return Err(Error::InvariantBreach(format!(
                "stage {stage}: two tracked objects share a component"
            )));
        }
    }
    Ok(())
}

struct Runner<'a> {
    lcl: &'a Lcl,
    solver: &'a dyn OnlineSolver,
    opts: AdversaryOptions,
    build: Build,
    stages: Vec<StageRecord>,
    interesting: usize,
}

impl<'a> Runner<'a> {
    fn mark(&self) -> (u64, u64) {
        (self.build.num_vertices() as u64, self.build.ebirth.len() as u64)
    }

    #[allow(clippy::too_many_arguments)]
    fn record(
        &mut self,
        stage: usize,
        case: Case,
        n: u64,
        before: (u64, u64),
        tracked_set: Vec<String>,
        detail: Option<Value>,
        tracked: Option<Tracked>,
    ) {
        let after = self.mark();
        self.stages.push(StageRecord {
            stage,
            case,
            n,
            vertices_added: [before.0, after.0],
            edges_added: [before.1, after.1],
            tracked_set,
            interesting_so_far: self.interesting,
            detail,
            tracked,
        });
    }

    fn finish(self, mode: Mode, outcome: Outcome) -> AdversaryTranscript {
        AdversaryTranscript {
            mode,
            solver: self.solver.describe(),
            stages: self.stages,
            outcome,
            lcl: self.lcl.clone(),
            build: self.build,
        }
    }

    fn over_budget(&self) -> bool {
        self.build.num_vertices() > self.opts.max_vertices
    }
}

/// From `v`, follow its `alpha` half edge and keep moving away from `v` until
/// a virtual edge is reached. Returns the vertices walked and that edge.
fn walk_to_virtual(
    build: &Build,
    v: VertexId,
    star: &[(EdgeId, Label)],
    alpha: Label,
) -> Result<(Vec<VertexId>, EdgeId)> {
    let &(first, _) = star
        .iter()
        .filter(|&&(_, l)| l == alpha)
        .min_by_key(|&&(e, _)| e)
        .ok_or_else(|| Error::InvariantBreach(format!("{v} has no half edge labeled {alpha}")))?;
    let mut path = vec![v];
    let mut edge = first;
    loop {
        if build.is_virtual(edge) {
            return Ok((path, edge));
        }
        let here = *path.last().unwrap();
        let next = build.other(edge, here).unwrap();
        path.push(next);
        let from = edge;
        let mut incident: Vec<EdgeId> = build.incident(next).to_vec();
        incident.sort();
        edge = match incident.iter().find(|&&f| build.is_virtual(f)) {
            Some(&f) => f,
            None => *incident
                .iter()
                .filter(|&&f| f != from)
                .min_by_key(|&&f| build.other(f, next))
                .ok_or_else(|| Error::InvariantBreach("walk reached a dead end".into()))?,
        };
    }
}

/// The construction against solvers for a problem that is not full.
pub fn run_hc_adversary(
    lcl: &Lcl,
    solver: &dyn OnlineSolver,
    opts: AdversaryOptions,
) -> Result<AdversaryTranscript> {
    if decide_fullness(lcl, DecideOptions::default())?.is_some() {
        return Err(Error::LclIsFull);
    }
    let delta = lcl.delta();
    let nv = lcl.vertex_constraints().len() as u64;
    let n0 = opts
        .n0
        .unwrap_or_else(|| default_n0(4 * nv, nv as u32 + 1));
    let mut run = Runner {
        lcl,
        solver,
        opts,
        build: Build::new(delta),
        stages: Vec::new(),
        interesting: 0,
    };
    if n0 as u128 > opts.max_vertices as u128 {
        return Ok(run.finish(
            Mode::Hc,
            Outcome::BudgetExhausted {
                stage: 0,
                vertices: 0,
            },
        ));
    }
    let before = run.mark();
    let mut paths: Vec<Vec<VertexId>> = Vec::new();
    for _ in 0..n0 {
        let x = run.build.add_vertex(0);
        for _ in 0..delta {
            run.build.add_virtual(x, 0);
        }
        paths.push(vec![x]);
    }
    let mut v_prime: Vec<LabelMultiset> = Vec::new();
    let mut reserves: BTreeMap<LabelMultiset, Vec<VertexId>> = BTreeMap::new();
    let mut n = n0;
    let mut longest = 0usize;
    let show = |vp: &[LabelMultiset]| vp.iter().map(|m| lcl.show(m)).collect::<Vec<_>>();
    let tracked = Tracked::Hc {
        paths: paths.clone(),
        reserves: reserves.clone(),
    };
    check_distinct(&run.build, &tracked, 0)?;
    run.record(0, Case::Initial, n, before, vec![], None, Some(tracked));

    for stage in 1..=opts.max_stages {
        let regions: Vec<BTreeSet<VertexId>> =
            paths.iter().map(|p| p.iter().copied().collect()).collect();
        let before = run.mark();
        let mut pending = Vec::new();
        match play_round(solver, &run.build, lcl, stage, &regions) {
            Round::Outcome(o) => return Ok(run.finish(Mode::Hc, o)),
            Round::Uninteresting(p) => {
                pending = p;
                let open: Vec<EdgeId> = run.build.open.iter().copied().collect();
                for e in open {
                    let x = run.build.add_vertex(stage);
                    run.build.attach(e, x, stage)?;
                    for _ in 1..delta {
                        run.build.add_virtual(x, stage);
                    }
                }
                run.record(stage, Case::Uninteresting, n, before, show(&v_prime), None, None);
            }
            Round::AllValid(colorings) => {
                if v_prime.len() == lcl.vertex_constraints().len() {
                    return Err(Error::InvariantBreach(
                        "solver colored paths that admit no coloring".into(),
                    ));
                }
                run.interesting += 1;
                // z_i: least vertex of P_i whose star is outside V′
                let mut zs: Vec<(VertexId, LabelMultiset)> = Vec::new();
                for (p, c) in paths.iter().zip(&colorings) {
                    let mut sorted = p.clone();
                    sorted.sort();
                    let z = sorted
                        .into_iter()
                        .map(|x| (x, c.star_multiset_at(&run.build.vedges[x.0 as usize], x)))
                        .find(|(_, m)| !v_prime.contains(m))
                        .ok_or_else(|| {
                            Error::InvariantBreach("a colored path stays inside V′".into())
                        })?;
                    zs.push(z);
                }
                let d = majority(zs.iter().map(|(_, m)| m.clone())).unwrap();
                v_prime.push(d.clone());
                v_prime.sort();
                let w: BadPathWitness = find_bad_path_witness(lcl, &v_prime)?;
                let m = n / (2 * nv);
                let half = m / 2;
                if half < 1 {
                    return Err(Error::InvariantBreach(format!(
                        "stage {stage}: N fell below 1; N0 is too small"
                    )));
                }
                let d_list: Vec<VertexId> = zs
                    .iter()
                    .filter(|(_, ms)| *ms == d)
                    .map(|&(z, _)| z)
                    .collect();
                let cands = |c: &LabelMultiset| -> Vec<VertexId> {
                    if *c == d {
                        d_list.clone()
                    } else {
                        reserves.get(c).cloned().unwrap_or_default()
                    }
                };
                let m_us = m as usize;
                let (vs, ws): (Vec<VertexId>, Vec<VertexId>) = if w.a == w.b {
                    let l = cands(&w.a);
                    if l.len() < 2 * m_us {
                        return Err(Error::InvariantBreach("too few candidate endpoints".into()));
                    }
                    (l[..m_us].to_vec(), l[m_us..2 * m_us].to_vec())
                } else {
                    let (la, lb) = (cands(&w.a), cands(&w.b));
                    if la.len() < m_us || lb.len() < m_us {
                        return Err(Error::InvariantBreach("too few candidate endpoints".into()));
                    }
                    (la[..m_us].to_vec(), lb[..m_us].to_vec())
                };
                let mut new_paths = Vec::new();
                let mut lengths = Vec::new();
                for i in 0..half as usize {
                    let sv = star_of(solver, &run.build, stage, vs[i])?;
                    let sw = star_of(solver, &run.build, stage, ws[i])?;
                    if multiset_of(&sv) != w.a || multiset_of(&sw) != w.b {
                        return Err(Error::InvariantBreach("endpoint star changed".into()));
                    }
                    let (pv, e) = walk_to_virtual(&run.build, vs[i], &sv, w.alpha)?;
                    let (pw, f) = walk_to_virtual(&run.build, ws[i], &sw, w.beta)?;
                    let (p, q) = (pv.len() - 1, pw.len() - 1);
                    let len = w.least_bad_from((p + q + 2).max(longest + 1).max(stage + 1));
                    let j = len - p - q - 1;
                    let chain: Vec<VertexId> = (0..j).map(|_| run.build.add_vertex(stage)).collect();
                    run.build.attach(e, chain[0], stage)?;
                    for k in 0..j - 1 {
                        let link = run.build.add_virtual(chain[k], stage);
                        run.build.attach(link, chain[k + 1], stage)?;
                    }
                    run.build.attach(f, chain[j - 1], stage)?;
                    for &x in &chain {
                        for _ in 2..delta {
                            run.build.add_virtual(x, stage);
                        }
                    }
                    let mut path = pv;
                    path.extend(chain);
                    path.extend(pw.into_iter().rev());
                    debug_assert_eq!(path.len(), len + 1);
                    longest = longest.max(len);
                    lengths.push(len);
                    new_paths.push(path);
                }
                let mut new_res = BTreeMap::new();
                for c in &v_prime {
                    let ys: Vec<VertexId> = if *c == w.a {
                        vs[half as usize..].to_vec()
                    } else if *c == w.b {
                        ws[half as usize..].to_vec()
                    } else if *c == d {
                        d_list[..half as usize].to_vec()
                    } else {
                        reserves[c][..half as usize].to_vec()
                    };
                    new_res.insert(c.clone(), ys[..half as usize].to_vec());
                }
                paths = new_paths;
                reserves = new_res;
                n = half;
                let detail = json!({
                    "d": lcl.show(&d),
                    "witness": w.to_json(lcl),
                    "m": m,
                    "path_lengths": lengths,
                });
                let tracked = Tracked::Hc {
                    paths: paths.clone(),
                    reserves: reserves.clone(),
                };
                check_distinct(&run.build, &tracked, stage)?;
                run.record(stage, Case::Interesting, n, before, show(&v_prime), Some(detail), Some(tracked));
            }
        }
        if run.over_budget() {
            let vertices = run.build.num_vertices();
            return Ok(run.finish(Mode::Hc, Outcome::BudgetExhausted { stage, vertices }));
        }
        if stage == opts.max_stages {
            return Ok(run.finish(Mode::Hc, divergence(stage, pending)));
        }
    }
    Ok(run.finish(Mode::Hc, divergence(0, Vec::new())))
}

/// The construction against solvers for a problem that is not greedy.
/// Virtual edges are never capped, so the solver cannot tell a virtual edge
/// from one that will become true.
pub fn run_comp_adversary(
    lcl: &Lcl,
    solver: &dyn OnlineSolver,
    opts: AdversaryOptions,
) -> Result<AdversaryTranscript> {
    if decide_greediness(lcl, DecideOptions::default())?.is_some() {
        return Err(Error::LclIsGreedy);
    }
    let delta = lcl.delta();
    let ns = lcl.num_labels() as u64;
    let n0 = opts
        .n0
        .unwrap_or_else(|| default_n0(2 * delta as u64 * ns, ns as u32 + 1));
    let mut run = Runner {
        lcl,
        solver,
        opts,
        build: Build::new(delta),
        stages: Vec::new(),
        interesting: 0,
    };
    if n0 as u128 > opts.max_vertices as u128 {
        return Ok(run.finish(
            Mode::Comp,
            Outcome::BudgetExhausted {
                stage: 0,
                vertices: 0,
            },
        ));
    }
    let before = run.mark();
    let mut centers: Vec<VertexId> = Vec::new();
    for _ in 0..n0 {
        let x = run.build.add_vertex(0);
        for _ in 0..delta {
            run.build.add_virtual(x, 0);
        }
        centers.push(x);
    }
    let mut sigma_prime: Vec<Label> = Vec::new();
    let mut reserves: BTreeMap<Label, Vec<(VertexId, EdgeId)>> = BTreeMap::new();
    let mut n = n0;
    let names = |sp: &[Label]| sp.iter().map(|&l| lcl.label_name(l).to_string()).collect::<Vec<_>>();
    let tracked = Tracked::Comp {
        centers: centers.clone(),
        reserves: reserves.clone(),
    };
    check_distinct(&run.build, &tracked, 0)?;
    run.record(0, Case::Initial, n, before, vec![], None, Some(tracked));

    for stage in 1..=opts.max_stages {
        let regions: Vec<BTreeSet<VertexId>> = centers
            .iter()
            .map(|&x| std::iter::once(x).chain(run.build.neighbors(x)).collect())
            .collect();
        let before = run.mark();
        let mut pending = Vec::new();
        match play_round(solver, &run.build, lcl, stage, &regions) {
            Round::Outcome(o) => return Ok(run.finish(Mode::Comp, o)),
            Round::Uninteresting(p) => {
                pending = p;
                run.record(stage, Case::Uninteresting, n, before, names(&sigma_prime), None, None);
            }
            Round::AllValid(colorings) => {
                if sigma_prime.len() == lcl.num_labels() {
                    return Err(Error::InvariantBreach(
                        "solver colored stars that admit no coloring".into(),
                    ));
                }
                run.interesting += 1;
                let sp_mask: Mask = sigma_prime.iter().fold(0, |m, &l| m | bit(l));
                let mut fs: Vec<(VertexId, EdgeId, Label)> = Vec::new();
                for (&x, c) in centers.iter().zip(&colorings) {
                    let f = run
                        .build
                        .incident(x)
                        .iter()
                        .copied()
                        .filter(|&e| run.build.is_virtual(e))
                        .map(|e| (e, c.get(x, e).unwrap()))
                        .filter(|&(_, l)| sp_mask & bit(l) == 0)
                        .min_by_key(|&(e, _)| e)
                        .ok_or_else(|| {
                            Error::InvariantBreach("a colored star stays inside Σ′".into())
                        })?;
                    fs.push((x, f.0, f.1));
                }
                let beta = majority(fs.iter().map(|&(_, _, l)| l)).unwrap();
                sigma_prime.push(beta);
                sigma_prime.sort();
                let bad = find_bad_star_witness(lcl, &sigma_prime)?;
                let m = n / (delta as u64 * ns);
                let half = m / 2;
                if half < 1 {
                    return Err(Error::InvariantBreach(format!(
                        "stage {stage}: N fell below 1; N0 is too small"
                    )));
                }
                let beta_list: Vec<(VertexId, EdgeId)> = fs
                    .iter()
                    .filter(|&&(_, _, l)| l == beta)
                    .map(|&(x, e, _)| (x, e))
                    .collect();
                let m_us = m as usize;
                let mut taken: BTreeMap<Label, usize> = BTreeMap::new();
                let mut picks: Vec<Vec<(VertexId, EdgeId)>> = Vec::new();
                for &a in &bad.alphas {
                    let list = if a == beta {
                        &beta_list
                    } else {
                        reserves.get(&a).ok_or_else(|| {
                            Error::InvariantBreach(format!("no reserve for {a}"))
                        })?
                    };
                    let from = taken.entry(a).or_insert(0);
                    if list.len() < *from + m_us {
                        return Err(Error::InvariantBreach("too few reserve half edges".into()));
                    }
                    picks.push(list[*from..*from + m_us].to_vec());
                    *from += m_us;
                }
                let oracle_stage = stage;
                let mut new_centers = Vec::new();
                for i in 0..half as usize {
                    for (j, pick) in picks.iter().enumerate() {
                        let (z, g) = pick[i];
                        let got = star_of(solver, &run.build, oracle_stage, z)?
                            .into_iter()
                            .find(|&(e, _)| e == g)
                            .map(|(_, l)| l);
                        if got != Some(bad.alphas[j]) || !run.build.is_virtual(g) {
                            return Err(Error::InvariantBreach("reserve half edge changed".into()));
                        }
                    }
                    let v = run.build.add_vertex(stage);
                    for pick in &picks {
                        run.build.attach(pick[i].1, v, stage)?;
                    }
                    for _ in bad.k..delta {
                        run.build.add_virtual(v, stage);
                    }
                    new_centers.push(v);
                }
                let mut new_res = BTreeMap::new();
                for &a in &sigma_prime {
                    let ys: Vec<(VertexId, EdgeId)> =
                        if let Some(j) = bad.alphas.iter().position(|&x| x == a) {
                            picks[j][half as usize..].to_vec()
                        } else if a == beta {
                            beta_list[..half as usize].to_vec()
                        } else {
                            reserves[&a][..half as usize].to_vec()
                        };
                    new_res.insert(a, ys[..half as usize].to_vec());
                }
                centers = new_centers;
                reserves = new_res;
                n = half;
                let detail = json!({
                    "beta": lcl.label_name(beta),
                    "witness": bad.to_json(lcl),
                    "m": m,
                });
                let tracked = Tracked::Comp {
                    centers: centers.clone(),
                    reserves: reserves.clone(),
                };
                check_distinct(&run.build, &tracked, stage)?;
                run.record(stage, Case::Interesting, n, before, names(&sigma_prime), Some(detail), Some(tracked));
            }
        }
        if run.over_budget() {
            let vertices = run.build.num_vertices();
            return Ok(run.finish(Mode::Comp, Outcome::BudgetExhausted { stage, vertices }));
        }
        if stage == opts.max_stages {
            return Ok(run.finish(Mode::Comp, divergence(stage, pending)));
        }
    }
    Ok(run.finish(Mode::Comp, divergence(0, Vec::new())))
}

trait StarAt {
    fn star_multiset_at(&self, edges: &[EdgeId], v: VertexId) -> LabelMultiset;
}

impl StarAt for Coloring {
    fn star_multiset_at(&self, edges: &[EdgeId], v: VertexId) -> LabelMultiset {
        edges.iter().map(|&e| self.get(v, e).unwrap()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(delta: usize, n: usize) -> Lcl {
        let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let sigma: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let vs: Vec<Vec<&str>> = sigma.iter().map(|&s| vec![s; delta]).collect();
        let vs_ref: Vec<&[&str]> = vs.iter().map(|v| v.as_slice()).collect();
        let mut es = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                es.push([sigma[a], sigma[b]]);
            }
        }
        Lcl::from_names(delta, &sigma, &vs_ref, &es).unwrap()
    }

    fn opts(max_stages: usize, n0: Option<u64>) -> AdversaryOptions {
        AdversaryOptions {
            max_stages,
            n0,
            ..Default::default()
        }
    }

    #[test]
    fn oracle_hides_the_current_stage() {
        let mut b = Build::new(2);
        let x = b.add_vertex(0);
        let e = b.add_virtual(x, 0);
        b.add_virtual(x, 0);
        let y = b.add_vertex(1);
        b.attach(e, y, 1).unwrap();
        b.add_virtual(y, 1);
        let o = Oracle { build: &b, current: 1 };
        assert_eq!(o.vertex_exists(x, 0), Tri::Yes);
        assert_eq!(o.vertex_exists(y, 0), Tri::No);
        assert_eq!(o.vertex_exists(y, 1), Tri::Undetermined);
        assert_eq!(o.true_edge(e, 0), Tri::No);
        let o = Oracle { build: &b, current: 2 };
        assert_eq!(o.true_edge(e, 1), Tri::Yes);
        assert_eq!(o.incidence(y, e, 1), Tri::Yes);
        assert_eq!(o.endpoints(e, 0), Some(vec![x]));
    }

    #[test]
    fn cycles_are_refused() {
        let mut b = Build::new(2);
        let x = b.add_vertex(0);
        let e = b.add_virtual(x, 0);
        let f = b.add_virtual(x, 0);
        let y = b.add_vertex(1);
        b.attach(e, y, 1).unwrap();
        assert!(matches!(b.attach(f, y, 1), Err(Error::InvariantBreach(_))));
    }

    #[test]
    fn guards_refuse_classified_problems() {
        let k3 = k(2, 3);
        let s = Silent;
        assert!(matches!(
            run_hc_adversary(&k3, &s, opts(5, None)),
            Err(Error::LclIsFull)
        ));
        let k4 = k(3, 4);
        assert!(matches!(
            run_comp_adversary(&k4, &s, opts(5, None)),
            Err(Error::LclIsGreedy)
        ));
        let replay = builtin_solver("builtin:replay", &k4).unwrap();
        assert!(matches!(
            run_comp_adversary(&k4, replay.as_ref(), opts(5, None)),
            Err(Error::LclIsGreedy)
        ));
    }

    #[test]
    fn silent_solver_diverges() {
        let k2 = k(2, 2);
        let t = run_hc_adversary(&k2, &Silent, opts(6, Some(8))).unwrap();
        assert_eq!(t.outcome.kind(), "DIVERGENCE");
        assert_eq!(t.interesting_count(), 0);
        assert!(t.check_invariants().is_empty(), "{:?}", t.check_invariants());
        let k3 = k(3, 3);
        let t = run_comp_adversary(&k3, &Silent, opts(6, Some(50))).unwrap();
        assert_eq!(t.outcome.kind(), "DIVERGENCE");
        assert_eq!(t.interesting_count(), 0);
    }

    #[test]
    fn oblivious_solver_is_caught() {
        let k2 = k(2, 2);
        let s = builtin_solver("builtin:oblivious:1", &k2).unwrap();
        let t = run_hc_adversary(&k2, s.as_ref(), opts(20, None)).unwrap();
        assert_eq!(t.outcome.kind(), "VIOLATION");
        assert_eq!(t.stages[1].case, Case::Interesting);
        assert!(t.check_invariants().is_empty(), "{:?}", t.check_invariants());
    }

    #[test]
    fn lookahead_zero_uses_only_its_own_star() {
        let k2 = k(2, 2);
        let mut b = Build::new(2);
        let x = b.add_vertex(0);
        let e = b.add_virtual(x, 0);
        b.add_virtual(x, 0);
        let look = Lookahead::new(&k2, 0);
        let o = Oracle { build: &b, current: 2 };
        assert_eq!(look.answer(x, e, 1, &o), SolverAnswer::Converged(Label(0)));
    }

    #[test]
    fn spec_parsing() {
        let k2 = k(2, 2);
        assert!(builtin_solver("builtin:lookahead:2", &k2).is_ok());
        assert!(matches!(
            builtin_solver("builtin:oblivious:9", &k2),
            Err(Error::BadParameter(_))
        ));
        assert!(matches!(builtin_solver("nope", &k2), Err(Error::BadParameter(_))));
        assert!(matches!(
            builtin_solver("builtin:replay", &k2),
            Err(Error::BadParameter(_))
        ));
    }
}
