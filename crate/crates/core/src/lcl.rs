//! Labels, label multisets and the LCL triple.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a label in its problem's alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u16);

impl Label {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A multiset of labels, stored canonically as a sorted list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelMultiset(Vec<Label>);

impl LabelMultiset {
    pub fn new(mut labels: Vec<Label>) -> Self {
        labels.sort_unstable();
        LabelMultiset(labels)
    }

    pub fn pair(a: Label, b: Label) -> Self {
        Self::new(vec![a, b])
    }

    pub fn constant(label: Label, size: usize) -> Self {
        LabelMultiset(vec![label; size])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Labels in ascending order, with repetition.
    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn count(&self, label: Label) -> usize {
        self.0.iter().filter(|&&l| l == label).count()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    /// Distinct labels in ascending order.
    pub fn distinct(&self) -> Vec<Label> {
        let mut out = self.0.clone();
        out.dedup();
        out
    }

    /// Whether `other` is a sub-multiset of `self`.
    pub fn contains_all(&self, other: &LabelMultiset) -> bool {
        let mut it = self.0.iter().peekable();
        'outer: for l in &other.0 {
            while let Some(&&m) = it.peek() {
                it.next();
                if m == *l {
                    continue 'outer;
                }
                if m > *l {
                    return false;
                }
            }
            return false;
        }
        true
    }

    /// Copy with one occurrence of `label` removed, if present.
    pub fn without(&self, label: Label) -> Option<LabelMultiset> {
        let pos = self.0.iter().position(|&l| l == label)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(LabelMultiset(v))
    }
}

impl FromIterator<Label> for LabelMultiset {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        LabelMultiset::new(iter.into_iter().collect())
    }
}

/// A locally checkable labeling problem on Δ-regular graphs.
///
/// Vertex and edge constraints are kept sorted and deduplicated; the sorted
/// order is the canonical order every enumeration in this crate follows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lcl {
    delta: usize,
    sigma: Vec<String>,
    vertex_constraints: Vec<LabelMultiset>,
    edge_constraints: Vec<LabelMultiset>,
    edge_ok: Vec<bool>,
}

impl Lcl {
    pub fn new(
        delta: usize,
        sigma: Vec<String>,
        vertex_constraints: Vec<LabelMultiset>,
        edge_constraints: Vec<LabelMultiset>,
    ) -> Result<Self> {
        if delta < 2 {
            return Err(Error::DeltaTooSmall { min: 2, got: delta });
        }
        if sigma.len() > u16::MAX as usize {
            return Err(Error::Semantic("alphabet too large".into()));
        }
        let mut seen = BTreeSet::new();
        for name in &sigma {
            if !seen.insert(name) {
                return Err(Error::Semantic(format!("label {name:?} listed twice")));
            }
        }
        let n = sigma.len();
        let check = |ms: &LabelMultiset, size: usize, what: &str| -> Result<()> {
            if ms.len() != size {
                return Err(Error::Semantic(format!(
                    "{what} constraint has size {}, expected {size}",
                    ms.len()
                )));
            }
            if let Some(l) = ms.labels().iter().find(|l| l.index() >= n) {
                return Err(Error::Semantic(format!("label {l} is not in sigma")));
            }
            Ok(())
        };
        let mut vs = vertex_constraints;
        for v in &vs {
            check(v, delta, "vertex")?;
        }
        let mut es = edge_constraints;
        for e in &es {
            check(e, 2, "edge")?;
        }
        vs.sort();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Semantic("duplicate vertex constraint".into()));
        }
        es.sort();
        if es.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Semantic("duplicate edge constraint".into()));
        }
        let mut edge_ok = vec![false; n * n];
        for e in &es {
            let (a, b) = (e.labels()[0].index(), e.labels()[1].index());
            edge_ok[a * n + b] = true;
            edge_ok[b * n + a] = true;
        }
        Ok(Lcl {
            delta,
            sigma,
            vertex_constraints: vs,
            edge_constraints: es,
            edge_ok,
        })
    }

    /// Build from label names; convenient for tests and examples.
    pub fn from_names(
        delta: usize,
        sigma: &[&str],
        vertex_constraints: &[&[&str]],
        edge_constraints: &[[&str; 2]],
    ) -> Result<Self> {
        let sigma: Vec<String> = sigma.iter().map(|s| s.to_string()).collect();
        let lookup = |name: &str| -> Result<Label> {
            sigma
                .iter()
                .position(|s| s == name)
                .map(|i| Label(i as u16))
                .ok_or_else(|| Error::Semantic(format!("label {name:?} is not in sigma")))
        };
        let vs = vertex_constraints
            .iter()
            .map(|v| v.iter().map(|n| lookup(n)).collect::<Result<LabelMultiset>>())
            .collect::<Result<Vec<_>>>()?;
        let es = edge_constraints
            .iter()
            .map(|[a, b]| Ok(LabelMultiset::pair(lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Lcl::new(delta, sigma, vs, es)
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn sigma(&self) -> &[String] {
        &self.sigma
    }

    pub fn num_labels(&self) -> usize {
        self.sigma.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + Clone {
        (0..self.sigma.len() as u16).map(Label)
    }

    pub fn label_name(&self, label: Label) -> &str {
        &self.sigma[label.index()]
    }

    pub fn label_by_name(&self, name: &str) -> Option<Label> {
        self.sigma
            .iter()
            .position(|s| s == name)
            .map(|i| Label(i as u16))
    }

    pub fn vertex_constraints(&self) -> &[LabelMultiset] {
        &self.vertex_constraints
    }

    pub fn edge_constraints(&self) -> &[LabelMultiset] {
        &self.edge_constraints
    }

    #[inline]
    pub fn edge_allowed(&self, a: Label, b: Label) -> bool {
        self.edge_ok[a.index() * self.sigma.len() + b.index()]
    }

    pub fn vertex_allowed(&self, star: &LabelMultiset) -> bool {
        self.vertex_constraints.binary_search(star).is_ok()
    }

    /// Render a multiset with label names, e.g. `{1,1}`.
    pub fn show(&self, ms: &LabelMultiset) -> String {
        let names: Vec<&str> = ms.labels().iter().map(|&l| self.label_name(l)).collect();
        format!("{{{}}}", names.join(","))
    }
}
