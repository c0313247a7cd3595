//! Deciders for fullness and greediness, with certificates and the bad
//! witnesses consumed by the adversaries.
//!
//! Fullness reduces to reachability along a path: the label on the forward
//! half edge of each internal vertex is the state, and one step through a
//! vertex is a Boolean matrix. Good lengths are read from the eventually
//! periodic sequence of its powers.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::io::{multiset_from_names, multiset_names};
use crate::lcl::{Label, LabelMultiset, Lcl};
use crate::par::{self, Exec};
use crate::treesolve::{arrange, bit, mask_labels, Mask, MAX_LABELS};

/// One internal path vertex as a relation on forward labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransitionMatrix {
    n: usize,
    rows: Vec<Mask>,
}

impl TransitionMatrix {
    pub fn identity(n: usize) -> Self {
        TransitionMatrix {
            n,
            rows: (0..n).map(|i| 1u64 << i).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: Label, t: Label) -> bool {
        self.rows[s.index()] & bit(t) != 0
    }

    pub fn row(&self, s: Label) -> Mask {
        self.rows[s.index()]
    }

    pub fn mul(&self, other: &TransitionMatrix) -> TransitionMatrix {
        let rows = self
            .rows
            .iter()
            .map(|&r| mask_labels(r).fold(0, |acc, k| acc | other.rows[k.index()]))
            .collect();
        TransitionMatrix { n: self.n, rows }
    }
}

fn check_subset(lcl: &Lcl, v_prime: &[LabelMultiset]) -> Result<()> {
    if lcl.num_labels() > MAX_LABELS {
        return Err(Error::BadParameter(format!(
            "at most {MAX_LABELS} labels are supported"
        )));
    }
    if v_prime.is_empty() {
        return Err(Error::EmptySubset);
    }
    if let Some(m) = v_prime.iter().find(|m| !lcl.vertex_allowed(m)) {
        return Err(Error::BadParameter(format!(
            "{} is not a vertex constraint",
            lcl.show(m)
        )));
    }
    Ok(())
}

/// `M[s][t]` iff some `u` has `{s,u}` in ℰ and some `v` in `v_prime`
/// contains `{u,t}`.
pub fn transition_matrix(lcl: &Lcl, v_prime: &[LabelMultiset]) -> Result<TransitionMatrix> {
    check_subset(lcl, v_prime)?;
    let n = lcl.num_labels();
    // inner[u] = labels t such that some v ⊇ {u, t}
    let mut inner = vec![0 as Mask; n];
    for v in v_prime {
        for u in v.distinct() {
            let rest = v.without(u).unwrap();
            for &t in rest.labels() {
                inner[u.index()] |= bit(t);
            }
        }
    }
    let rows = lcl
        .labels()
        .map(|s| {
            lcl.labels()
                .filter(|&u| lcl.edge_allowed(s, u))
                .fold(0, |acc, u| acc | inner[u.index()])
        })
        .collect();
    Ok(TransitionMatrix { n, rows })
}

/// An eventually periodic subset of `{1, 2, 3, ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthSet {
    pub good_prefix: Vec<bool>,
    pub good_residues: Vec<bool>,
    pub period: usize,
    pub preperiod: usize,
}

impl LengthSet {
    /// From an explicit prefix and periodic tail; reduced to the least period
    /// and then the least preperiod.
    pub fn new(prefix: Vec<bool>, residues: Vec<bool>) -> Self {
        assert!(!residues.is_empty(), "period must be positive");
        let q = residues.len();
        let period = (1..=q)
            .find(|d| q % d == 0 && (0..q).all(|i| residues[i] == residues[i % d]))
            .unwrap();
        let mut residues: Vec<bool> = residues[..period].to_vec();
        let mut prefix = prefix;
        // shrink the preperiod while the last prefix entry fits the cycle
        while let Some(&last) = prefix.last() {
            if last != residues[period - 1] {
                break;
            }
            prefix.pop();
            residues.rotate_right(1);
        }
        LengthSet {
            preperiod: prefix.len(),
            good_prefix: prefix,
            period,
            good_residues: residues,
        }
    }

    pub fn contains(&self, len: usize) -> bool {
        assert!(len >= 1, "lengths start at 1");
        if len <= self.preperiod {
            self.good_prefix[len - 1]
        } else {
            self.good_residues[(len - self.preperiod - 1) % self.period]
        }
    }

    /// Whether all but finitely many lengths belong to the set.
    pub fn is_cofinite(&self) -> bool {
        self.good_residues.iter().all(|&b| b)
    }

    /// Whether infinitely many lengths are missing.
    pub fn has_infinite_complement(&self) -> bool {
        !self.is_cofinite()
    }

    /// Least `l >= 1` with every `L >= l` in the set.
    pub fn threshold(&self) -> Option<usize> {
        if !self.is_cofinite() {
            return None;
        }
        Some(
            self.good_prefix
                .iter()
                .rposition(|&g| !g)
                .map_or(1, |i| i + 2),
        )
    }

    /// Least missing length that is at least `from`.
    pub fn least_missing_from(&self, from: usize) -> Option<usize> {
        let from = from.max(1);
        let horizon = from.max(self.preperiod + 1) + self.period;
        (from..horizon).find(|&l| !self.contains(l))
    }
}

/// Lengths `L` for which the path of length `L` with endpoint stars `a`, `b`
/// (path half edges `alpha`, `beta`) extends inside `v_prime`.
pub fn good_lengths(
    lcl: &Lcl,
    v_prime: &[LabelMultiset],
    a: &LabelMultiset,
    alpha: Label,
    b: &LabelMultiset,
    beta: Label,
) -> Result<LengthSet> {
    check_subset(lcl, v_prime)?;
    if !v_prime.contains(a) || !v_prime.contains(b) || !a.contains(alpha) || !b.contains(beta) {
        return Err(Error::WitnessNotInSubset);
    }
    let powers = PowerCycle::new(&transition_matrix(lcl, v_prime)?);
    Ok(powers.lengths(lcl, alpha, beta))
}

/// The powers `M^0, M^1, ...` up to their first repetition.
struct PowerCycle {
    powers: Vec<TransitionMatrix>,
    /// `M^j = M^start` where `j = powers.len()`.
    start: usize,
}

impl PowerCycle {
    fn new(m: &TransitionMatrix) -> Self {
        let mut seen: HashMap<TransitionMatrix, usize> = HashMap::new();
        let mut powers = Vec::new();
        let mut cur = TransitionMatrix::identity(m.size());
        loop {
            if let Some(&i) = seen.get(&cur) {
                return PowerCycle { powers, start: i };
            }
            seen.insert(cur.clone(), powers.len());
            let next = cur.mul(m);
            powers.push(cur);
            cur = next;
        }
    }

    fn lengths(&self, lcl: &Lcl, alpha: Label, beta: Label) -> LengthSet {
        let accept = lcl
            .labels()
            .filter(|&s| lcl.edge_allowed(s, beta))
            .fold(0 as Mask, |acc, s| acc | bit(s));
        // length L uses M^(L-1)
        let good: Vec<bool> = self
            .powers
            .iter()
            .map(|p| p.row(alpha) & accept != 0)
            .collect();
        LengthSet::new(good[..self.start].to_vec(), good[self.start..].to_vec())
    }
}

/// Endpoint data `(a, alpha, b, beta)` in canonical enumeration order.
fn quadruples(v_prime: &[LabelMultiset]) -> Vec<(usize, Label, usize, Label)> {
    let mut out = Vec::new();
    for (i, a) in v_prime.iter().enumerate() {
        for alpha in a.distinct() {
            for (j, b) in v_prime.iter().enumerate() {
                for beta in b.distinct() {
                    out.push((i, alpha, j, beta));
                }
            }
        }
    }
    out
}

/// Least `l` for which `v_prime` is `l`-full, if any.
pub fn fullness_threshold(lcl: &Lcl, v_prime: &[LabelMultiset]) -> Result<Option<usize>> {
    let powers = PowerCycle::new(&transition_matrix(lcl, v_prime)?);
    let mut l = 1;
    let mut cache: HashMap<(Label, Label), Option<usize>> = HashMap::new();
    for (_, alpha, _, beta) in quadruples(v_prime) {
        let t = *cache
            .entry((alpha, beta))
            .or_insert_with(|| powers.lengths(lcl, alpha, beta).threshold());
        match t {
            Some(t) => l = l.max(t),
            None => return Ok(None),
        }
    }
    Ok(Some(l))
}

/// Whether every path of length at least `l` with endpoint stars in `v_prime`
/// extends inside `v_prime`.
pub fn is_l_full(lcl: &Lcl, v_prime: &[LabelMultiset], l: usize) -> bool {
    if v_prime.is_empty() {
        return true;
    }
    matches!(fullness_threshold(lcl, v_prime), Ok(Some(t)) if t <= l)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullnessCertificate {
    pub v_prime: Vec<LabelMultiset>,
    pub l: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FullnessDoc {
    l: usize,
    v_prime: Vec<Vec<String>>,
}

impl FullnessCertificate {
    pub fn to_json(&self, lcl: &Lcl) -> Value {
        serde_json::to_value(FullnessDoc {
            l: self.l,
            v_prime: self.v_prime.iter().map(|m| multiset_names(lcl, m)).collect(),
        })
        .unwrap()
    }

    pub fn from_json(value: &Value, lcl: &Lcl) -> Result<Self> {
        let doc: FullnessDoc = serde_json::from_value(value.clone())
            .map_err(|e| Error::Semantic(e.to_string()))?;
        Ok(FullnessCertificate {
            v_prime: doc
                .v_prime
                .iter()
                .map(|m| multiset_from_names(lcl, m))
                .collect::<Result<_>>()?,
            l: doc.l,
        })
    }

    /// Nonempty, inside 𝒱, and `l`-full.
    pub fn validate(&self, lcl: &Lcl) -> Result<()> {
        if self.v_prime.is_empty() || self.l == 0 {
            return Err(Error::CertificateInvalid("empty subset or l = 0".into()));
        }
        if self.v_prime.iter().any(|m| !lcl.vertex_allowed(m)) {
            return Err(Error::CertificateInvalid(
                "subset is not contained in the vertex constraints".into(),
            ));
        }
        if !is_l_full(lcl, &self.v_prime, self.l) {
            return Err(Error::CertificateInvalid(format!(
                "subset is not {}-full",
                self.l
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DecideOptions {
    /// Refuse to examine more subsets than this.
    pub max_subsets: Option<u64>,
    pub exec: Exec,
}

/// Nonempty index subsets of `0..n` by size, then lexicographically; the
/// first subset for which `test` succeeds, with its payload.
fn first_subset<U: Send>(
    n: usize,
    opts: DecideOptions,
    test: impl Fn(&[usize]) -> Result<Option<U>> + Sync,
) -> Result<Option<(Vec<usize>, U)>> {
    let mut examined = 0u64;
    for size in 1..=n {
        let batch: Vec<Vec<usize>> = (0..n).combinations(size).collect();
        if let Some(cap) = opts.max_subsets {
            if examined + batch.len() as u64 > cap {
                // examine up to the cap, then give up
                let room = (cap - examined) as usize;
                let found = par::find_first(opts.exec, &batch[..room], |s| {
                    test(s).transpose()
                });
                return match found {
                    Some((i, r)) => Ok(Some((batch[i].clone(), r?))),
                    None => Err(Error::TooManySubsets { cap }),
                };
            }
        }
        examined += batch.len() as u64;
        if let Some((i, r)) = par::find_first(opts.exec, &batch, |s| test(s).transpose()) {
            return Ok(Some((batch[i].clone(), r?)));
        }
    }
    Ok(None)
}

/// The first `l`-full subset of 𝒱 (by size, then lexicographically) with its
/// least `l`, or `None` if the problem is not full.
pub fn decide_fullness(lcl: &Lcl, opts: DecideOptions) -> Result<Option<FullnessCertificate>> {
    let vs = lcl.vertex_constraints();
    let found = first_subset(vs.len(), opts, |idx| {
        let sub: Vec<LabelMultiset> = idx.iter().map(|&i| vs[i].clone()).collect();
        fullness_threshold(lcl, &sub)
    })?;
    Ok(found.map(|(idx, l)| FullnessCertificate {
        v_prime: idx.iter().map(|&i| vs[i].clone()).collect(),
        l,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadPathWitness {
    pub a: LabelMultiset,
    pub alpha: Label,
    pub b: LabelMultiset,
    pub beta: Label,
    /// The good lengths; the witness lengths are its complement.
    pub good: LengthSet,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BadPathDoc {
    a: Vec<String>,
    alpha: String,
    b: Vec<String>,
    bad: LengthSet,
    beta: String,
}

impl BadPathWitness {
    pub fn is_bad(&self, len: usize) -> bool {
        !self.good.contains(len)
    }

    /// Least bad length that is at least `from`; always exists.
    pub fn least_bad_from(&self, from: usize) -> usize {
        self.good
            .least_missing_from(from)
            .expect("bad lengths are unbounded")
    }

    pub fn to_json(&self, lcl: &Lcl) -> Value {
        serde_json::to_value(BadPathDoc {
            a: multiset_names(lcl, &self.a),
            alpha: lcl.label_name(self.alpha).into(),
            b: multiset_names(lcl, &self.b),
            bad: self.good.clone(),
            beta: lcl.label_name(self.beta).into(),
        })
        .unwrap()
    }
}

/// For a subset that is not `l`-full for any `l`, the first endpoint
/// quadruple whose set of bad lengths is infinite.
pub fn find_bad_path_witness(lcl: &Lcl, v_prime: &[LabelMultiset]) -> Result<BadPathWitness> {
    let powers = PowerCycle::new(&transition_matrix(lcl, v_prime)?);
    for (i, alpha, j, beta) in quadruples(v_prime) {
        let good = powers.lengths(lcl, alpha, beta);
        if good.has_infinite_complement() {
            return Ok(BadPathWitness {
                a: v_prime[i].clone(),
                alpha,
                b: v_prime[j].clone(),
                beta,
                good,
            });
        }
    }
    Err(Error::SubsetIsFull)
}

/// All size-`k` precolorings `alphas` over `sigma_prime` (as sorted lists),
/// for `k = 0..=delta`, in canonical order.
fn star_cases(sigma_prime: &[Label], delta: usize) -> Vec<Vec<Label>> {
    let mut sp = sigma_prime.to_vec();
    sp.sort();
    sp.dedup();
    let mut out = Vec::new();
    for k in 0..=delta {
        if k == 0 {
            out.push(Vec::new());
        } else {
            out.extend(sp.iter().copied().combinations_with_replacement(k));
        }
    }
    out
}

/// Distinct sub-multisets of size `k` of the sorted list `ms`.
fn sub_multisets(ms: &[Label], k: usize) -> Vec<Vec<Label>> {
    let mut out: Vec<Vec<Label>> = ms.iter().copied().combinations(k).collect();
    out.sort();
    out.dedup();
    out
}

/// Whether the star with true half edges precolored `alphas` completes:
/// some `v` in 𝒱 splits as `u`-labels matched to the alphas through ℰ plus
/// virtual labels from `sigma_prime`, and each leaf label lies in some `v`.
fn star_extends(lcl: &Lcl, sp_mask: Mask, alphas: &[Label]) -> bool {
    let vs = lcl.vertex_constraints();
    if !alphas
        .iter()
        .all(|&a| vs.iter().any(|v| v.contains(a)))
    {
        return false;
    }
    let k = alphas.len();
    let masks: Vec<Mask> = alphas
        .iter()
        .map(|&a| {
            lcl.labels()
                .filter(|&u| lcl.edge_allowed(a, u))
                .fold(0, |acc, u| acc | bit(u))
        })
        .collect();
    vs.iter().any(|v| {
        sub_multisets(v.labels(), k).into_iter().any(|u| {
            let mut rest = v.clone();
            for &x in &u {
                rest = rest.without(x).unwrap();
            }
            rest.labels().iter().all(|&w| sp_mask & bit(w) != 0) && arrange(&u, &masks).is_some()
        })
    })
}

fn label_mask(labels: &[Label]) -> Mask {
    labels.iter().fold(0, |acc, &l| acc | bit(l))
}

pub fn is_greedy_set_with(lcl: &Lcl, sigma_prime: &[Label], exec: Exec) -> bool {
    let sp = label_mask(sigma_prime);
    let cases = star_cases(sigma_prime, lcl.delta());
    par::all(exec, &cases, |alphas| star_extends(lcl, sp, alphas))
}

/// Whether `sigma_prime` is a greedy label set.
pub fn is_greedy_set(lcl: &Lcl, sigma_prime: &[Label]) -> bool {
    is_greedy_set_with(lcl, sigma_prime, Exec::default())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyCertificate {
    pub sigma_prime: Vec<Label>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GreedyDoc {
    sigma_prime: Vec<String>,
}

impl GreedyCertificate {
    pub fn to_json(&self, lcl: &Lcl) -> Value {
        serde_json::to_value(GreedyDoc {
            sigma_prime: self
                .sigma_prime
                .iter()
                .map(|&l| lcl.label_name(l).to_string())
                .collect(),
        })
        .unwrap()
    }

    pub fn from_json(value: &Value, lcl: &Lcl) -> Result<Self> {
        let doc: GreedyDoc = serde_json::from_value(value.clone())
            .map_err(|e| Error::Semantic(e.to_string()))?;
        let mut sigma_prime = doc
            .sigma_prime
            .iter()
            .map(|n| {
                lcl.label_by_name(n)
                    .ok_or_else(|| Error::Semantic(format!("label {n:?} is not in sigma")))
            })
            .collect::<Result<Vec<_>>>()?;
        sigma_prime.sort();
        Ok(GreedyCertificate { sigma_prime })
    }

    pub fn validate(&self, lcl: &Lcl) -> Result<()> {
        if self.sigma_prime.iter().any(|l| l.index() >= lcl.num_labels()) {
            return Err(Error::CertificateInvalid("label outside sigma".into()));
        }
        if !is_greedy_set(lcl, &self.sigma_prime) {
            return Err(Error::CertificateInvalid("label set is not greedy".into()));
        }
        Ok(())
    }
}

/// The first greedy subset of Σ (by size, then lexicographically), or `None`.
pub fn decide_greediness(lcl: &Lcl, opts: DecideOptions) -> Result<Option<GreedyCertificate>> {
    if lcl.num_labels() > MAX_LABELS {
        return Err(Error::BadParameter(format!(
            "at most {MAX_LABELS} labels are supported"
        )));
    }
    // subsets are already spread across threads; keep each check sequential
    let found = first_subset(lcl.num_labels(), opts, |idx| {
        let sp: Vec<Label> = idx.iter().map(|&i| Label(i as u16)).collect();
        Ok(is_greedy_set_with(lcl, &sp, Exec::Sequential).then_some(()))
    })?;
    Ok(found.map(|(idx, ())| GreedyCertificate {
        sigma_prime: idx.iter().map(|&i| Label(i as u16)).collect(),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadStarWitness {
    pub k: usize,
    pub alphas: Vec<Label>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BadStarDoc {
    alphas: Vec<String>,
    k: usize,
}

impl BadStarWitness {
    pub fn to_json(&self, lcl: &Lcl) -> Value {
        serde_json::to_value(BadStarDoc {
            alphas: self
                .alphas
                .iter()
                .map(|&l| lcl.label_name(l).to_string())
                .collect(),
            k: self.k,
        })
        .unwrap()
    }
}

/// The first precolored star (by `k`, then lexicographically) that defeats
/// `sigma_prime`.
pub fn find_bad_star_witness(lcl: &Lcl, sigma_prime: &[Label]) -> Result<BadStarWitness> {
    let sp = label_mask(sigma_prime);
    let cases = star_cases(sigma_prime, lcl.delta());
    match par::find_first(Exec::default(), &cases, |alphas| {
        (!star_extends(lcl, sp, alphas)).then_some(())
    }) {
        Some((i, ())) => Ok(BadStarWitness {
            k: cases[i].len(),
            alphas: cases[i].clone(),
        }),
        None => Err(Error::SetIsGreedy),
    }
}
