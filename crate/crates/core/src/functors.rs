//! Flat clustering methods: metric space in, flag cover out.
//!
//! Every built-in method except the generated one depends on the metric only
//! through the δ-threshold graph (`d(x, y) <= δ`, inclusive), possibly with a
//! path-length budget for k-linkage.

use std::collections::{BinaryHeap, HashSet};
use std::cmp::Reverse;
use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::covers::{maximal_linked_sets, Cover, FlagCover, Relation};
use crate::graphs::{
    bk_closure, bk_star_closure, connected_components, max_edge_connected_subgraphs_with,
    max_vertex_connected_subgraphs, threshold_graph, EdgeConvention, Graph,
};
use crate::metric::{FiniteMetricSpace, PathSpaceSpec};

/// Largest test space `generated_cluster` searches exhaustively.
pub const MAX_TEST_SPACE_POINTS: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctorError {
    #[error("invalid method: {0}")]
    InvalidSpec(String),
    #[error("test space has {points} points; exhaustive search is limited to {limit}")]
    SearchBudgetExceeded { points: usize, limit: usize },
    #[error("{0} gives the same answer on every two-point probe; it has no clustering parameter")]
    TrivialFunctor(String),
    #[error("{0} merges a two-point space at a larger distance but not at a smaller one")]
    NonMonotoneProbe(String),
}

/// Step count or connectivity level: a positive integer or unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Steps {
    Finite(usize),
    Infinite,
}

impl Steps {
    /// Concrete level for a space with `n` points; any level `>= n` behaves
    /// like the unbounded one for the connectivity and B_k families.
    fn level(self, n: usize) -> usize {
        match self {
            Steps::Finite(k) => k,
            Steps::Infinite => n.max(1),
        }
    }
}

impl fmt::Display for Steps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Steps::Finite(k) => write!(f, "{k}"),
            Steps::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Steps {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Steps::Infinite);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Steps::Finite(k)),
            _ => Err(format!("expected a positive integer or `inf`, got `{s}`")),
        }
    }
}

/// Total path-length budget for k-linkage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    Finite(f64),
    Infinite,
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Finite(b) => write!(f, "{b}"),
            Budget::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Budget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Budget::Infinite);
        }
        match s.parse::<f64>() {
            Ok(b) if b > 0.0 && b.is_finite() => Ok(Budget::Finite(b)),
            _ => Err(format!("expected a positive real or `inf`, got `{s}`")),
        }
    }
}

/// A clustering family with its non-scale parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    SingleLinkage,
    MaximalLinkage,
    KLinkage { steps: Steps, budget: Budget },
    VertexLinkage { k: Steps },
    EdgeLinkage { k: Steps, convention: EdgeConvention },
    Bk { k: Steps },
    BkStar { k: Steps },
    Generated { test_spaces: Vec<FiniteMetricSpace> },
}

impl Method {
    pub fn family(&self) -> &'static str {
        match self {
            Method::SingleLinkage => "sl",
            Method::MaximalLinkage => "ml",
            Method::KLinkage { .. } => "l",
            Method::VertexLinkage { .. } => "vl",
            Method::EdgeLinkage { .. } => "el",
            Method::Bk { .. } => "bk",
            Method::BkStar { .. } => "bkstar",
            Method::Generated { .. } => "generated",
        }
    }

    /// Families whose output depends on the metric only through the
    /// threshold graph (and so can be swept over scales).
    pub fn is_threshold_family(&self) -> bool {
        !matches!(self, Method::Generated { .. })
    }

    pub fn at(self, delta: f64) -> MethodSpec {
        MethodSpec { method: self, delta }
    }
}

/// A method together with its scale δ.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSpec {
    pub method: Method,
    pub delta: f64,
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.delta;
        match &self.method {
            Method::SingleLinkage => write!(f, "SL_{d}"),
            Method::MaximalLinkage => write!(f, "ML_{d}"),
            Method::KLinkage { steps, budget: Budget::Infinite } => write!(f, "L^{steps}_{d}"),
            Method::KLinkage { steps, budget } => write!(f, "L^{{{steps},{budget}}}_{d}"),
            Method::VertexLinkage { k } => write!(f, "VL^{k}_{d}"),
            Method::EdgeLinkage { k, convention: EdgeConvention::Standard } => write!(f, "EL^{k}_{d}"),
            Method::EdgeLinkage { k, .. } => write!(f, "EL*^{k}_{d}"),
            Method::Bk { k } => write!(f, "B_{k}@{d}"),
            Method::BkStar { k } => write!(f, "B*_{k}@{d}"),
            Method::Generated { test_spaces } => write!(f, "ML^T(|T|={})", test_spaces.len()),
        }
    }
}

impl MethodSpec {
    /// Assembles and validates a spec from loose parameters (CLI / JSON).
    pub fn from_parts(
        family: &str,
        delta: f64,
        k: Option<Steps>,
        budget: Option<Budget>,
        convention: Option<EdgeConvention>,
        test_spaces: Option<Vec<FiniteMetricSpace>>,
    ) -> Result<Self, FunctorError> {
        let invalid = |m: &str| Err(FunctorError::InvalidSpec(format!("{family}: {m}")));
        if !(delta >= 0.0 && delta.is_finite()) {
            return invalid("delta must be a nonnegative number");
        }
        if budget.is_some() && family != "l" {
            return invalid("K is only meaningful for family `l`");
        }
        if convention.is_some() && family != "el" {
            return invalid("the edge convention is only meaningful for family `el`");
        }
        if test_spaces.is_some() && family != "generated" {
            return invalid("test spaces are only meaningful for family `generated`");
        }
        let needs_k = matches!(family, "l" | "vl" | "el" | "bk" | "bkstar");
        let k = match (needs_k, k) {
            (true, Some(k)) => k,
            (true, None) => return invalid("missing k"),
            (false, Some(_)) => return invalid("k is not a parameter of this family"),
            (false, None) => Steps::Infinite,
        };
        if k == Steps::Finite(0) {
            return invalid("k must be positive");
        }
        let method = match family {
            "sl" => Method::SingleLinkage,
            "ml" => Method::MaximalLinkage,
            "l" => Method::KLinkage {
                steps: k,
                budget: budget.unwrap_or(Budget::Infinite),
            },
            "vl" => Method::VertexLinkage { k },
            "el" => Method::EdgeLinkage {
                k,
                convention: convention.unwrap_or_default(),
            },
            "bk" => Method::Bk { k },
            "bkstar" => Method::BkStar { k },
            "generated" => match test_spaces {
                Some(t) if !t.is_empty() => Method::Generated { test_spaces: t },
                _ => return invalid("at least one test space is required"),
            },
            other => {
                return Err(FunctorError::InvalidSpec(format!(
                    "unknown family `{other}` (expected sl, ml, l, vl, el, bk, bkstar or generated)"
                )))
            }
        };
        if let Method::KLinkage { budget: Budget::Finite(b), .. } = method {
            if !(b > 0.0) {
                return invalid("K must be positive");
            }
        }
        Ok(MethodSpec { method, delta })
    }

    /// Runs the method on `x`.
    pub fn apply(&self, x: &FiniteMetricSpace) -> Result<FlagCover, FunctorError> {
        let d = self.delta;
        Ok(match &self.method {
            Method::SingleLinkage => single_linkage(x, d),
            Method::MaximalLinkage => maximal_linkage(x, d),
            Method::KLinkage { steps, budget } => k_linkage(x, d, *steps, *budget),
            Method::VertexLinkage { k } => vertex_linkage(x, d, k.level(x.len())),
            Method::EdgeLinkage { k, convention } => edge_linkage_with(x, d, k.level(x.len()), *convention),
            Method::Bk { k } => bk_clusters(x, d, k.level(x.len())),
            Method::BkStar { k } => bk_star_clusters(x, d, k.level(x.len())),
            Method::Generated { test_spaces } => generated_cluster(x, test_spaces)?,
        })
    }
}

impl Serialize for MethodSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut repr = MethodRepr {
            family: self.method.family().to_string(),
            delta: self.delta,
            k: None,
            budget: None,
            convention: None,
            test_spaces: None,
        };
        match &self.method {
            Method::SingleLinkage | Method::MaximalLinkage => {}
            Method::KLinkage { steps, budget } => {
                repr.k = Some(steps.to_string());
                repr.budget = Some(budget.to_string());
            }
            Method::VertexLinkage { k } | Method::Bk { k } | Method::BkStar { k } => repr.k = Some(k.to_string()),
            Method::EdgeLinkage { k, convention } => {
                repr.k = Some(k.to_string());
                repr.convention = Some(
                    match convention {
                        EdgeConvention::Standard => "standard",
                        EdgeConvention::CliqueException => "clique",
                    }
                    .to_string(),
                );
            }
            Method::Generated { test_spaces } => repr.test_spaces = Some(test_spaces.clone()),
        }
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MethodSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MethodRepr::deserialize(deserializer)?;
        let k = repr.k.as_deref().map(str::parse).transpose().map_err(D::Error::custom)?;
        let budget = repr.budget.as_deref().map(str::parse).transpose().map_err(D::Error::custom)?;
        let convention = repr
            .convention
            .as_deref()
            .map(parse_convention)
            .transpose()
            .map_err(D::Error::custom)?;
        MethodSpec::from_parts(&repr.family, repr.delta, k, budget, convention, repr.test_spaces)
            .map_err(D::Error::custom)
    }
}

pub fn parse_convention(s: &str) -> Result<EdgeConvention, String> {
    match s {
        "standard" => Ok(EdgeConvention::Standard),
        "clique" => Ok(EdgeConvention::CliqueException),
        other => Err(format!("unknown edge convention `{other}` (expected standard or clique)")),
    }
}

/// JSON shape: `k` and `K` accept integers/reals or the string "inf".
#[derive(Serialize, Deserialize)]
struct MethodRepr {
    family: String,
    delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "loose_number")]
    k: Option<String>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none", with = "loose_number")]
    budget: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    convention: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    test_spaces: Option<Vec<FiniteMetricSpace>>,
}

/// Numbers are written as JSON numbers, `inf` as a string.
mod loose_number {
    use serde::{Deserialize, Deserializer, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Serializer>(v: &Option<String>, s: S) -> Result<S::Ok, S::Error> {
        match v.as_deref() {
            Some(text) => match text.parse::<u64>() {
                Ok(n) => s.serialize_u64(n),
                Err(_) => match text.parse::<f64>() {
                    Ok(x) if x.is_finite() => s.serialize_f64(x),
                    _ => s.serialize_str(text),
                },
            },
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
        Ok(match Option::<Value>::deserialize(d)? {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s),
            Some(other) => Some(other.to_string()),
        })
    }
}

/// Connected components of the δ-threshold graph.
pub fn single_linkage(x: &FiniteMetricSpace, delta: f64) -> FlagCover {
    FlagCover::new_unchecked(connected_components(&threshold_graph(x, delta)))
}

/// Maximal cliques of the δ-threshold graph.
pub fn maximal_linkage(x: &FiniteMetricSpace, delta: f64) -> FlagCover {
    maximal_linked_sets(&Relation::from_graph(threshold_graph(x, delta)))
}

/// Maximal linked sets of the relation "reachable in at most `steps` hops of
/// length `<= delta` with total length `<= budget`". Repeated points are
/// allowed along the walk, so "at most k" and "exactly k" steps coincide.
pub fn k_linkage(x: &FiniteMetricSpace, delta: f64, steps: Steps, budget: Budget) -> FlagCover {
    let g = threshold_graph(x, delta);
    let related = match budget {
        Budget::Infinite => hop_relation(&g, steps.level(x.len())),
        Budget::Finite(limit) => budget_relation(x, &g, steps, limit),
    };
    maximal_linked_sets(&Relation::from_graph(related))
}

/// `u ~ v` iff their hop distance in `g` is at most `k`.
fn hop_relation(g: &Graph, k: usize) -> Graph {
    let n = g.vertex_count();
    let mut out = Graph::empty(g.labels().clone());
    for s in 0..n {
        let mut reached = FixedBitSet::with_capacity(n);
        reached.insert(s);
        let mut frontier = reached.clone();
        for _ in 0..k {
            let mut next = FixedBitSet::with_capacity(n);
            for v in frontier.ones() {
                next.union_with(g.neighbors(v));
            }
            next.difference_with(&reached);
            if next.is_clear() {
                break;
            }
            reached.union_with(&next);
            frontier = next;
        }
        for v in reached.ones().filter(|&v| v > s) {
            out.add_edge(s, v);
        }
    }
    out
}

/// `u ~ v` iff some walk along threshold edges with at most `steps` hops has
/// total length `<= limit`.
fn budget_relation(x: &FiniteMetricSpace, g: &Graph, steps: Steps, limit: f64) -> Graph {
    let n = x.len();
    let mut out = Graph::empty(g.labels().clone());
    for s in 0..n {
        let best = match steps {
            Steps::Infinite => dijkstra(x, g, s),
            Steps::Finite(k) => hop_bounded_lengths(x, g, s, k),
        };
        for v in (s + 1)..n {
            if best[v] <= limit {
                out.add_edge(s, v);
            }
        }
    }
    out
}

fn hop_bounded_lengths(x: &FiniteMetricSpace, g: &Graph, s: usize, k: usize) -> Vec<f64> {
    let n = x.len();
    let mut best = vec![f64::INFINITY; n];
    best[s] = 0.0;
    for _ in 0..k {
        let mut next = best.clone();
        let mut changed = false;
        for u in (0..n).filter(|&u| best[u].is_finite()) {
            for v in g.neighbors(u).ones() {
                let cand = best[u] + x.dist(u, v);
                if cand < next[v] {
                    next[v] = cand;
                    changed = true;
                }
            }
        }
        best = next;
        if !changed {
            break;
        }
    }
    best
}

fn dijkstra(x: &FiniteMetricSpace, g: &Graph, s: usize) -> Vec<f64> {
    #[derive(PartialEq)]
    struct Entry(f64, usize);
    impl Eq for Entry {}
    impl PartialOrd for Entry {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Entry {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
        }
    }
    let n = x.len();
    let mut best = vec![f64::INFINITY; n];
    best[s] = 0.0;
    let mut heap = BinaryHeap::from([Reverse(Entry(0.0, s))]);
    while let Some(Reverse(Entry(d, u))) = heap.pop() {
        if d > best[u] {
            continue;
        }
        for v in g.neighbors(u).ones() {
            let cand = d + x.dist(u, v);
            if cand < best[v] {
                best[v] = cand;
                heap.push(Reverse(Entry(cand, v)));
            }
        }
    }
    best
}

/// Maximal k-vertex-connected subgraphs of the δ-threshold graph.
pub fn vertex_linkage(x: &FiniteMetricSpace, delta: f64, k: usize) -> FlagCover {
    FlagCover::new_unchecked(max_vertex_connected_subgraphs(&threshold_graph(x, delta), k))
}

/// Maximal k-edge-connected subgraphs of the δ-threshold graph (a partition).
pub fn edge_linkage(x: &FiniteMetricSpace, delta: f64, k: usize) -> FlagCover {
    edge_linkage_with(x, delta, k, EdgeConvention::Standard)
}

pub fn edge_linkage_with(x: &FiniteMetricSpace, delta: f64, k: usize, convention: EdgeConvention) -> FlagCover {
    FlagCover::new_unchecked(max_edge_connected_subgraphs_with(&threshold_graph(x, delta), k, convention))
}

/// Maximal cliques of the B_k closure of the δ-threshold graph.
pub fn bk_clusters(x: &FiniteMetricSpace, delta: f64, k: usize) -> FlagCover {
    cliques_of(&bk_closure(&threshold_graph(x, delta), k))
}

/// Maximal cliques of the B_k* closure of the δ-threshold graph.
pub fn bk_star_clusters(x: &FiniteMetricSpace, delta: f64, k: usize) -> FlagCover {
    cliques_of(&bk_star_closure(&threshold_graph(x, delta), k))
}

fn cliques_of(g: &Graph) -> FlagCover {
    maximal_linked_sets(&Relation::from_graph(g.clone()))
}

/// Clustering generated by test spaces: `x ~ y` iff some non-expansive map
/// from a test space into `x` has both points in its image.
pub fn generated_cluster(x: &FiniteMetricSpace, test_spaces: &[FiniteMetricSpace]) -> Result<FlagCover, FunctorError> {
    if let Some(t) = test_spaces.iter().find(|t| t.len() > MAX_TEST_SPACE_POINTS) {
        return Err(FunctorError::SearchBudgetExceeded {
            points: t.len(),
            limit: MAX_TEST_SPACE_POINTS,
        });
    }
    let mut related = Graph::empty(x.labels().clone());
    for t in test_spaces {
        let mut images = HashSet::new();
        let mut assignment = Vec::with_capacity(t.len());
        search_maps(t, x, &mut assignment, &mut |image: &[usize]| {
            let mut key = image.to_vec();
            key.sort_unstable();
            key.dedup();
            if images.insert(key.clone()) {
                for (i, &u) in key.iter().enumerate() {
                    for &v in &key[i + 1..] {
                        related.add_edge(u, v);
                    }
                }
            }
        });
    }
    Ok(maximal_linked_sets(&Relation::from_graph(related)))
}

/// Enumerates non-expansive maps `t -> x` by backtracking, pruning any
/// partial assignment that already expands a pair.
fn search_maps<F: FnMut(&[usize])>(t: &FiniteMetricSpace, x: &FiniteMetricSpace, assignment: &mut Vec<usize>, visit: &mut F) {
    let i = assignment.len();
    if i == t.len() {
        visit(assignment);
        return;
    }
    for candidate in 0..x.len() {
        let fits = assignment
            .iter()
            .enumerate()
            .all(|(j, &image)| x.dist(image, candidate) <= t.dist(j, i));
        if fits {
            assignment.push(candidate);
            search_maps(t, x, assignment, visit);
            assignment.pop();
        }
    }
}

/// Outcome of probing a method on two-point spaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    /// Largest separation at which the two points are still merged.
    pub delta_f: f64,
    /// Whether the points are merged at exactly `delta_f`.
    pub boundary_merged: bool,
}

/// Locates the scale at which a method stops merging the two-point space
/// `{0, 1}` with `d(0, 1) = ε`.
///
/// The analytic candidate (δ, or `min(δ, K)` with a budget, or the largest
/// single-linkage merge height among generated test spaces) is confirmed by
/// bisection on `[0, 2 * candidate]`.
pub fn clustering_parameter(spec: &MethodSpec) -> Result<ProbeResult, FunctorError> {
    let merged = |eps: f64| -> Result<bool, FunctorError> {
        let probe = FiniteMetricSpace::path_space(PathSpaceSpec { k: 1, delta: eps });
        Ok(spec.apply(&probe)?.is_trivial())
    };
    let candidate = match &spec.method {
        Method::KLinkage { budget: Budget::Finite(b), .. } => spec.delta.min(*b),
        Method::Generated { test_spaces } => test_spaces
            .iter()
            .filter(|t| t.len() >= 2)
            .map(largest_merge_height)
            .fold(0.0, f64::max),
        _ => spec.delta,
    };
    let mut lo = 0.0;
    let mut hi = if candidate > 0.0 { 2.0 * candidate } else { 1.0 };
    let (at_lo, at_hi) = (merged(lo)?, merged(hi)?);
    if at_lo == at_hi {
        return Err(FunctorError::TrivialFunctor(spec.to_string()));
    }
    if !at_lo {
        return Err(FunctorError::NonMonotoneProbe(spec.to_string()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if merged(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let slack = 1e-9 * candidate.max(1.0);
    let delta_f = if candidate >= lo - slack && candidate <= hi + slack {
        candidate
    } else {
        lo
    };
    Ok(ProbeResult {
        delta_f,
        boundary_merged: merged(delta_f)?,
    })
}

/// Largest edge of a minimum spanning tree: the biggest ε at which some
/// surjection onto the two-point space at distance ε is non-expansive.
fn largest_merge_height(t: &FiniteMetricSpace) -> f64 {
    let n = t.len();
    let mut in_tree = vec![false; n];
    let mut reach = vec![f64::INFINITY; n];
    reach[0] = 0.0;
    let mut largest: f64 = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| reach[a].total_cmp(&reach[b]))
            .expect("vertex remains");
        in_tree[u] = true;
        largest = largest.max(reach[u]);
        for v in 0..n {
            if !in_tree[v] {
                reach[v] = reach[v].min(t.dist(u, v));
            }
        }
    }
    largest
}

/// Metric on the base of a cover with `delta` between co-blocked points and
/// `2 * delta` otherwise. For a flag cover, maximal linkage at `delta` on this
/// space returns the cover itself.
pub fn realize_flag_cover(cover: &Cover, delta: f64) -> FiniteMetricSpace {
    let g = cover.coblocking_graph();
    let n = g.vertex_count();
    let mut dist = vec![0.0; n * n];
    for u in 0..n {
        for v in 0..n {
            if u != v {
                dist[u * n + v] = if g.has_edge(u, v) { delta } else { 2.0 * delta };
            }
        }
    }
    FiniteMetricSpace::from_parts(cover.base().clone(), dist)
}

/// Evaluates independent (method, space) pairs in parallel; results are in
/// input order.
pub fn evaluate_batch(jobs: &[(MethodSpec, FiniteMetricSpace)]) -> Vec<Result<FlagCover, FunctorError>> {
    jobs.par_iter().map(|(spec, x)| spec.apply(x)).collect()
}
