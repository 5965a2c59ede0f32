//! Seeded generators for spaces, maps and covers.
//!
//! All randomness comes from `ChaCha8Rng`. A standalone call seeds it with
//! `seed_from_u64(seed)`; trial `i` of a check uses the same seeding followed
//! by `set_stream(i)`, so trials are independent of scheduling.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::covers::{Cover, FlagCover};
use crate::graphs::Graph;
use crate::metric::{FiniteMetricSpace, MetricMap, Norm};

/// Candidate maps enumerated exhaustively before switching to randomized
/// backtracking.
const EXHAUSTIVE_MAP_LIMIT: u64 = 200_000;
/// Search-tree nodes visited by randomized backtracking before giving up.
const MAP_NODE_BUDGET: usize = 100_000;

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricMode {
    /// Uniform points in `[0, 3)^2` with Euclidean distance.
    EuclideanPoints,
    /// Random entries in `{0, 0.5, ..., 3}` closed under shortest paths.
    ClosureOfRandomMatrix,
    /// Random agglomeration with quantized, non-decreasing merge heights.
    UltrametricTree,
}

impl MetricMode {
    pub const ALL: [MetricMode; 3] = [
        MetricMode::EuclideanPoints,
        MetricMode::ClosureOfRandomMatrix,
        MetricMode::UltrametricTree,
    ];
}

impl fmt::Display for MetricMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricMode::EuclideanPoints => "euclidean-points",
            MetricMode::ClosureOfRandomMatrix => "closure-of-random-matrix",
            MetricMode::UltrametricTree => "ultrametric-tree",
        })
    }
}

impl FromStr for MetricMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        MetricMode::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| format!("unknown metric mode `{s}`"))
    }
}

/// Labels `{prefix}0 .. {prefix}{n-1}`, zero-padded so that string order
/// matches numeric order.
pub fn padded_labels(prefix: &str, n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

pub fn random_metric(n: usize, seed: u64, mode: MetricMode) -> FiniteMetricSpace {
    random_metric_with(&mut ChaCha8Rng::seed_from_u64(seed), n, mode)
}

pub fn random_metric_with<R: Rng>(rng: &mut R, n: usize, mode: MetricMode) -> FiniteMetricSpace {
    assert!(n >= 1, "a space needs at least one point");
    let labels = padded_labels("p", n);
    match mode {
        MetricMode::EuclideanPoints => {
            let points: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![rng.random_range(0.0..3.0), rng.random_range(0.0..3.0)])
                .collect();
            FiniteMetricSpace::from_points(labels, &points, Norm::Euclidean).expect("finite coordinates")
        }
        MetricMode::ClosureOfRandomMatrix => {
            let mut m = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = if rng.random_bool(0.05) {
                        0.0
                    } else {
                        0.5 * rng.random_range(1..=6) as f64
                    };
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            FiniteMetricSpace::metric_closure(labels, m).expect("symmetric nonnegative matrix")
        }
        MetricMode::UltrametricTree => {
            let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
            let mut m = vec![vec![0.0; n]; n];
            let mut height = 0.0;
            while clusters.len() > 1 {
                height += 0.5 * rng.random_range(0..=2) as f64;
                let a = rng.random_range(0..clusters.len());
                let merged = clusters.swap_remove(a);
                let b = rng.random_range(0..clusters.len());
                for &u in &merged {
                    for &v in &clusters[b] {
                        m[u][v] = height;
                        m[v][u] = height;
                    }
                }
                clusters[b].extend(merged);
            }
            FiniteMetricSpace::new(labels, m).expect("ultrametrics are metrics")
        }
    }
}

/// Space with a size in `1..=max_points` and a mode drawn uniformly.
pub fn random_space<R: Rng>(rng: &mut R, min_points: usize, max_points: usize) -> FiniteMetricSpace {
    let n = rng.random_range(min_points..=max_points);
    let mode = MetricMode::ALL[rng.random_range(0..MetricMode::ALL.len())];
    random_metric_with(rng, n, mode)
}

pub fn random_map(x: &FiniteMetricSpace, y: &FiniteMetricSpace, seed: u64, require_injective: bool) -> Option<MetricMap> {
    random_map_with(&mut ChaCha8Rng::seed_from_u64(seed), x, y, require_injective)
}

/// A non-expansive map `x -> y` (injective if requested), or `None`.
///
/// When `|y|^|x|` is small every valid map is enumerated and one is drawn
/// uniformly; otherwise a backtracking search with shuffled candidate order
/// returns the first valid map within a node budget. `x -> x` always falls
/// back to the identity.
pub fn random_map_with<R: Rng>(
    rng: &mut R,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    require_injective: bool,
) -> Option<MetricMap> {
    if require_injective && x.len() > y.len() {
        return None;
    }
    let size = (y.len() as u64).checked_pow(x.len() as u32).unwrap_or(u64::MAX);
    let found = if size <= EXHAUSTIVE_MAP_LIMIT {
        let mut all = Vec::new();
        let mut partial = Vec::with_capacity(x.len());
        enumerate_maps(x, y, require_injective, &mut partial, &mut |a| all.push(a.to_vec()));
        if all.is_empty() {
            None
        } else {
            Some(all.swap_remove(rng.random_range(0..all.len())))
        }
    } else {
        let mut budget = MAP_NODE_BUDGET;
        let mut partial = Vec::with_capacity(x.len());
        if randomized_search(rng, x, y, require_injective, &mut partial, &mut budget) {
            Some(partial)
        } else {
            None
        }
    };
    match found {
        Some(a) => Some(MetricMap::from_indices(x.clone(), y.clone(), a).expect("indices in range")),
        None if x == y => Some(MetricMap::identity(x.clone())),
        None => None,
    }
}

fn fits(x: &FiniteMetricSpace, y: &FiniteMetricSpace, injective: bool, partial: &[usize], candidate: usize) -> bool {
    let i = partial.len();
    partial
        .iter()
        .enumerate()
        .all(|(j, &image)| (!injective || image != candidate) && y.dist(image, candidate) <= x.dist(j, i))
}

fn enumerate_maps<F: FnMut(&[usize])>(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    injective: bool,
    partial: &mut Vec<usize>,
    visit: &mut F,
) {
    if partial.len() == x.len() {
        visit(partial);
        return;
    }
    for c in 0..y.len() {
        if fits(x, y, injective, partial, c) {
            partial.push(c);
            enumerate_maps(x, y, injective, partial, visit);
            partial.pop();
        }
    }
}

fn randomized_search<R: Rng>(
    rng: &mut R,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    injective: bool,
    partial: &mut Vec<usize>,
    budget: &mut usize,
) -> bool {
    if partial.len() == x.len() {
        return true;
    }
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.shuffle(rng);
    for c in order {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if fits(x, y, injective, partial, c) {
            partial.push(c);
            if randomized_search(rng, x, y, injective, partial, budget) {
                return true;
            }
            partial.pop();
        }
    }
    false
}

/// Morphism category for functoriality checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Category {
    /// All non-expansive maps.
    Met,
    /// Injective non-expansive maps.
    MetInj,
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "met" => Ok(Category::Met),
            "metinj" | "met-inj" => Ok(Category::MetInj),
            _ => Err(format!("unknown category `{s}` (expected met or metinj)")),
        }
    }
}

const SHRINK: [f64; 3] = [1.0, 0.75, 0.5];

/// A random morphism of the category with a source of at most `max_points`
/// points, drawn from one of three templates: a quotient (Met only), an
/// inclusion into a shrunk space with extra points, or a map found by
/// [`random_map_with`] between independent random spaces.
pub fn random_morphism<R: Rng>(rng: &mut R, category: Category, max_points: usize) -> MetricMap {
    let template = match category {
        Category::Met => rng.random_range(0..3),
        Category::MetInj => rng.random_range(1..3),
    };
    let x = random_space(rng, 1, max_points);
    match template {
        0 => quotient(rng, x),
        1 => inclusion(rng, x),
        _ => {
            let y = random_space(rng, 1, max_points + 2);
            random_map_with(rng, &x, &y, category == Category::MetInj).unwrap_or_else(|| inclusion(rng, x))
        }
    }
}

/// Surjection onto `m` classes; the target distance between classes is the
/// smallest source distance across them, optionally shrunk, then closed.
fn quotient<R: Rng>(rng: &mut R, x: FiniteMetricSpace) -> MetricMap {
    let n = x.len();
    let m = rng.random_range(1..=n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut class = vec![0; n];
    for (pos, &v) in order.iter().enumerate() {
        class[v] = if pos < m { pos } else { rng.random_range(0..m) };
    }
    let shrink = SHRINK[rng.random_range(0..SHRINK.len())];
    let mut d = vec![vec![f64::INFINITY; m]; m];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for u in 0..n {
        for v in 0..n {
            let (a, b) = (class[u], class[v]);
            if a != b {
                d[a][b] = d[a][b].min(shrink * x.dist(u, v));
            }
        }
    }
    let y = FiniteMetricSpace::metric_closure(padded_labels("q", m), d).expect("finite quotient distances");
    // padded labels keep class index order
    MetricMap::from_indices(x, y, class).expect("classes in range")
}

/// `x` shrunk by a random factor plus up to two extra points, closed under
/// shortest paths; each point of `x` maps to its copy.
fn inclusion<R: Rng>(rng: &mut R, x: FiniteMetricSpace) -> MetricMap {
    let n = x.len();
    let extra = rng.random_range(0..=2);
    let total = n + extra;
    let shrink = SHRINK[rng.random_range(0..SHRINK.len())];
    let mut d = vec![vec![0.0; total]; total];
    for i in 0..total {
        for j in (i + 1)..total {
            let v = if j < n {
                shrink * x.dist(i, j)
            } else {
                0.5 * rng.random_range(1..=6) as f64
            };
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    let mut labels = x.labels().to_vec();
    labels.extend(padded_labels("z", extra));
    let y = FiniteMetricSpace::metric_closure(labels, d).expect("finite distances");
    let pairs: Vec<(&str, &str)> = x.labels().iter().map(|l| (l.as_str(), l.as_str())).collect();
    MetricMap::new(x.clone(), y, pairs).expect("labels carried over")
}

/// Random relation graph on `n` points with a random edge density.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize) -> Graph {
    let p = rng.random_range(0.1..0.9);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .filter(|_| rng.random_bool(p))
        .collect();
    Graph::from_edges(padded_labels("p", n).into(), edges).expect("edges in range")
}

/// Random cover on `n` points: a few random blocks, plus singletons for
/// anything left uncovered.
pub fn random_cover<R: Rng>(rng: &mut R, n: usize) -> Cover {
    let blocks_wanted = rng.random_range(1..=n.max(1) + 1);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut covered = vec![false; n];
    for _ in 0..blocks_wanted {
        let p = rng.random_range(0.2..0.7);
        let block: Vec<usize> = (0..n).filter(|_| rng.random_bool(p)).collect();
        if !block.is_empty() {
            for &v in &block {
                covered[v] = true;
            }
            blocks.push(block);
        }
    }
    blocks.extend((0..n).filter(|&v| !covered[v]).map(|v| vec![v]));
    Cover::new(padded_labels("p", n).into(), blocks).expect("valid blocks")
}

pub fn random_flag_cover<R: Rng>(rng: &mut R, n: usize) -> FlagCover {
    random_cover(rng, n).flagify()
}
