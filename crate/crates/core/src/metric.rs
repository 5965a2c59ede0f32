//! Finite (pseudo)metric spaces and the maps between them.
//!
//! Points are identified by string labels. Labels are sorted at construction
//! and every index-based API refers to that canonical order, so two spaces
//! built from the same data in a different row order compare equal.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Shared, canonically ordered point labels.
pub type Labels = Arc<[String]>;

/// Relative tolerance for symmetry and triangle checks, scaled by the largest
/// matrix entry.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("a metric space needs at least one point")]
    Empty,
    #[error("{labels} labels but the matrix has {rows} rows")]
    DimensionMismatch { labels: usize, rows: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedRow { row: usize, len: usize, expected: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("d({a}, {b}) is not a finite number")]
    NonFinite { a: String, b: String },
    #[error("d({a}, {b}) = {value} is negative")]
    NegativeDistance { a: String, b: String, value: f64 },
    #[error("d({label}, {label}) = {value}, expected 0")]
    NonZeroDiagonal { label: String, value: f64 },
    #[error("matrix is not symmetric: d({a}, {b}) = {ab} but d({b}, {a}) = {ba}")]
    AsymmetricMatrix { a: String, b: String, ab: f64, ba: f64 },
    #[error("triangle inequality fails on ({a}, {b}, {c}): d({a}, {c}) = {direct} > d({a}, {b}) + d({b}, {c}) = {via}")]
    TriangleViolation {
        a: String,
        b: String,
        c: String,
        direct: f64,
        via: f64,
    },
    #[error("point rows have inconsistent dimension: row {row} has {len} coordinates, expected {expected}")]
    PointDimension { row: usize, len: usize, expected: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("unknown source label `{0}`")]
    UnknownSource(String),
    #[error("unknown target label `{0}`")]
    UnknownTarget(String),
    #[error("source point `{0}` has no image")]
    Unassigned(String),
    #[error("source point `{0}` is assigned twice")]
    AssignedTwice(String),
    #[error("assignment has {len} entries for {expected} source points")]
    LengthMismatch { len: usize, expected: usize },
    #[error("image index {index} is out of range for a target with {len} points")]
    OutOfRange { index: usize, len: usize },
}

/// Norm used to turn a point cloud into a distance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Norm {
    #[default]
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl Norm {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Norm::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Norm::Manhattan => diffs.sum(),
            Norm::Chebyshev => diffs.fold(0.0, f64::max),
        }
    }
}

/// A finite set of labeled points with a symmetric distance matrix.
///
/// Zero distances between distinct points are allowed.
#[derive(Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Labels,
    dist: Arc<[f64]>,
}

impl fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = (0..self.len()).map(|i| self.row(i)).collect();
        f.debug_struct("FiniteMetricSpace")
            .field("labels", &self.labels)
            .field("dist", &rows)
            .finish()
    }
}

/// Parameters of the path space `{0, ..., k}` with `d(i, j) = delta * |i - j|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpaceSpec {
    pub k: usize,
    pub delta: f64,
}

impl FiniteMetricSpace {
    /// Validates a labeled distance matrix.
    ///
    /// Near-symmetric matrices (within tolerance) are symmetrized by averaging;
    /// the triangle inequality is checked within the same tolerance.
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let (labels, mut dist) = canonicalize(labels, matrix)?;
        let n = labels.len();
        let tol = tolerance(&dist);
        check_entries(&labels, &dist)?;
        for i in 0..n {
            for j in (i + 1)..n {
                let (ab, ba) = (dist[i * n + j], dist[j * n + i]);
                if (ab - ba).abs() > tol {
                    return Err(MetricError::AsymmetricMatrix {
                        a: labels[i].clone(),
                        b: labels[j].clone(),
                        ab,
                        ba,
                    });
                }
                let mean = 0.5 * (ab + ba);
                dist[i * n + j] = mean;
                dist[j * n + i] = mean;
            }
        }
        check_triangle(&labels, &dist, tol)?;
        Ok(Self::from_parts(labels, dist))
    }

    /// Builds a space from coordinate rows. Norm-induced distances are metrics,
    /// so the cubic triangle check is skipped.
    pub fn from_points(
        labels: Vec<String>,
        points: &[Vec<f64>],
        norm: Norm,
    ) -> Result<Self, MetricError> {
        if labels.len() != points.len() {
            return Err(MetricError::DimensionMismatch {
                labels: labels.len(),
                rows: points.len(),
            });
        }
        let dim = points.first().map_or(0, Vec::len);
        for (row, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(MetricError::PointDimension {
                    row,
                    len: p.len(),
                    expected: dim,
                });
            }
        }
        let n = points.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| norm.distance(&points[i], &points[j])).collect())
            .collect();
        let (labels, dist) = canonicalize(labels, matrix)?;
        check_entries(&labels, &dist)?;
        Ok(Self::from_parts(labels, dist))
    }

    /// Shortest-path closure of a symmetric nonnegative matrix with zero
    /// diagonal. The result satisfies the triangle inequality and is dominated
    /// entrywise by the input.
    pub fn metric_closure(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let (labels, mut dist) = canonicalize(labels, matrix)?;
        check_entries(&labels, &dist)?;
        let n = labels.len();
        let tol = tolerance(&dist);
        for i in 0..n {
            for j in (i + 1)..n {
                let (ab, ba) = (dist[i * n + j], dist[j * n + i]);
                if (ab - ba).abs() > tol {
                    return Err(MetricError::AsymmetricMatrix {
                        a: labels[i].clone(),
                        b: labels[j].clone(),
                        ab,
                        ba,
                    });
                }
                let m = ab.min(ba);
                dist[i * n + j] = m;
                dist[j * n + i] = m;
            }
        }
        floyd_warshall(&mut dist, n);
        Ok(Self::from_parts(labels, dist))
    }

    /// The path space Λ: points `0..=k` with `d(i, j) = delta * |i - j|`.
    pub fn path_space(spec: PathSpaceSpec) -> Self {
        let labels: Vec<String> = (0..=spec.k).map(|i| i.to_string()).collect();
        let matrix = (0..=spec.k)
            .map(|i| {
                (0..=spec.k)
                    .map(|j| spec.delta * (i as f64 - j as f64).abs())
                    .collect()
            })
            .collect();
        let (labels, dist) = canonicalize(labels, matrix).expect("path space labels are distinct");
        Self::from_parts(labels, dist)
    }

    /// A single point.
    pub fn point(label: &str) -> Self {
        Self::from_parts(Arc::from(vec![label.to_string()]), vec![0.0])
    }

    /// Caller guarantees canonical label order and a valid pseudometric.
    pub(crate) fn from_parts(labels: Labels, dist: Vec<f64>) -> Self {
        debug_assert_eq!(labels.len() * labels.len(), dist.len());
        Self {
            labels,
            dist: Arc::from(dist),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Sorted distinct off-diagonal distances.
    pub fn distinct_distances(&self) -> Vec<f64> {
        let n = self.len();
        let mut values: Vec<f64> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| self.dist(i, j))
            .collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        values
    }

    /// Restriction to the given points (indices in this space).
    pub fn subspace(&self, points: &[usize]) -> Self {
        let labels: Vec<String> = points.iter().map(|&i| self.labels[i].clone()).collect();
        let matrix = points
            .iter()
            .map(|&i| points.iter().map(|&j| self.dist(i, j)).collect())
            .collect();
        let (labels, dist) = canonicalize(labels, matrix).expect("subspace labels are distinct");
        Self::from_parts(labels, dist)
    }
}

impl Serialize for FiniteMetricSpace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SpaceRepr {
            points: self.labels.to_vec(),
            distances: self.to_matrix(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteMetricSpace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SpaceRepr::deserialize(deserializer)?;
        FiniteMetricSpace::new(repr.points, repr.distances).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    points: Vec<String>,
    distances: Vec<Vec<f64>>,
}

/// Sorts labels, permutes the matrix accordingly and flattens it.
fn canonicalize(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<(Labels, Vec<f64>), MetricError> {
    let n = labels.len();
    if n == 0 {
        return Err(MetricError::Empty);
    }
    if matrix.len() != n {
        return Err(MetricError::DimensionMismatch {
            labels: n,
            rows: matrix.len(),
        });
    }
    for (row, r) in matrix.iter().enumerate() {
        if r.len() != n {
            return Err(MetricError::RaggedRow {
                row,
                len: r.len(),
                expected: n,
            });
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    for w in order.windows(2) {
        if labels[w[0]] == labels[w[1]] {
            return Err(MetricError::DuplicateLabel(labels[w[0]].clone()));
        }
    }
    let mut dist = vec![0.0; n * n];
    for (i, &oi) in order.iter().enumerate() {
        for (j, &oj) in order.iter().enumerate() {
            dist[i * n + j] = matrix[oi][oj];
        }
    }
    let sorted: Vec<String> = order.iter().map(|&i| labels[i].clone()).collect();
    Ok((Arc::from(sorted), dist))
}

fn tolerance(dist: &[f64]) -> f64 {
    let max = dist
        .iter()
        .copied()
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max);
    RELATIVE_TOLERANCE * max
}

fn check_entries(labels: &Labels, dist: &[f64]) -> Result<(), MetricError> {
    let n = labels.len();
    for i in 0..n {
        for j in 0..n {
            let v = dist[i * n + j];
            if !v.is_finite() {
                return Err(MetricError::NonFinite {
                    a: labels[i].clone(),
                    b: labels[j].clone(),
                });
            }
            if v < 0.0 {
                return Err(MetricError::NegativeDistance {
                    a: labels[i].clone(),
                    b: labels[j].clone(),
                    value: v,
                });
            }
        }
        if dist[i * n + i] != 0.0 {
            return Err(MetricError::NonZeroDiagonal {
                label: labels[i].clone(),
                value: dist[i * n + i],
            });
        }
    }
    Ok(())
}

fn check_triangle(labels: &Labels, dist: &[f64], tol: f64) -> Result<(), MetricError> {
    let n = labels.len();
    for a in 0..n {
        for b in 0..n {
            let ab = dist[a * n + b];
            for c in 0..n {
                let direct = dist[a * n + c];
                let via = ab + dist[b * n + c];
                if direct > via + tol {
                    return Err(MetricError::TriangleViolation {
                        a: labels[a].clone(),
                        b: labels[b].clone(),
                        c: labels[c].clone(),
                        direct,
                        via,
                    });
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn floyd_warshall(dist: &mut [f64], n: usize) {
    for k in 0..n {
        for i in 0..n {
            let ik = dist[i * n + k];
            for j in 0..n {
                let via = ik + dist[k * n + j];
                if via < dist[i * n + j] {
                    dist[i * n + j] = via;
                }
            }
        }
    }
}

/// A set map between two metric spaces, stored by canonical indices.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMap {
    source: FiniteMetricSpace,
    target: FiniteMetricSpace,
    assignment: Vec<usize>,
}

impl MetricMap {
    /// Builds a map from `(source label, target label)` pairs; every source
    /// point must be assigned exactly once.
    pub fn new<'a, I>(source: FiniteMetricSpace, target: FiniteMetricSpace, pairs: I) -> Result<Self, MapError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut assignment = vec![usize::MAX; source.len()];
        for (s, t) in pairs {
            let i = source
                .index_of(s)
                .ok_or_else(|| MapError::UnknownSource(s.to_string()))?;
            let j = target
                .index_of(t)
                .ok_or_else(|| MapError::UnknownTarget(t.to_string()))?;
            if assignment[i] != usize::MAX {
                return Err(MapError::AssignedTwice(s.to_string()));
            }
            assignment[i] = j;
        }
        if let Some(i) = assignment.iter().position(|&j| j == usize::MAX) {
            return Err(MapError::Unassigned(source.label(i).to_string()));
        }
        Ok(Self {
            source,
            target,
            assignment,
        })
    }

    /// `assignment[i]` is the target index of source point `i`.
    pub fn from_indices(
        source: FiniteMetricSpace,
        target: FiniteMetricSpace,
        assignment: Vec<usize>,
    ) -> Result<Self, MapError> {
        if assignment.len() != source.len() {
            return Err(MapError::LengthMismatch {
                len: assignment.len(),
                expected: source.len(),
            });
        }
        if let Some(&index) = assignment.iter().find(|&&j| j >= target.len()) {
            return Err(MapError::OutOfRange {
                index,
                len: target.len(),
            });
        }
        Ok(Self {
            source,
            target,
            assignment,
        })
    }

    pub fn identity(space: FiniteMetricSpace) -> Self {
        let assignment = (0..space.len()).collect();
        Self {
            target: space.clone(),
            source: space,
            assignment,
        }
    }

    pub fn source(&self) -> &FiniteMetricSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteMetricSpace {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// `(source label, target label)` pairs in canonical source order.
    pub fn label_pairs(&self) -> Vec<(String, String)> {
        self.assignment
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.source.label(i).to_string(), self.target.label(j).to_string()))
            .collect()
    }

    /// True iff `d_Y(f x, f x') <= d_X(x, x')` for every pair, within tolerance.
    pub fn is_nonexpansive(&self) -> bool {
        let n = self.source.len();
        let tol = RELATIVE_TOLERANCE * self.source.diameter().max(self.target.diameter());
        (0..n).all(|i| {
            ((i + 1)..n).all(|j| {
                self.target.dist(self.assignment[i], self.assignment[j]) <= self.source.dist(i, j) + tol
            })
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.assignment
            .iter()
            .all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    /// The source labels with distances `d_Y(f x, f x')`.
    pub fn pullback_metric(&self) -> FiniteMetricSpace {
        let n = self.source.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = self.target.dist(self.assignment[i], self.assignment[j]);
            }
        }
        FiniteMetricSpace::from_parts(self.source.labels.clone(), dist)
    }
}

/// Index lookup for labels that may not be in canonical order.
pub(crate) fn label_index(labels: &[String]) -> HashMap<&str, usize> {
    labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    pub(crate) fn x3() -> FiniteMetricSpace {
        FiniteMetricSpace::new(
            labels(&["a", "b", "c"]),
            vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]],
        )
        .unwrap()
    }

    #[test]
    fn validates_degenerate_triangle() {
        let x = x3();
        assert_eq!(x.len(), 3);
        assert_eq!(x.dist(0, 2), 2.0);
    }

    #[test]
    fn zero_distance_is_allowed() {
        let x = FiniteMetricSpace::new(labels(&["a", "b"]), vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(x.dist(0, 1), 0.0);
    }

    #[test]
    fn triangle_violation_reports_triple() {
        let err = FiniteMetricSpace::new(
            labels(&["a", "b", "c"]),
            vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]],
        )
        .unwrap_err();
        match err {
            MetricError::TriangleViolation { a, b, c, direct, via } => {
                assert_eq!((a.as_str(), b.as_str(), c.as_str()), ("a", "b", "c"));
                assert_eq!(direct, 3.0);
                assert_eq!(via, 2.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_matrices() {
        let asym = FiniteMetricSpace::new(labels(&["a", "b"]), vec![vec![0.0, 1.0], vec![1.5, 0.0]]);
        assert!(matches!(asym, Err(MetricError::AsymmetricMatrix { .. })));
        let neg = FiniteMetricSpace::new(labels(&["a", "b"]), vec![vec![0.0, -1.0], vec![-1.0, 0.0]]);
        assert!(matches!(neg, Err(MetricError::NegativeDistance { .. })));
        let dup = FiniteMetricSpace::new(labels(&["a", "a"]), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(dup.unwrap_err(), MetricError::DuplicateLabel("a".into()));
        let ragged = FiniteMetricSpace::new(labels(&["a", "b"]), vec![vec![0.0, 1.0], vec![1.0]]);
        assert!(matches!(ragged, Err(MetricError::RaggedRow { row: 1, .. })));
    }

    #[test]
    fn near_symmetric_input_is_symmetrized() {
        let x = FiniteMetricSpace::new(
            labels(&["a", "b"]),
            vec![vec![0.0, 1.0], vec![1.0 + 1e-12, 0.0]],
        )
        .unwrap();
        assert_eq!(x.dist(0, 1), x.dist(1, 0));
    }

    #[test]
    fn labels_are_sorted_with_matrix() {
        let x = FiniteMetricSpace::new(
            labels(&["c", "a", "b"]),
            vec![vec![0.0, 2.0, 1.0], vec![2.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]],
        )
        .unwrap();
        assert_eq!(x, x3());
    }

    #[test]
    fn nonexpansive_examples() {
        let x = x3();
        assert!(MetricMap::identity(x.clone()).is_nonexpansive());
        let line = FiniteMetricSpace::path_space(PathSpaceSpec { k: 1, delta: 1.0 });
        let f = MetricMap::new(x.clone(), line.clone(), [("a", "0"), ("b", "0"), ("c", "1")]).unwrap();
        assert!(f.is_nonexpansive());
        assert!(!f.is_injective());
        let g = MetricMap::new(line, x, [("0", "a"), ("1", "c")]).unwrap();
        assert!(!g.is_nonexpansive());
        assert!(g.is_injective());
    }

    #[test]
    fn pullback_examples() {
        let x = x3();
        assert_eq!(MetricMap::identity(x.clone()).pullback_metric(), x);
        let line = FiniteMetricSpace::path_space(PathSpaceSpec { k: 1, delta: 1.0 });
        let f = MetricMap::new(x.clone(), line, [("a", "0"), ("b", "0"), ("c", "1")]).unwrap();
        let p = f.pullback_metric();
        assert_eq!(p.dist(0, 1), 0.0);
        assert_eq!(p.dist(0, 2), 1.0);
        assert_eq!(p.dist(1, 2), 1.0);
        let constant = MetricMap::from_indices(x.clone(), FiniteMetricSpace::point("p"), vec![0; 3]).unwrap();
        assert_eq!(constant.pullback_metric().diameter(), 0.0);
    }

    #[test]
    fn path_space_examples() {
        let probe = FiniteMetricSpace::path_space(PathSpaceSpec { k: 1, delta: 0.25 });
        assert_eq!(probe.len(), 2);
        assert_eq!(probe.dist(0, 1), 0.25);
        let p2 = FiniteMetricSpace::path_space(PathSpaceSpec { k: 2, delta: 1.0 });
        let (i0, i2) = (p2.index_of("0").unwrap(), p2.index_of("2").unwrap());
        assert_eq!(p2.dist(i0, i2), 2.0);
        let flat = FiniteMetricSpace::path_space(PathSpaceSpec { k: 1, delta: 0.0 });
        assert_eq!(flat.dist(0, 1), 0.0);
        // labels sort lexicographically, distances follow the numeric position
        let p11 = FiniteMetricSpace::path_space(PathSpaceSpec { k: 11, delta: 1.0 });
        assert_eq!(p11.dist(p11.index_of("2").unwrap(), p11.index_of("10").unwrap()), 8.0);
    }

    #[test]
    fn closure_examples() {
        let fixed = FiniteMetricSpace::metric_closure(labels(&["a", "b", "c"]), x3().to_matrix()).unwrap();
        assert_eq!(fixed, x3());
        let repaired = FiniteMetricSpace::metric_closure(
            labels(&["a", "b", "c"]),
            vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]],
        )
        .unwrap();
        assert_eq!(repaired.dist(0, 2), 2.0);
        let zeros = FiniteMetricSpace::metric_closure(labels(&["a", "b"]), vec![vec![0.0; 2]; 2]).unwrap();
        assert_eq!(zeros.diameter(), 0.0);
    }

    #[test]
    fn json_round_trip() {
        let x = x3();
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"{"points":["a","b","c"],"distances":[[0.0,1.0,2.0],[1.0,0.0,1.0],[2.0,1.0,0.0]]}"#);
        let back: FiniteMetricSpace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
    }
}
