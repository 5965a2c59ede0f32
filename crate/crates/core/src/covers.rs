//! Covers, flag covers and the operations relating them: refinement,
//! preimages under set maps, flagification and maximal linked sets.
//!
//! Blocks are stored as sorted index lists into a canonically ordered base,
//! and the block list itself is sorted, so structural equality is cover
//! equality.

use std::ops::Deref;

use fixedbitset::FixedBitSet;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graphs::{maximal_cliques, Graph, GraphError};
use crate::metric::{label_index, Labels, MetricMap};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverError {
    #[error("covers are over different base sets")]
    BaseMismatch,
    #[error("cover has nested blocks")]
    NestedCover,
    #[error("cover is not flag: {0:?} is pairwise co-blocked but lies in no block")]
    NotFlag(Vec<String>),
    #[error("point `{0}` is not covered by any block")]
    Uncovered(String),
    #[error("empty block")]
    EmptyBlock,
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate base point `{0}`")]
    DuplicateBasePoint(String),
    #[error("block index {0} out of range")]
    OutOfRange(usize),
}

/// A collection of non-empty blocks whose union is the base set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    base: Labels,
    blocks: Vec<Vec<usize>>,
}

impl Cover {
    /// Canonicalizes and validates index blocks over an already canonical base.
    pub fn new(base: Labels, blocks: Vec<Vec<usize>>) -> Result<Self, CoverError> {
        let n = base.len();
        let mut covered = FixedBitSet::with_capacity(n);
        for block in &blocks {
            if block.is_empty() {
                return Err(CoverError::EmptyBlock);
            }
            for &v in block {
                if v >= n {
                    return Err(CoverError::OutOfRange(v));
                }
                covered.insert(v);
            }
        }
        if let Some(v) = (0..n).find(|&v| !covered.contains(v)) {
            return Err(CoverError::Uncovered(base[v].clone()));
        }
        Ok(Self::from_canonical(base, blocks))
    }

    /// Builds a cover from label blocks; the base is sorted here.
    pub fn from_labels<S: AsRef<str>>(base: &[S], blocks: &[Vec<S>]) -> Result<Self, CoverError> {
        let mut sorted: Vec<String> = base.iter().map(|s| s.as_ref().to_string()).collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(CoverError::DuplicateBasePoint(w[0].clone()));
        }
        let index = label_index(&sorted);
        let blocks = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|l| {
                        index
                            .get(l.as_ref())
                            .copied()
                            .ok_or_else(|| CoverError::UnknownPoint(l.as_ref().to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(sorted.into(), blocks)
    }

    /// Sorts and deduplicates; the caller guarantees the blocks cover `base`.
    pub(crate) fn from_canonical(base: Labels, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
            b.dedup();
        }
        blocks.sort_unstable();
        blocks.dedup();
        Self { base, blocks }
    }

    /// Every point in its own block.
    pub fn singletons(base: Labels) -> Self {
        let blocks = (0..base.len()).map(|v| vec![v]).collect();
        Self { base, blocks }
    }

    /// The one-block cover `{X}`.
    pub fn trivial(base: Labels) -> Self {
        let blocks = vec![(0..base.len()).collect()];
        Self { base, blocks }
    }

    pub fn base(&self) -> &Labels {
        &self.base
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn label_blocks(&self) -> Vec<Vec<&str>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&v| self.base[v].as_str()).collect())
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1 && self.blocks[0].len() == self.base.len()
    }

    pub fn is_partition(&self) -> bool {
        self.blocks.iter().map(Vec::len).sum::<usize>() == self.base.len()
    }

    /// No block properly contains another.
    pub fn is_non_nested(&self) -> bool {
        let masks = self.masks();
        (0..masks.len()).all(|i| (0..masks.len()).all(|j| i == j || !masks[i].is_subset(&masks[j])))
    }

    /// Drops every block contained in another block.
    pub fn reduce_to_maximal(&self) -> Cover {
        let masks = self.masks();
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .filter(|&(i, _)| {
                !masks
                    .iter()
                    .enumerate()
                    .any(|(j, m)| j != i && masks[i].is_subset(m))
            })
            .map(|(_, b)| b.clone())
            .collect();
        Cover {
            base: self.base.clone(),
            blocks,
        }
    }

    /// Graph joining every pair of points that share a block.
    pub fn coblocking_graph(&self) -> Graph {
        let mut g = Graph::empty(self.base.clone());
        for b in &self.blocks {
            for (i, &u) in b.iter().enumerate() {
                for &v in &b[i + 1..] {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Flag condition on a non-nested cover: every set of pairwise co-blocked
    /// points lies in a block. Equivalently the maximal cliques of the
    /// co-blocking graph are exactly the blocks.
    pub fn is_flag(&self) -> Result<bool, CoverError> {
        if !self.is_non_nested() {
            return Err(CoverError::NestedCover);
        }
        Ok(maximal_cliques(&self.coblocking_graph()) == self.blocks)
    }

    /// The least flag cover refined by this one: maximal cliques of the
    /// co-blocking graph.
    pub fn flagify(&self) -> FlagCover {
        FlagCover(Cover {
            base: self.base.clone(),
            blocks: maximal_cliques(&self.coblocking_graph()),
        })
    }

    /// Every block of `self` lies inside some block of `other`.
    pub fn refines(&self, other: &Cover) -> Result<bool, CoverError> {
        if self.base != other.base {
            return Err(CoverError::BaseMismatch);
        }
        let theirs = other.masks();
        Ok(self.blocks.iter().all(|b| {
            theirs.iter().any(|m| b.iter().all(|&v| m.contains(v)))
        }))
    }

    /// Blocks that are not contained in any block of `other`.
    pub fn unrefined_blocks(&self, other: &Cover) -> Result<Vec<Vec<usize>>, CoverError> {
        if self.base != other.base {
            return Err(CoverError::BaseMismatch);
        }
        let theirs = other.masks();
        Ok(self
            .blocks
            .iter()
            .filter(|b| !theirs.iter().any(|m| b.iter().all(|&v| m.contains(v))))
            .cloned()
            .collect())
    }

    pub(crate) fn masks(&self) -> Vec<FixedBitSet> {
        let n = self.base.len();
        self.blocks
            .iter()
            .map(|b| {
                let mut m = FixedBitSet::with_capacity(n);
                for &v in b {
                    m.insert(v);
                }
                m
            })
            .collect()
    }
}

impl Serialize for Cover {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CoverRepr {
            base: self.base.iter().map(String::as_str).collect(),
            clusters: self.label_blocks(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cover {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = OwnedCoverRepr::deserialize(deserializer)?;
        Cover::from_labels(&repr.base, &repr.clusters).map_err(D::Error::custom)
    }
}

#[derive(Serialize)]
struct CoverRepr<'a> {
    base: Vec<&'a str>,
    clusters: Vec<Vec<&'a str>>,
}

#[derive(Deserialize)]
struct OwnedCoverRepr {
    base: Vec<String>,
    clusters: Vec<Vec<String>>,
}

/// A non-nested cover satisfying the flag condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FlagCover(Cover);

impl FlagCover {
    /// Wraps a cover known to be non-nested and flag.
    pub(crate) fn new_unchecked(cover: Cover) -> Self {
        FlagCover(cover)
    }

    pub fn into_cover(self) -> Cover {
        self.0
    }

    pub fn as_cover(&self) -> &Cover {
        &self.0
    }
}

impl Deref for FlagCover {
    type Target = Cover;

    fn deref(&self) -> &Cover {
        &self.0
    }
}

impl TryFrom<Cover> for FlagCover {
    type Error = CoverError;

    fn try_from(cover: Cover) -> Result<Self, CoverError> {
        if !cover.is_non_nested() {
            return Err(CoverError::NestedCover);
        }
        let cliques = maximal_cliques(&cover.coblocking_graph());
        match cliques.into_iter().find(|c| !cover.blocks.contains(c)) {
            None => Ok(FlagCover(cover)),
            Some(c) => Err(CoverError::NotFlag(c.iter().map(|&v| cover.base[v].clone()).collect())),
        }
    }
}

impl<'de> Deserialize<'de> for FlagCover {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let cover = Cover::deserialize(deserializer)?;
        FlagCover::try_from(cover).map_err(D::Error::custom)
    }
}

/// Anything that maps source points to target points by canonical index.
pub trait SetMap {
    fn source_base(&self) -> &Labels;
    fn target_base(&self) -> &Labels;
    fn apply(&self, point: usize) -> usize;
}

impl SetMap for MetricMap {
    fn source_base(&self) -> &Labels {
        self.source().labels()
    }

    fn target_base(&self) -> &Labels {
        self.target().labels()
    }

    fn apply(&self, point: usize) -> usize {
        self.assignment()[point]
    }
}

/// A plain function between two finite label sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunction {
    pub source: Labels,
    pub target: Labels,
    pub assignment: Vec<usize>,
}

impl SetMap for SetFunction {
    fn source_base(&self) -> &Labels {
        &self.source
    }

    fn target_base(&self) -> &Labels {
        &self.target
    }

    fn apply(&self, point: usize) -> usize {
        self.assignment[point]
    }
}

/// `{ f⁻¹(B) : B ∈ d }` with empty preimages dropped. Non-maximal blocks are
/// kept; refinement against the raw preimage and its reduction agree.
pub fn preimage_cover<M: SetMap + ?Sized>(f: &M, d: &Cover) -> Result<Cover, CoverError> {
    if f.target_base() != d.base() {
        return Err(CoverError::BaseMismatch);
    }
    let source = f.source_base();
    let masks = d.masks();
    let blocks = masks
        .iter()
        .map(|m| (0..source.len()).filter(|&x| m.contains(f.apply(x))).collect::<Vec<_>>())
        .filter(|b| !b.is_empty())
        .collect();
    Ok(Cover::from_canonical(source.clone(), blocks))
}

/// `f` is a consistent map `(X, cx) -> (Y, cy)`: `cx` refines `f⁻¹(cy)`.
pub fn is_consistent_map<M: SetMap + ?Sized>(f: &M, cx: &Cover, cy: &Cover) -> Result<bool, CoverError> {
    if f.source_base() != cx.base() {
        return Err(CoverError::BaseMismatch);
    }
    cx.refines(&preimage_cover(f, cy)?)
}

/// A symmetric reflexive relation; reflexive pairs are implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    graph: Graph,
}

impl Relation {
    pub fn new(base: &[&str], pairs: &[(&str, &str)]) -> Result<Self, GraphError> {
        let pairs: Vec<(&str, &str)> = pairs.iter().copied().filter(|(a, b)| a != b).collect();
        Ok(Self {
            graph: Graph::from_label_edges(base, &pairs)?,
        })
    }

    pub fn from_graph(graph: Graph) -> Self {
        Self { graph }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn base(&self) -> &Labels {
        self.graph.labels()
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        a == b || self.graph.has_edge(a, b)
    }
}

/// All inclusion-maximal pairwise-related subsets: the maximal cliques of
/// the relation graph, with isolated points as singletons.
pub fn maximal_linked_sets(r: &Relation) -> FlagCover {
    FlagCover(Cover {
        base: r.base().clone(),
        blocks: maximal_cliques(&r.graph),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{FiniteMetricSpace, PathSpaceSpec};

    fn cover(base: &[&str], blocks: &[&[&str]]) -> Cover {
        let blocks: Vec<Vec<&str>> = blocks.iter().map(|b| b.to_vec()).collect();
        Cover::from_labels(base, &blocks).unwrap()
    }

    const ABC: &[&str] = &["a", "b", "c"];

    #[test]
    fn canonical_form_dedups_and_sorts() {
        let c = cover(ABC, &[&["c", "b"], &["b", "a"], &["a", "b"]]);
        assert_eq!(c.label_blocks(), vec![vec!["a", "b"], vec!["b", "c"]]);
    }

    #[test]
    fn construction_errors() {
        let missing: Vec<Vec<&str>> = vec![vec!["a"]];
        assert_eq!(Cover::from_labels(&["a", "b"], &missing), Err(CoverError::Uncovered("b".into())));
        let unknown: Vec<Vec<&str>> = vec![vec!["a", "z"]];
        assert_eq!(Cover::from_labels(&["a"], &unknown), Err(CoverError::UnknownPoint("z".into())));
        let empty: Vec<Vec<&str>> = vec![vec!["a"], vec![]];
        assert_eq!(Cover::from_labels(&["a"], &empty), Err(CoverError::EmptyBlock));
    }

    #[test]
    fn reduce_examples() {
        let ab = &["a", "b"];
        assert_eq!(cover(ab, &[&["a"], &["a", "b"]]).reduce_to_maximal(), cover(ab, &[&["a", "b"]]));
        let part = cover(ABC, &[&["a"], &["b", "c"]]);
        assert_eq!(part.reduce_to_maximal(), part);
        assert_eq!(
            cover(ABC, &[&["a", "b"], &["b", "c"], &["a", "b"]]).reduce_to_maximal().label_blocks(),
            vec![vec!["a", "b"], vec!["b", "c"]]
        );
    }

    #[test]
    fn flag_examples() {
        assert_eq!(cover(ABC, &[&["a", "b"], &["b", "c"]]).is_flag(), Ok(true));
        assert_eq!(cover(ABC, &[&["a", "b"], &["b", "c"], &["a", "c"]]).is_flag(), Ok(false));
        assert_eq!(cover(ABC, &[&["a"], &["b", "c"]]).is_flag(), Ok(true));
        assert_eq!(cover(ABC, &[&["a"], &["a", "b"], &["c"]]).is_flag(), Err(CoverError::NestedCover));
        let triangle = cover(ABC, &[&["a", "b"], &["b", "c"], &["a", "c"]]);
        assert_eq!(
            FlagCover::try_from(triangle),
            Err(CoverError::NotFlag(vec!["a".into(), "b".into(), "c".into()]))
        );
    }

    #[test]
    fn flagify_examples() {
        let triangle = cover(ABC, &[&["a", "b"], &["b", "c"], &["a", "c"]]);
        assert_eq!(*triangle.flagify(), cover(ABC, &[&["a", "b", "c"]]));
        let path = cover(ABC, &[&["a", "b"], &["b", "c"]]);
        assert_eq!(*path.flagify(), path);
        let singles = cover(&["a", "b"], &[&["a"], &["b"]]);
        assert_eq!(*singles.flagify(), singles);
        // nested input is reduced first
        assert_eq!(*cover(&["a", "b"], &[&["a"], &["a", "b"]]).flagify(), cover(&["a", "b"], &[&["a", "b"]]));
    }

    #[test]
    fn refinement_examples() {
        let singles = Cover::singletons(cover(ABC, &[&["a", "b", "c"]]).base().clone());
        let path = cover(ABC, &[&["a", "b"], &["b", "c"]]);
        let whole = cover(ABC, &[&["a", "b", "c"]]);
        assert_eq!(singles.refines(&path), Ok(true));
        assert_eq!(path.refines(&path), Ok(true));
        assert_eq!(whole.refines(&path), Ok(false));
        assert_eq!(path.refines(&whole), Ok(true));
        let other = cover(&["a", "b"], &[&["a", "b"]]);
        assert_eq!(path.refines(&other), Err(CoverError::BaseMismatch));
    }

    fn x3() -> FiniteMetricSpace {
        FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]],
        )
        .unwrap()
    }

    fn line() -> FiniteMetricSpace {
        FiniteMetricSpace::path_space(PathSpaceSpec { k: 1, delta: 1.0 })
    }

    #[test]
    fn preimage_examples() {
        let f = MetricMap::new(x3(), line(), [("a", "0"), ("b", "0"), ("c", "1")]).unwrap();
        let d = cover(&["0", "1"], &[&["0", "1"]]);
        assert_eq!(preimage_cover(&f, &d).unwrap(), cover(ABC, &[&["a", "b", "c"]]));
        let id = MetricMap::identity(x3());
        let path = cover(ABC, &[&["a", "b"], &["b", "c"]]);
        assert_eq!(preimage_cover(&id, &path).unwrap(), path);
        let constant = MetricMap::new(x3(), line(), [("a", "0"), ("b", "0"), ("c", "0")]).unwrap();
        let split = cover(&["0", "1"], &[&["0"], &["1"]]);
        assert_eq!(preimage_cover(&constant, &split).unwrap(), cover(ABC, &[&["a", "b", "c"]]));
    }

    #[test]
    fn consistency_examples() {
        let path = cover(ABC, &[&["a", "b"], &["b", "c"]]);
        let id = MetricMap::identity(x3());
        assert_eq!(is_consistent_map(&id, &path, &path), Ok(true));
        let f = MetricMap::new(x3(), line(), [("a", "0"), ("b", "0"), ("c", "1")]).unwrap();
        assert_eq!(is_consistent_map(&f, &path, &cover(&["0", "1"], &[&["0", "1"]])), Ok(true));
        let whole = cover(ABC, &[&["a", "b", "c"]]);
        assert_eq!(is_consistent_map(&id, &whole, &path), Ok(false));
        assert_eq!(is_consistent_map(&f, &path, &path), Err(CoverError::BaseMismatch));
    }

    #[test]
    fn linked_set_examples() {
        let path = Relation::new(ABC, &[("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(maximal_linked_sets(&path).label_blocks(), vec![vec!["a", "b"], vec!["b", "c"]]);
        let full = Relation::new(ABC, &[("a", "b"), ("b", "c"), ("a", "c"), ("a", "a")]).unwrap();
        assert_eq!(maximal_linked_sets(&full).label_blocks(), vec![vec!["a", "b", "c"]]);
        let none = Relation::new(&["a", "b"], &[]).unwrap();
        assert_eq!(maximal_linked_sets(&none).label_blocks(), vec![vec!["a"], vec!["b"]]);
        assert!(none.related(0, 0));
        assert!(!none.related(0, 1));
    }

    #[test]
    fn json_shape() {
        let path = cover(ABC, &[&["b", "c"], &["a", "b"]]);
        let text = serde_json::to_string(&path).unwrap();
        assert_eq!(text, r#"{"base":["a","b","c"],"clusters":[["a","b"],["b","c"]]}"#);
        let back: Cover = serde_json::from_str(&text).unwrap();
        assert_eq!(back, path);
        let flag: Result<FlagCover, _> =
            serde_json::from_str(r#"{"base":["a","b","c"],"clusters":[["a","b"],["b","c"],["a","c"]]}"#);
        assert!(flag.is_err());
    }
}
