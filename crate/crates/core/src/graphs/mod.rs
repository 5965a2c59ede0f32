//! Threshold graphs and the connectivity and closure algorithms the linkage
//! functors are built on.

mod cliques;
mod closure;
mod edge;
mod vertex;

use std::fmt::Write as _;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::covers::Cover;
use crate::metric::{label_index, FiniteMetricSpace, Labels};

pub use cliques::{maximal_cliques, maximal_cliques_within};
pub use closure::{bk_closure, bk_star_closure};
pub use edge::{bridges, max_edge_connected_subgraphs, max_edge_connected_subgraphs_with, EdgeConvention};
pub use vertex::{biconnected_blocks, max_vertex_connected_subgraphs, min_vertex_cut};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("vertex index {0} is out of range")]
    OutOfRange(usize),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Undirected simple graph on labeled vertices, stored as adjacency bitsets.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Labels,
    adjacency: Vec<FixedBitSet>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let edges: Vec<(&str, &str)> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (self.label(u), self.label(v)))
            .collect();
        f.debug_struct("Graph")
            .field("vertices", &self.labels)
            .field("edges", &edges)
            .finish()
    }
}

impl Graph {
    /// Edgeless graph; `labels` must already be in canonical (sorted) order.
    pub fn empty(labels: Labels) -> Self {
        let n = labels.len();
        Self {
            labels,
            adjacency: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn complete(labels: Labels) -> Self {
        let mut g = Self::empty(labels);
        let n = g.vertex_count();
        for u in 0..n {
            g.adjacency[u].insert_range(..);
            g.adjacency[u].set(u, false);
        }
        g
    }

    pub fn from_edges<I>(labels: Labels, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(labels);
        let n = g.vertex_count();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange(u.max(v)));
            }
            if u == v {
                return Err(GraphError::SelfLoop(g.labels[u].clone()));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from arbitrary labels (sorted here) and label pairs.
    pub fn from_label_edges(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self, GraphError> {
        let mut sorted: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0].clone()));
        }
        let index = label_index(&sorted);
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| GraphError::UnknownVertex(s.to_string()))
        };
        let pairs = edges
            .iter()
            .map(|&(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::from_edges(Arc::from(sorted), pairs)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count())
            .flat_map(|u| self.adjacency[u].ones().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
    }

    /// True iff every edge of `self` is an edge of `other` (same vertex set).
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.labels == other.labels
            && self
                .adjacency
                .iter()
                .zip(&other.adjacency)
                .all(|(a, b)| a.is_subset(b))
    }

    pub(crate) fn all_vertices(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.vertex_count());
        s.insert_range(..);
        s
    }

    /// True iff the vertices in `set` are pairwise adjacent.
    pub(crate) fn is_clique(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|v| {
            let mut others = set.clone();
            others.set(v, false);
            others.is_subset(&self.adjacency[v])
        })
    }

    /// Connected components of the subgraph induced by `within`, each sorted.
    pub(crate) fn components_within(&self, within: &FixedBitSet) -> Vec<Vec<usize>> {
        let mut unseen = within.clone();
        let mut out = Vec::new();
        let mut stack = Vec::new();
        while let Some(start) = unseen.minimum() {
            unseen.set(start, false);
            stack.push(start);
            let mut comp = vec![start];
            while let Some(u) = stack.pop() {
                let mut next = self.adjacency[u].clone();
                next.intersect_with(&unseen);
                for v in next.ones() {
                    unseen.set(v, false);
                    comp.push(v);
                    stack.push(v);
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Plain-text edge list: header `n <count>`, then one `u v` line per edge
    /// using 0-based vertex positions in canonical order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.vertex_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the edge-list format. Vertices are labeled by their positions.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_err = |line, message: &str| GraphError::Parse {
            line,
            message: message.to_string(),
        };
        let (line, header) = lines.next().ok_or_else(|| parse_err(1, "missing `n <count>` header"))?;
        let count = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["n", count] => count
                .parse::<usize>()
                .map_err(|_| parse_err(line, "vertex count is not an integer"))?,
            _ => return Err(parse_err(line, "expected `n <count>` header")),
        };
        let width = count.saturating_sub(1).to_string().len();
        let labels: Vec<String> = (0..count).map(|i| format!("{i:0width$}")).collect();
        let mut edges = Vec::new();
        for (line, l) in lines {
            let fields: Vec<&str> = l.split_whitespace().collect();
            let [u, v] = fields.as_slice() else {
                return Err(parse_err(line, "expected `u v`"));
            };
            let u: usize = u.parse().map_err(|_| parse_err(line, "vertex is not an integer"))?;
            let v: usize = v.parse().map_err(|_| parse_err(line, "vertex is not an integer"))?;
            edges.push((u, v));
        }
        Self::from_edges(Arc::from(labels), edges)
    }

    /// Graphviz DOT rendering.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph \"{}\" {{\n", escape(name));
        for l in self.labels.iter() {
            let _ = writeln!(out, "  \"{}\";", escape(l));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", escape(&self.labels[u]), escape(&self.labels[v]));
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Edge `{u, v}` iff `d(u, v) <= delta`.
pub fn threshold_graph(x: &FiniteMetricSpace, delta: f64) -> Graph {
    let mut g = Graph::empty(x.labels().clone());
    let n = x.len();
    for u in 0..n {
        let row = x.row(u);
        for v in (u + 1)..n {
            if row[v] <= delta {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Partition of the vertices into connected components.
pub fn connected_components(g: &Graph) -> Cover {
    let blocks = g.components_within(&g.all_vertices());
    Cover::from_canonical(g.labels().clone(), blocks)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn path3() -> Graph {
        Graph::from_label_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
    }

    pub fn cycle4() -> Graph {
        Graph::from_label_edges(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap()
    }

    pub fn bowtie() -> Graph {
        Graph::from_label_edges(
            &["1", "2", "3", "4", "5"],
            &[("1", "2"), ("2", "3"), ("1", "3"), ("3", "4"), ("4", "5"), ("3", "5")],
        )
        .unwrap()
    }

    pub fn blocks(c: &Cover) -> Vec<Vec<&str>> {
        c.label_blocks()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::metric::FiniteMetricSpace;

    fn x3() -> FiniteMetricSpace {
        FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]],
        )
        .unwrap()
    }

    #[test]
    fn thresholding_x3() {
        assert_eq!(threshold_graph(&x3(), 1.0), path3());
        assert_eq!(threshold_graph(&x3(), 2.0).edge_count(), 3);
        assert_eq!(threshold_graph(&x3(), 0.5).edge_count(), 0);
    }

    #[test]
    fn threshold_is_inclusive_for_zero_distances() {
        let x = FiniteMetricSpace::new(vec!["a".into(), "b".into()], vec![vec![0.0; 2]; 2]).unwrap();
        assert_eq!(threshold_graph(&x, 0.0).edge_count(), 1);
    }

    #[test]
    fn components_examples() {
        assert_eq!(blocks(&connected_components(&path3())), vec![vec!["a", "b", "c"]]);
        let empty = Graph::from_label_edges(&["a", "b"], &[]).unwrap();
        assert_eq!(blocks(&connected_components(&empty)), vec![vec!["a"], vec!["b"]]);
        let two = Graph::from_label_edges(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]).unwrap();
        assert_eq!(blocks(&connected_components(&two)), vec![vec!["a", "b"], vec!["c", "d"]]);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(Arc::from(vec!["0".to_string(), "1".into(), "2".into()]), [(0, 1), (1, 2)]).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text, "n 3\n0 1\n1 2\n");
        assert_eq!(Graph::from_edge_list(&text).unwrap(), g);
        assert!(matches!(Graph::from_edge_list("n 2\n0 0\n"), Err(GraphError::SelfLoop(_))));
        assert!(matches!(Graph::from_edge_list("n 2\n0\n"), Err(GraphError::Parse { line: 2, .. })));
    }

    #[test]
    fn dot_output() {
        let dot = path3().to_dot("x3");
        assert!(dot.starts_with("graph \"x3\" {"));
        assert!(dot.contains("\"a\" -- \"b\";"));
        assert!(!dot.contains("\"a\" -- \"c\";"));
    }

    #[test]
    fn rejects_loops_and_unknown_vertices() {
        assert!(matches!(Graph::from_label_edges(&["a"], &[("a", "a")]), Err(GraphError::SelfLoop(_))));
        assert!(matches!(Graph::from_label_edges(&["a"], &[("a", "z")]), Err(GraphError::UnknownVertex(_))));
    }
}
