//! Maximal k-vertex-connected subgraphs.
//!
//! A vertex set qualifies at level k when its induced subgraph is classically
//! k-connected (more than k vertices, connected after deleting any k - 1 of
//! them) or when it induces a complete graph on at most k vertices. With this
//! convention level 1 gives connected components and levels at or above the
//! vertex count give maximal cliques.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use super::Graph;
use crate::covers::Cover;

/// Maximal vertex sets qualifying at level `k` (see module docs). The output
/// may overlap and is reduced to its inclusion-maximal blocks.
pub fn max_vertex_connected_subgraphs(g: &Graph, k: usize) -> Cover {
    assert!(k >= 1, "connectivity level must be positive");
    let blocks = match k {
        1 => g.components_within(&g.all_vertices()),
        2 => biconnected_blocks(g),
        _ => {
            let mut leaves = Vec::new();
            for block in biconnected_blocks(g) {
                split(g, block, k, &mut leaves);
            }
            leaves
        }
    };
    Cover::from_canonical(g.labels().clone(), blocks).reduce_to_maximal()
}

fn split(g: &Graph, set: Vec<usize>, k: usize, leaves: &mut Vec<Vec<usize>>) {
    let mask = to_mask(g.vertex_count(), &set);
    if g.is_clique(&mask) {
        leaves.push(set);
        return;
    }
    let Some(cut) = vertex_cut_below(g, &set, k) else {
        leaves.push(set);
        return;
    };
    let mut rest = mask;
    for &c in &cut {
        rest.set(c, false);
    }
    for mut part in g.components_within(&rest) {
        part.extend_from_slice(&cut);
        part.sort_unstable();
        split(g, part, k, leaves);
    }
}

/// Biconnected blocks: maximal 2-connected subgraphs, bridges as 2-vertex
/// blocks and isolated vertices as singletons. Each block is sorted.
pub fn biconnected_blocks(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).ones().collect()).collect();
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut out = Vec::new();
    let mut vstack: Vec<usize> = Vec::new();
    // frame: (vertex, parent, next neighbor position)
    let mut frames: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        if adj[root].is_empty() {
            disc[root] = time;
            time += 1;
            out.push(vec![root]);
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        frames.push((root, UNSEEN, 0));
        while let Some(frame) = frames.last_mut() {
            let (v, parent, pos) = *frame;
            if pos < adj[v].len() {
                frame.2 += 1;
                let w = adj[v][pos];
                if disc[w] == UNSEEN {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    vstack.push(w);
                    frames.push((w, v, 0));
                } else if w != parent {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if parent == UNSEEN {
                    continue;
                }
                low[parent] = low[parent].min(low[v]);
                if low[v] >= disc[parent] {
                    let mut block = vec![parent];
                    while let Some(u) = vstack.pop() {
                        block.push(u);
                        if u == v {
                            break;
                        }
                    }
                    block.sort_unstable();
                    out.push(block);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// A minimum vertex separator of the subgraph induced by `vertices`, or
/// `None` when that subgraph is complete (no separator exists).
pub fn min_vertex_cut(g: &Graph, vertices: &[usize]) -> Option<Vec<usize>> {
    let mut best = vertex_cut_below(g, vertices, vertices.len())?;
    while let Some(smaller) = vertex_cut_below(g, vertices, best.len()) {
        best = smaller;
    }
    Some(best)
}

/// Some vertex separator of size `< k` of the induced subgraph on `vertices`,
/// if one exists.
///
/// Even's scheme: if a separator `C` with `|C| < k` exists, the first vertex
/// `v_i` (in the given order) outside `C` has `i <= |C| < k` and is separated
/// by `C` from some later vertex, so checking pairs `(v_i, v_j)` with `i < k`
/// and `j > i` is enough.
pub(crate) fn vertex_cut_below(g: &Graph, vertices: &[usize], k: usize) -> Option<Vec<usize>> {
    if k == 0 {
        return None;
    }
    let mut net = SplitNetwork::new(g, vertices);
    let m = vertices.len();
    for i in 0..m.min(k) {
        for j in (i + 1)..m {
            if g.has_edge(vertices[i], vertices[j]) {
                continue;
            }
            if let Some(cut) = net.separator_below(i, j, k) {
                return Some(cut.into_iter().map(|l| vertices[l]).collect());
            }
        }
    }
    None
}

fn to_mask(n: usize, set: &[usize]) -> FixedBitSet {
    let mut mask = FixedBitSet::with_capacity(n);
    for &v in set {
        mask.insert(v);
    }
    mask
}

/// Vertex-split unit-capacity flow network on an induced subgraph: local
/// vertex `v` becomes `in = 2v -> out = 2v + 1` with capacity 1, and each
/// undirected edge `{u, v}` becomes `out(u) -> in(v)` and `out(v) -> in(u)`
/// with unbounded capacity.
struct SplitNetwork {
    head: Vec<usize>,
    cap: Vec<u32>,
    original: Vec<u32>,
    adj: Vec<Vec<usize>>,
}

const UNBOUNDED: u32 = u32::MAX / 2;

impl SplitNetwork {
    fn new(g: &Graph, vertices: &[usize]) -> Self {
        let m = vertices.len();
        let mut net = Self {
            head: Vec::new(),
            cap: Vec::new(),
            original: Vec::new(),
            adj: vec![Vec::new(); 2 * m],
        };
        for v in 0..m {
            net.arc(2 * v, 2 * v + 1, 1);
        }
        for a in 0..m {
            for b in (a + 1)..m {
                if g.has_edge(vertices[a], vertices[b]) {
                    net.arc(2 * a + 1, 2 * b, UNBOUNDED);
                    net.arc(2 * b + 1, 2 * a, UNBOUNDED);
                }
            }
        }
        net.original = net.cap.clone();
        net
    }

    fn arc(&mut self, from: usize, to: usize, cap: u32) {
        self.adj[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(cap);
        self.adj[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    /// Max-flow from `out(s)` to `in(t)`, stopped at `k`. If the flow stays
    /// below `k` the minimum separator is returned (local indices).
    fn separator_below(&mut self, s: usize, t: usize, k: usize) -> Option<Vec<usize>> {
        self.cap.copy_from_slice(&self.original);
        let (source, sink) = (2 * s + 1, 2 * t);
        let nodes = self.adj.len();
        let mut flow = 0;
        let mut pred = vec![usize::MAX; nodes];
        loop {
            if flow >= k {
                return None;
            }
            pred.fill(usize::MAX);
            let mut queue = VecDeque::from([source]);
            let mut seen = vec![false; nodes];
            seen[source] = true;
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    break;
                }
                for &e in &self.adj[u] {
                    let w = self.head[e];
                    if !seen[w] && self.cap[e] > 0 {
                        seen[w] = true;
                        pred[w] = e;
                        queue.push_back(w);
                    }
                }
            }
            if !seen[sink] {
                // residual reachability from the source gives the min cut:
                // split vertices whose in-node is reachable but out-node is not.
                let cut = (0..nodes / 2)
                    .filter(|&v| seen[2 * v] && !seen[2 * v + 1])
                    .collect::<Vec<_>>();
                debug_assert_eq!(cut.len(), flow);
                return Some(cut);
            }
            let mut node = sink;
            while node != source {
                let e = pred[node];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                node = self.head[e ^ 1];
            }
            flow += 1;
        }
    }
}
