//! Maximal k-edge-connected subgraphs by recursive minimum-cut splitting.

use fixedbitset::FixedBitSet;

use super::{maximal_cliques, Graph};
use crate::covers::Cover;

/// Which vertex sets count as k-edge-connected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeConvention {
    /// Classical: induced subgraph stays connected after deleting any k - 1
    /// edges; singletons always qualify. The result is a partition.
    #[default]
    Standard,
    /// Additionally accepts complete subgraphs on at most k vertices, like the
    /// vertex-connectivity convention. The result may overlap.
    CliqueException,
}

/// Maximal k-edge-connected vertex sets under the standard convention.
pub fn max_edge_connected_subgraphs(g: &Graph, k: usize) -> Cover {
    max_edge_connected_subgraphs_with(g, k, EdgeConvention::Standard)
}

pub fn max_edge_connected_subgraphs_with(g: &Graph, k: usize, convention: EdgeConvention) -> Cover {
    assert!(k >= 1, "connectivity level must be positive");
    let all = g.all_vertices();
    let parts = match k {
        1 => g.components_within(&all),
        2 => {
            let mut pruned = g.clone();
            for (u, v) in bridges(g) {
                pruned.adjacency[u].set(v, false);
                pruned.adjacency[v].set(u, false);
            }
            pruned.components_within(&all)
        }
        _ => {
            let mut leaves = Vec::new();
            for comp in g.components_within(&all) {
                split(g, comp, k, &mut leaves);
            }
            leaves
        }
    };
    let cover = Cover::from_canonical(g.labels().clone(), parts);
    debug_assert!(cover.is_partition());
    match convention {
        EdgeConvention::Standard => cover,
        EdgeConvention::CliqueException => {
            // cliques on more than k vertices are already k-edge-connected
            let mut blocks = cover.blocks().to_vec();
            blocks.extend(maximal_cliques(g).into_iter().filter(|c| c.len() <= k));
            Cover::from_canonical(g.labels().clone(), blocks).reduce_to_maximal()
        }
    }
}

fn split(g: &Graph, set: Vec<usize>, k: usize, leaves: &mut Vec<Vec<usize>>) {
    if set.len() == 1 {
        leaves.push(set);
        return;
    }
    let mut mask = FixedBitSet::with_capacity(g.vertex_count());
    for &v in &set {
        mask.insert(v);
    }
    let comps = g.components_within(&mask);
    if comps.len() > 1 {
        for c in comps {
            split(g, c, k, leaves);
        }
        return;
    }
    let (weight, side) = stoer_wagner(g, &set);
    if weight >= k {
        leaves.push(set);
        return;
    }
    let (a, b): (Vec<usize>, Vec<usize>) = set.iter().partition(|v| side.contains(v));
    split(g, a, k, leaves);
    split(g, b, k, leaves);
}

/// Global minimum edge cut of the connected induced subgraph on `set`
/// (at least two vertices): its weight and one side.
fn stoer_wagner(g: &Graph, set: &[usize]) -> (usize, Vec<usize>) {
    let m = set.len();
    let mut w = vec![vec![0usize; m]; m];
    for a in 0..m {
        for b in 0..m {
            if a != b && g.has_edge(set[a], set[b]) {
                w[a][b] = 1;
            }
        }
    }
    // members[a]: original vertices merged into super-vertex a
    let mut members: Vec<Vec<usize>> = set.iter().map(|&v| vec![v]).collect();
    let mut active: Vec<usize> = (0..m).collect();
    let mut best = (usize::MAX, Vec::new());
    while active.len() > 1 {
        let mut added = vec![false; m];
        let mut weights = vec![0usize; m];
        let mut prev = active[0];
        let mut last = active[0];
        for step in 0..active.len() {
            let next = *active
                .iter()
                .filter(|&&a| !added[a])
                .max_by_key(|&&a| (weights[a], std::cmp::Reverse(a)))
                .expect("unadded vertex remains");
            added[next] = true;
            if step + 1 == active.len() {
                if weights[next] < best.0 {
                    best = (weights[next], members[next].clone());
                }
                prev = last;
                last = next;
                break;
            }
            prev = last;
            last = next;
            for &a in &active {
                weights[a] += w[next][a];
            }
        }
        // merge `last` into `prev`
        let moved = std::mem::take(&mut members[last]);
        members[prev].extend(moved);
        for &a in &active {
            w[prev][a] += w[last][a];
            w[a][prev] = w[prev][a];
        }
        w[prev][prev] = 0;
        active.retain(|&a| a != last);
    }
    best
}

/// Bridges `(u, v)` with `u < v`, sorted.
pub fn bridges(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).ones().collect()).collect();
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut out = Vec::new();
    let mut frames: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != UNSEEN {
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
                    frames.push((w, v, 0));
                } else if w != parent {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if parent != UNSEEN {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        out.push((parent.min(v), parent.max(v)));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn bowtie_is_two_edge_connected() {
        assert_eq!(blocks(&max_edge_connected_subgraphs(&bowtie(), 2)), vec![vec!["1", "2", "3", "4", "5"]]);
        // the general splitting path agrees with the bridge fast path
        let mut leaves = Vec::new();
        split(&bowtie(), vec![0, 1, 2, 3, 4], 2, &mut leaves);
        assert_eq!(leaves, vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn bowtie_splits_at_level_three() {
        assert_eq!(
            blocks(&max_edge_connected_subgraphs(&bowtie(), 3)),
            vec![vec!["1"], vec!["2"], vec!["3"], vec!["4"], vec!["5"]]
        );
    }

    #[test]
    fn tree_falls_apart() {
        assert_eq!(blocks(&max_edge_connected_subgraphs(&path3(), 2)), vec![vec!["a"], vec!["b"], vec!["c"]]);
        assert_eq!(bridges(&path3()), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn level_one_is_components() {
        assert_eq!(blocks(&max_edge_connected_subgraphs(&path3(), 1)), vec![vec!["a", "b", "c"]]);
    }

    #[test]
    fn clique_exception_keeps_small_cliques() {
        assert_eq!(
            blocks(&max_edge_connected_subgraphs_with(&path3(), 2, EdgeConvention::CliqueException)),
            vec![vec!["a", "b"], vec!["b", "c"]]
        );
    }

    #[test]
    fn stoer_wagner_on_two_triangles_joined_by_an_edge() {
        let g = Graph::from_label_edges(
            &["1", "2", "3", "4", "5", "6"],
            &[("1", "2"), ("2", "3"), ("1", "3"), ("4", "5"), ("5", "6"), ("4", "6"), ("3", "4")],
        )
        .unwrap();
        let (w, mut side) = stoer_wagner(&g, &[0, 1, 2, 3, 4, 5]);
        assert_eq!(w, 1);
        side.sort_unstable();
        assert!(side == vec![0, 1, 2] || side == vec![3, 4, 5]);
        assert_eq!(blocks(&max_edge_connected_subgraphs(&g, 2)), vec![vec!["1", "2", "3"], vec!["4", "5", "6"]]);
    }
}
