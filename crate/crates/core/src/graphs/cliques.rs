//! Maximal clique enumeration (Bron–Kerbosch with Tomita pivoting, outer
//! loop in degeneracy order).

use fixedbitset::FixedBitSet;

use super::Graph;

/// All maximal cliques of `g`, isolated vertices included as singletons.
/// Each clique is sorted and the list is in lexicographic order.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    maximal_cliques_within(g, &g.all_vertices())
}

/// Maximal cliques of the subgraph induced by `within`.
pub fn maximal_cliques_within(g: &Graph, within: &FixedBitSet) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut earlier = FixedBitSet::with_capacity(n);
    let mut clique = Vec::new();
    for v in degeneracy_order(g, within) {
        let mut nbrs = g.neighbors(v).clone();
        nbrs.intersect_with(within);
        let mut candidates = nbrs.clone();
        candidates.difference_with(&earlier);
        let mut excluded = nbrs;
        excluded.intersect_with(&earlier);
        clique.push(v);
        expand(g, &mut clique, candidates, excluded, &mut out);
        clique.pop();
        earlier.insert(v);
    }
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort_unstable();
    out
}

fn expand(
    g: &Graph,
    clique: &mut Vec<usize>,
    mut candidates: FixedBitSet,
    mut excluded: FixedBitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if candidates.is_clear() {
        if excluded.is_clear() {
            out.push(clique.clone());
        }
        return;
    }
    // Pivot maximizing |candidates ∩ N(u)| over candidates ∪ excluded.
    let pivot = candidates
        .ones()
        .chain(excluded.ones())
        .max_by_key(|&u| candidates.intersection_count(g.neighbors(u)))
        .expect("candidates is non-empty");
    let mut branch = candidates.clone();
    branch.difference_with(g.neighbors(pivot));
    for v in branch.ones() {
        let nbrs = g.neighbors(v);
        let mut next_candidates = candidates.clone();
        next_candidates.intersect_with(nbrs);
        let mut next_excluded = excluded.clone();
        next_excluded.intersect_with(nbrs);
        clique.push(v);
        expand(g, clique, next_candidates, next_excluded, out);
        clique.pop();
        candidates.set(v, false);
        excluded.insert(v);
    }
}

/// Repeatedly removes a vertex of minimum remaining degree.
fn degeneracy_order(g: &Graph, within: &FixedBitSet) -> Vec<usize> {
    let n = g.vertex_count();
    let mut degree = vec![0usize; n];
    let mut max_degree = 0;
    for v in within.ones() {
        degree[v] = g.neighbors(v).intersection_count(within);
        max_degree = max_degree.max(degree[v]);
    }
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_degree + 1];
    for v in within.ones() {
        buckets[degree[v]].push(v);
    }
    let mut removed = FixedBitSet::with_capacity(n);
    let mut order = Vec::with_capacity(within.count_ones(..));
    let mut low = 0;
    while order.len() < within.count_ones(..) {
        low = low.min(max_degree);
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop().expect("bucket is non-empty");
        // stale entries: vertex already removed or its degree has since dropped
        if removed.contains(v) || degree[v] != low {
            continue;
        }
        removed.insert(v);
        order.push(v);
        for u in g.neighbors(v).ones() {
            if within.contains(u) && !removed.contains(u) {
                degree[u] -= 1;
                buckets[degree[u]].push(u);
                low = low.min(degree[u]);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn named(g: &Graph, cliques: Vec<Vec<usize>>) -> Vec<Vec<String>> {
        cliques
            .into_iter()
            .map(|c| c.into_iter().map(|v| g.label(v).to_string()).collect())
            .collect()
    }

    #[test]
    fn small_examples() {
        let p = path3();
        assert_eq!(named(&p, maximal_cliques(&p)), vec![vec!["a", "b"], vec!["b", "c"]]);
        let b = bowtie();
        assert_eq!(named(&b, maximal_cliques(&b)), vec![vec!["1", "2", "3"], vec!["3", "4", "5"]]);
        let e = Graph::from_label_edges(&["a", "b"], &[]).unwrap();
        assert_eq!(named(&e, maximal_cliques(&e)), vec![vec!["a"], vec!["b"]]);
        let k = Graph::complete(p.labels().clone());
        assert_eq!(maximal_cliques(&k), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn restricted_to_subset() {
        let b = bowtie();
        let mut within = FixedBitSet::with_capacity(5);
        for v in [0, 1, 3] {
            within.insert(v);
        }
        assert_eq!(maximal_cliques_within(&b, &within), vec![vec![0, 1], vec![3]]);
    }
}
