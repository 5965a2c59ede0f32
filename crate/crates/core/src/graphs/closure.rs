//! Edge-adding closures behind the overlap-restricting B_k and B_k* methods.
//!
//! `bk_closure` joins non-adjacent `a`, `b` whenever their common
//! neighbourhood contains a complete subgraph on `k` vertices;
//! `bk_star_closure` only asks for `k` common neighbours. Both rules are
//! applied until nothing changes. The rules are monotone, so the fixed point
//! does not depend on the order of application.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use super::Graph;

pub fn bk_closure(g: &Graph, k: usize) -> Graph {
    saturate(g, |common, graph| contains_clique(graph, common, k))
}

pub fn bk_star_closure(g: &Graph, k: usize) -> Graph {
    saturate(g, |common, _| common.count_ones(..) >= k)
}

/// Worklist saturation. After adding `{a, b}`, the only pairs whose rule can
/// newly fire are `{a, w}` for `w ∈ N(b)`, `{b, w}` for `w ∈ N(a)`, and pairs
/// inside `N(a) ∩ N(b)` (their common neighbourhoods gained the edge).
fn saturate<F>(g: &Graph, fires: F) -> Graph
where
    F: Fn(&FixedBitSet, &Graph) -> bool,
{
    let n = g.vertex_count();
    let mut out = g.clone();
    let mut queued = vec![FixedBitSet::with_capacity(n); n];
    let mut work = VecDeque::new();
    fn push(work: &mut VecDeque<(usize, usize)>, queued: &mut [FixedBitSet], a: usize, b: usize) {
        let (a, b) = (a.min(b), a.max(b));
        if a != b && !queued[a].contains(b) {
            queued[a].insert(b);
            work.push_back((a, b));
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if !out.has_edge(a, b) {
                push(&mut work, &mut queued, a, b);
            }
        }
    }
    while let Some((a, b)) = work.pop_front() {
        queued[a].set(b, false);
        if out.has_edge(a, b) {
            continue;
        }
        let mut common = out.neighbors(a).clone();
        common.intersect_with(out.neighbors(b));
        if !fires(&common, &out) {
            continue;
        }
        out.add_edge(a, b);
        for w in out.neighbors(b).ones().collect::<Vec<_>>() {
            if !out.has_edge(a, w) {
                push(&mut work, &mut queued, a, w);
            }
        }
        for w in out.neighbors(a).ones().collect::<Vec<_>>() {
            if !out.has_edge(b, w) {
                push(&mut work, &mut queued, b, w);
            }
        }
        let inside: Vec<usize> = common.ones().collect();
        for (i, &u) in inside.iter().enumerate() {
            for &v in &inside[i + 1..] {
                if !out.has_edge(u, v) {
                    push(&mut work, &mut queued, u, v);
                }
            }
        }
    }
    out
}

/// Does `within` contain `k` pairwise adjacent vertices?
fn contains_clique(g: &Graph, within: &FixedBitSet, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if within.count_ones(..) < k {
        return false;
    }
    within.ones().any(|v| {
        // extend with later vertices only, so each clique is tried once
        let mut rest = g.neighbors(v).clone();
        rest.intersect_with(within);
        rest.set_range(..v + 1, false);
        contains_clique(g, &rest, k - 1)
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn path_is_closed_under_both_rules() {
        assert_eq!(bk_closure(&path3(), 2), path3());
        assert_eq!(bk_star_closure(&path3(), 2), path3());
    }

    #[test]
    fn cycle_examples() {
        assert_eq!(bk_closure(&cycle4(), 2), cycle4());
        let star = bk_star_closure(&cycle4(), 2);
        assert_eq!(star, Graph::complete(cycle4().labels().clone()));
    }

    #[test]
    fn complete_and_edgeless_are_fixed() {
        let k = Graph::complete(cycle4().labels().clone());
        assert_eq!(bk_closure(&k, 2), k);
        let e = Graph::empty(cycle4().labels().clone());
        assert_eq!(bk_star_closure(&e, 1), e);
    }

    #[test]
    fn two_triangles_on_an_edge_close_to_k4() {
        let g = Graph::from_label_edges(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("a", "c"), ("b", "c"), ("b", "d"), ("c", "d")],
        )
        .unwrap();
        assert_eq!(bk_closure(&g, 2).edge_count(), 6);
        assert_eq!(bk_closure(&g, 3), g);
        assert_eq!(bk_closure(&g, 1).edge_count(), 6);
    }

    #[test]
    fn clique_search() {
        let g = cycle4();
        let all = g.all_vertices();
        assert!(contains_clique(&g, &all, 2));
        assert!(!contains_clique(&g, &all, 3));
    }
}
