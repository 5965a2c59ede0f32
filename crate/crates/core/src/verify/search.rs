//! Exhaustive search for maps that break functoriality.
//!
//! Candidate sources are all graphs on `n` labelled points, metrized with
//! `delta` on edges and `2 * delta` elsewhere; every threshold graph at
//! `delta` arises this way. Candidate maps collapse one pair of points, then
//! two pairs (two disjoint pairs or a triple); the target carries `delta`
//! between classes joined by some edge and `2 * delta` otherwise. Sizes grow
//! from two points upwards, and the first witness in this order is returned.

use rayon::prelude::*;
use serde::Serialize;

use super::random::padded_labels;
use super::{functoriality_violation, VerifyError, Violation};
use crate::functors::MethodSpec;
use crate::metric::{FiniteMetricSpace, MetricMap};

pub const DEFAULT_MAX_POINTS: usize = 6;
pub const DEFAULT_MAP_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub witness: Option<Violation>,
    pub maps_checked: u64,
    /// Whether every candidate up to `max_points` was examined.
    pub exhausted: bool,
}

pub fn find_counterexample(spec: &MethodSpec, max_points: usize, budget: u64) -> Result<SearchOutcome, VerifyError> {
    if !spec.method.is_threshold_family() {
        return Err(VerifyError::Unsupported(spec.to_string()));
    }
    let mut checked = 0u64;
    for n in 2..=max_points {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        let graphs = 1u64.checked_shl(pairs.len() as u32).filter(|&g| g > 0).unwrap_or(u64::MAX);
        for collapsed in 1..=2 {
            if collapsed >= n {
                break;
            }
            let maps = collapses(n, collapsed);
            let per_graph = maps.len() as u64;
            let remaining = budget - checked;
            let affordable = (remaining / per_graph).min(graphs);
            let hit = (0..affordable).into_par_iter().find_map_first(|mask| {
                let x = realize_graph(n, &pairs, mask, spec.delta);
                maps.iter().enumerate().find_map(|(m, classes)| {
                    let f = collapse(&x, classes, n - collapsed, spec.delta);
                    match functoriality_violation(0, spec, &f) {
                        Ok(None) => None,
                        other => Some((mask, m, other)),
                    }
                })
            });
            if let Some((mask, m, result)) = hit {
                let witness = result?;
                return Ok(SearchOutcome {
                    witness,
                    maps_checked: checked + mask * per_graph + m as u64 + 1,
                    exhausted: false,
                });
            }
            checked += affordable * per_graph;
            if affordable < graphs {
                return Ok(SearchOutcome { witness: None, maps_checked: checked, exhausted: false });
            }
        }
    }
    Ok(SearchOutcome { witness: None, maps_checked: checked, exhausted: true })
}

/// Class assignments merging exactly `collapsed` pairs' worth of points:
/// one pair, or two disjoint pairs or a triple. Classes are numbered by
/// their smallest member.
fn collapses(n: usize, collapsed: usize) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if collapsed == 1 {
                groups.push(vec![a, b]);
                continue;
            }
            for c in (b + 1)..n {
                groups.push(vec![a, b, c]);
            }
            for c in (a + 1)..n {
                for d in (c + 1)..n {
                    if c != b && d != b {
                        groups.push(vec![a, b, c, d]);
                    }
                }
            }
        }
    }
    groups
        .into_iter()
        .map(|g| {
            // g is a merged group (len 2 or 3) or two pairs (a, b) and (c, d)
            let mut rep: Vec<usize> = (0..n).collect();
            if g.len() == 4 {
                rep[g[1]] = g[0];
                rep[g[3]] = g[2];
            } else {
                for &v in &g[1..] {
                    rep[v] = g[0];
                }
            }
            let mut class = vec![usize::MAX; n];
            let mut next = 0;
            for v in 0..n {
                let r = rep[v];
                if class[r] == usize::MAX {
                    class[r] = next;
                    next += 1;
                }
                class[v] = class[r];
            }
            class
        })
        .collect()
}

fn realize_graph(n: usize, pairs: &[(usize, usize)], mask: u64, delta: f64) -> FiniteMetricSpace {
    let mut m = vec![vec![0.0; n]; n];
    for (bit, &(u, v)) in pairs.iter().enumerate() {
        let d = if mask >> bit & 1 == 1 { delta } else { 2.0 * delta };
        m[u][v] = d;
        m[v][u] = d;
    }
    FiniteMetricSpace::new(padded_labels("p", n), m).expect("two-valued distances form a metric")
}

fn collapse(x: &FiniteMetricSpace, class: &[usize], classes: usize, delta: f64) -> MetricMap {
    let mut m = vec![vec![2.0 * delta; classes]; classes];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for u in 0..x.len() {
        for v in 0..x.len() {
            let (a, b) = (class[u], class[v]);
            if a != b && x.dist(u, v) <= delta {
                m[a][b] = delta;
            }
        }
    }
    let y = FiniteMetricSpace::new(padded_labels("q", classes), m).expect("two-valued distances form a metric");
    MetricMap::from_indices(x.clone(), y, class.to_vec()).expect("classes in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functors::{Method, Steps};

    #[test]
    fn collapse_counts() {
        assert_eq!(collapses(4, 1).len(), 6);
        // 4 triples and 3 pairings of disjoint pairs
        assert_eq!(collapses(4, 2).len(), 7);
        assert_eq!(collapses(6, 2).len(), 20 + 45);
        for c in collapses(5, 2) {
            assert_eq!(c.iter().max(), Some(&2));
        }
    }

    #[test]
    fn vertex_linkage_witness_on_four_points() {
        let spec = Method::VertexLinkage { k: Steps::Finite(2) }.at(1.0);
        let out = find_counterexample(&spec, 4, 10_000).unwrap();
        let w = out.witness.expect("witness");
        assert!(w.replay().unwrap());
        match &w {
            Violation::Functoriality { source, .. } => assert_eq!(source.len(), 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_linkage_has_none() {
        let out = find_counterexample(&Method::SingleLinkage.at(1.0), 4, 1_000_000).unwrap();
        assert!(out.witness.is_none() && out.exhausted);
        let capped = find_counterexample(&Method::SingleLinkage.at(1.0), 5, 100).unwrap();
        assert!(!capped.exhausted && capped.maps_checked <= 100);
    }
}
