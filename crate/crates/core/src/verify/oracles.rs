//! Exhaustive reference implementations, slow on purpose.

use crate::covers::{Cover, FlagCover, Relation};

use super::VerifyError;

pub const MAX_LINKED_ORACLE_POINTS: usize = 16;
pub const MAX_FLAGIFY_ORACLE_POINTS: usize = 10;

/// Maximal pairwise-related subsets found by checking every subset.
pub fn brute_force_maximal_linked(r: &Relation) -> Result<FlagCover, VerifyError> {
    let n = r.base().len();
    if n > MAX_LINKED_ORACLE_POINTS {
        return Err(VerifyError::TooLarge { points: n, limit: MAX_LINKED_ORACLE_POINTS });
    }
    let related: Vec<u32> = (0..n)
        .map(|u| (0..n).filter(|&v| r.related(u, v)).fold(0, |m, v| m | 1 << v))
        .collect();
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let linked = |s: u32| (0..n).filter(|&u| s >> u & 1 == 1).all(|u| s & !related[u] == 0);
    let mut linked_sets = Vec::new();
    for s in 1..=full {
        if linked(s) {
            linked_sets.push(s);
        }
    }
    // a linked set is maximal iff no single point can be added
    let maximal: Vec<Vec<usize>> = linked_sets
        .iter()
        .copied()
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 1 || !linked(s | 1 << v)))
        .map(|s| (0..n).filter(|&v| s >> v & 1 == 1).collect())
        .collect();
    let cover = Cover::new(r.base().clone(), maximal).expect("every point lies in a linked set");
    Ok(FlagCover::new_unchecked(cover))
}

/// Flagification by repeatedly adjoining any pairwise co-blocked set that no
/// block contains, then keeping the maximal blocks.
pub fn iterative_flagify_oracle(c: &Cover) -> Result<FlagCover, VerifyError> {
    let n = c.base().len();
    if n > MAX_FLAGIFY_ORACLE_POINTS {
        return Err(VerifyError::TooLarge { points: n, limit: MAX_FLAGIFY_ORACLE_POINTS });
    }
    let to_mask = |b: &[usize]| b.iter().fold(0u32, |m, &v| m | 1 << v);
    let mut blocks: Vec<u32> = c.blocks().iter().map(|b| to_mask(b)).collect();
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    // larger candidates first, so mandated sets are adjoined whole
    let mut candidates: Vec<u32> = (1..=full).collect();
    candidates.sort_by_key(|s| (std::cmp::Reverse(s.count_ones()), *s));
    loop {
        let coblocked = |u: usize, v: usize| blocks.iter().any(|&b| b >> u & 1 == 1 && b >> v & 1 == 1);
        let mandated = candidates.iter().copied().find(|&s| {
            let members: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
            let pairwise = members
                .iter()
                .enumerate()
                .all(|(i, &u)| members[i + 1..].iter().all(|&v| coblocked(u, v)));
            pairwise && !blocks.iter().any(|&b| b & s == s)
        });
        match mandated {
            Some(s) => blocks.push(s),
            None => break,
        }
    }
    let maximal: Vec<Vec<usize>> = blocks
        .iter()
        .enumerate()
        .filter(|&(i, &b)| {
            !blocks
                .iter()
                .enumerate()
                .any(|(j, &o)| o & b == b && (o != b || j < i))
        })
        .map(|(_, &b)| (0..n).filter(|&v| b >> v & 1 == 1).collect())
        .collect();
    let cover = Cover::new(c.base().clone(), maximal).expect("blocks only grow");
    Ok(FlagCover::new_unchecked(cover))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;

    #[test]
    fn linked_examples() {
        let path = Relation::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(brute_force_maximal_linked(&path).unwrap().label_blocks(), vec![vec!["a", "b"], vec!["b", "c"]]);
        let k4 = Relation::from_graph(Graph::complete(vec!["a".into(), "b".into(), "c".into(), "d".into()].into()));
        assert_eq!(brute_force_maximal_linked(&k4).unwrap().len(), 1);
    }

    #[test]
    fn petersen_blocks_are_its_edges() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5));
        let labels: Vec<String> = (0..10).map(|i| i.to_string()).collect();
        let g = Graph::from_edges(labels.into(), outer.chain(spokes).chain(inner)).unwrap();
        let out = brute_force_maximal_linked(&Relation::from_graph(g)).unwrap();
        assert_eq!(out.len(), 15);
        assert!(out.blocks().iter().all(|b| b.len() == 2));
    }

    #[test]
    fn too_large() {
        let labels: Vec<String> = (0..17).map(|i| format!("{i:02}")).collect();
        let r = Relation::from_graph(Graph::empty(labels.into()));
        assert_eq!(
            brute_force_maximal_linked(&r),
            Err(VerifyError::TooLarge { points: 17, limit: 16 })
        );
    }

    #[test]
    fn flagify_examples() {
        let tri = Cover::from_labels(&["a", "b", "c"], &[vec!["a", "b"], vec!["b", "c"], vec!["a", "c"]]).unwrap();
        assert_eq!(iterative_flagify_oracle(&tri).unwrap().label_blocks(), vec![vec!["a", "b", "c"]]);
        let flag = Cover::from_labels(&["a", "b", "c"], &[vec!["a", "b"], vec!["b", "c"]]).unwrap();
        assert_eq!(iterative_flagify_oracle(&flag).unwrap().as_cover(), &flag);
    }
}
