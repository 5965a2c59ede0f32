//! Property checks on seeded random instances, exhaustive oracles, and the
//! counterexample search.
//!
//! Every check returns a [`TrialReport`]. Each recorded [`Violation`] carries
//! its full inputs and can be re-run on its own with [`Violation::replay`].

mod checks;
mod oracles;
mod random;
mod search;

use std::time::Duration;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covers::{preimage_cover, Cover, CoverError, FlagCover, Relation};
use crate::functors::{maximal_linkage, realize_flag_cover, FunctorError, MethodSpec};
use crate::metric::{FiniteMetricSpace, MapError, MetricMap};
use crate::sieves::{build_sieve, check_sieve_axioms, sieve_consistent, SieveError};

pub use checks::{
    check_chain, check_functoriality, check_identities, check_ml_surjectivity, check_oracles, check_sandwich,
    check_sieve_functoriality, check_sieves,
};
pub use oracles::{
    brute_force_maximal_linked, iterative_flagify_oracle, MAX_FLAGIFY_ORACLE_POINTS, MAX_LINKED_ORACLE_POINTS,
};
pub use random::{
    padded_labels, random_cover, random_flag_cover, random_graph, random_map, random_map_with, random_metric,
    random_metric_with, random_morphism, random_space, trial_rng, Category, MetricMode,
};
pub use search::{find_counterexample, SearchOutcome, DEFAULT_MAP_BUDGET, DEFAULT_MAX_POINTS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("{points} points exceeds the oracle limit of {limit}")]
    TooLarge { points: usize, limit: usize },
    #[error("{0} cannot be used here")]
    Unsupported(String),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Sieve(#[from] SieveError),
}

/// Outcome of one check. `elapsed` is informational and not serialized, so
/// equal seeds give byte-identical JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<Category>,
    pub trials: usize,
    pub seed: u64,
    pub violations: Vec<Violation>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A failed property instance with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// `method(source)` does not refine the preimage of `method(target)`.
    Functoriality {
        trial: usize,
        method: MethodSpec,
        source: FiniteMetricSpace,
        target: FiniteMetricSpace,
        map: Vec<(String, String)>,
        unrefined_blocks: Vec<Vec<String>>,
    },
    /// `finer(space)` does not refine `coarser(space)`.
    Refinement {
        trial: usize,
        finer: MethodSpec,
        coarser: MethodSpec,
        space: FiniteMetricSpace,
        unrefined_blocks: Vec<Vec<String>>,
    },
    /// `left(space)` and `right(space)` differ.
    Mismatch {
        trial: usize,
        left: MethodSpec,
        right: MethodSpec,
        space: FiniteMetricSpace,
        left_blocks: Vec<Vec<String>>,
        right_blocks: Vec<Vec<String>>,
    },
    /// Maximal linkage on the realization of `cover` does not return it.
    MlSurjectivity {
        trial: usize,
        cover: Cover,
        delta: f64,
        recovered: Vec<Vec<String>>,
    },
    /// Fast and exhaustive maximal linked sets differ. The relation is given
    /// as a cover by its related pairs and isolated points.
    LinkedOracle {
        trial: usize,
        relation: Cover,
        fast: Vec<Vec<String>>,
        oracle: Vec<Vec<String>>,
    },
    /// Fast and iterative flagification differ.
    FlagifyOracle {
        trial: usize,
        cover: Cover,
        fast: Vec<Vec<String>>,
        oracle: Vec<Vec<String>>,
    },
    /// The swept method is not a sieve on `space` (`delta` is unused).
    SieveAxioms {
        trial: usize,
        method: MethodSpec,
        space: FiniteMetricSpace,
        detail: String,
    },
    /// The sieve at `t` differs from the flat method at `t`.
    SieveEvaluation {
        trial: usize,
        method: MethodSpec,
        space: FiniteMetricSpace,
        t: f64,
        sieve_blocks: Vec<Vec<String>>,
        flat_blocks: Vec<Vec<String>>,
    },
    /// The map is not consistent between the two sieves at some scale.
    SieveFunctoriality {
        trial: usize,
        method: MethodSpec,
        source: FiniteMetricSpace,
        target: FiniteMetricSpace,
        map: Vec<(String, String)>,
    },
}

fn owned_blocks(c: &Cover) -> Vec<Vec<String>> {
    c.label_blocks()
        .into_iter()
        .map(|b| b.into_iter().map(str::to_string).collect())
        .collect()
}

fn rebuild_map(
    source: &FiniteMetricSpace,
    target: &FiniteMetricSpace,
    pairs: &[(String, String)],
) -> Result<MetricMap, MapError> {
    MetricMap::new(
        source.clone(),
        target.clone(),
        pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())),
    )
}

/// Blocks of `method(f.source)` not contained in the preimage of
/// `method(f.target)`.
pub(crate) fn functoriality_failure(spec: &MethodSpec, f: &MetricMap) -> Result<Vec<Vec<String>>, VerifyError> {
    let cx = spec.apply(f.source())?;
    let cy = spec.apply(f.target())?;
    let pulled = preimage_cover(f, &cy)?;
    let bad = cx.unrefined_blocks(&pulled)?;
    Ok(bad
        .iter()
        .map(|b| b.iter().map(|&v| f.source().label(v).to_string()).collect())
        .collect())
}

pub(crate) fn functoriality_violation(trial: usize, spec: &MethodSpec, f: &MetricMap) -> Result<Option<Violation>, VerifyError> {
    let bad = functoriality_failure(spec, f)?;
    Ok((!bad.is_empty()).then(|| Violation::Functoriality {
        trial,
        method: spec.clone(),
        source: f.source().clone(),
        target: f.target().clone(),
        map: f.label_pairs(),
        unrefined_blocks: bad,
    }))
}

impl Violation {
    /// Re-runs the failed property on the stored inputs; `true` when it
    /// still fails.
    pub fn replay(&self) -> Result<bool, VerifyError> {
        Ok(match self {
            Violation::Functoriality { method, source, target, map, .. } => {
                let f = rebuild_map(source, target, map)?;
                !functoriality_failure(method, &f)?.is_empty()
            }
            Violation::Refinement { finer, coarser, space, .. } => !finer.apply(space)?.refines(coarser.apply(space)?.as_cover())?,
            Violation::Mismatch { left, right, space, .. } => left.apply(space)? != right.apply(space)?,
            Violation::MlSurjectivity { cover, delta, .. } => {
                maximal_linkage(&realize_flag_cover(cover, *delta), *delta).as_cover() != cover
            }
            Violation::LinkedOracle { relation, .. } => {
                let r = Relation::from_graph(relation.coblocking_graph());
                crate::covers::maximal_linked_sets(&r) != brute_force_maximal_linked(&r)?
            }
            Violation::FlagifyOracle { cover, .. } => cover.flagify() != iterative_flagify_oracle(cover)?,
            Violation::SieveAxioms { method, space, .. } => match build_sieve(space, &method.method) {
                Ok(s) => !check_sieve_axioms(&s).sieve,
                Err(SieveError::MonotonicityViolation { .. } | SieveError::NoTrivialCover) => true,
                Err(e) => return Err(e.into()),
            },
            Violation::SieveEvaluation { method, space, t, .. } => {
                let s = build_sieve(space, &method.method)?;
                *s.evaluate(*t) != method.method.clone().at(*t).apply(space)?
            }
            Violation::SieveFunctoriality { method, source, target, map, .. } => {
                let f = rebuild_map(source, target, map)?;
                let sx = build_sieve(source, &method.method)?;
                let sy = build_sieve(target, &method.method)?;
                !sieve_consistent(&f, &sx, &sy)?
            }
        })
    }
}

/// Runs `trial` for each index on its own RNG stream; violations come back
/// in trial order.
pub(crate) fn run_trials<F>(trials: usize, seed: u64, trial: F) -> Result<Vec<Violation>, VerifyError>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Result<Vec<Violation>, VerifyError> + Sync,
{
    let per_trial: Vec<Result<Vec<Violation>, VerifyError>> = (0..trials)
        .into_par_iter()
        .map(|i| trial(i, &mut trial_rng(seed, i)))
        .collect();
    let mut out = Vec::new();
    for r in per_trial {
        out.extend(r?);
    }
    Ok(out)
}

pub(crate) fn flag_blocks(c: &FlagCover) -> Vec<Vec<String>> {
    owned_blocks(c.as_cover())
}
