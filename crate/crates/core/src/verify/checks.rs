//! Seeded property checks. Each trial draws its inputs from its own RNG
//! stream (see [`trial_rng`](super::trial_rng)).

use std::time::Instant;

use rand::Rng;

use super::random::{random_cover, random_flag_cover, random_graph, random_morphism, random_space, Category};
use super::{flag_blocks, functoriality_violation, owned_blocks, run_trials, TrialReport, VerifyError, Violation};
use super::oracles::{brute_force_maximal_linked, iterative_flagify_oracle};
use crate::covers::{maximal_linked_sets, Cover, Relation};
use crate::functors::{clustering_parameter, maximal_linkage, realize_flag_cover, Method, MethodSpec, Steps};
use crate::metric::FiniteMetricSpace;
use crate::sieves::{build_sieve, check_sieve_axioms, sieve_consistent, SieveError};

/// Largest source space drawn by the functoriality checks.
const FUNCTORIALITY_POINTS: usize = 10;
const SANDWICH_POINTS: usize = 8;
const CHAIN_POINTS: usize = 10;
const SURJECTIVITY_POINTS: usize = 7;
const LINKED_ORACLE_POINTS: usize = 12;
const FLAGIFY_ORACLE_POINTS: usize = 8;
/// Sieve checks start at three points: on two points the standard edge
/// linkage never merges, so it cannot reach the trivial cover.
const SIEVE_POINTS: (usize, usize) = (3, 10);
const SIEVE_SAMPLES: usize = 10;

fn report(
    check: &str,
    method: Option<MethodSpec>,
    category: Option<Category>,
    trials: usize,
    seed: u64,
    started: Instant,
    violations: Vec<Violation>,
) -> TrialReport {
    TrialReport {
        check: check.to_string(),
        method,
        category,
        trials,
        seed,
        violations,
        elapsed: started.elapsed(),
    }
}

fn refinement(trial: usize, finer: &MethodSpec, coarser: &MethodSpec, x: &FiniteMetricSpace) -> Result<Option<Violation>, VerifyError> {
    let (a, b) = (finer.apply(x)?, coarser.apply(x)?);
    let bad = a.unrefined_blocks(&b)?;
    Ok((!bad.is_empty()).then(|| Violation::Refinement {
        trial,
        finer: finer.clone(),
        coarser: coarser.clone(),
        space: x.clone(),
        unrefined_blocks: owned_blocks(&Cover::new(x.labels().clone(), bad).expect("blocks of a cover")),
    }))
}

fn mismatch(trial: usize, left: &MethodSpec, right: &MethodSpec, x: &FiniteMetricSpace) -> Result<Option<Violation>, VerifyError> {
    let (a, b) = (left.apply(x)?, right.apply(x)?);
    Ok((a != b).then(|| Violation::Mismatch {
        trial,
        left: left.clone(),
        right: right.clone(),
        space: x.clone(),
        left_blocks: flag_blocks(&a),
        right_blocks: flag_blocks(&b),
    }))
}

/// `spec(X)` refines the preimage of `spec(Y)` for random morphisms
/// `f: X -> Y` of the category.
pub fn check_functoriality(spec: &MethodSpec, trials: usize, category: Category, seed: u64) -> Result<TrialReport, VerifyError> {
    let started = Instant::now();
    let violations = run_trials(trials, seed, |i, rng| {
        let f = random_morphism(rng, category, FUNCTORIALITY_POINTS);
        Ok(functoriality_violation(i, spec, &f)?.into_iter().collect())
    })?;
    Ok(report("functoriality", Some(spec.clone()), Some(category), trials, seed, started, violations))
}

/// `ML(X)` refines `spec(X)` refines `SL(X)`, both at the clustering
/// parameter of `spec`.
pub fn check_sandwich(spec: &MethodSpec, trials: usize, seed: u64) -> Result<TrialReport, VerifyError> {
    let started = Instant::now();
    let delta_f = clustering_parameter(spec)?.delta_f;
    let ml = Method::MaximalLinkage.at(delta_f);
    let sl = Method::SingleLinkage.at(delta_f);
    let violations = run_trials(trials, seed, |i, rng| {
        let x = random_space(rng, 1, SANDWICH_POINTS);
        Ok([refinement(i, &ml, spec, &x)?, refinement(i, spec, &sl, &x)?]
            .into_iter()
            .flatten()
            .collect())
    })?;
    Ok(report("sandwich", Some(spec.clone()), None, trials, seed, started, violations))
}

fn vl(k: Steps, delta: f64) -> MethodSpec {
    Method::VertexLinkage { k }.at(delta)
}

/// `VL^{k+1}` refines `VL^k` for `k = 1..=4`, `ML` refines every `VL^k`, and
/// `VL^1 = SL`.
pub fn check_chain(delta: f64, trials: usize, seed: u64) -> Result<TrialReport, VerifyError> {
    let started = Instant::now();
    let ml = Method::MaximalLinkage.at(delta);
    let sl = Method::SingleLinkage.at(delta);
    let violations = run_trials(trials, seed, |i, rng| {
        let x = random_space(rng, 1, CHAIN_POINTS);
        let mut found = Vec::new();
        for k in 1..=4 {
            found.extend(refinement(i, &vl(Steps::Finite(k + 1), delta), &vl(Steps::Finite(k), delta), &x)?);
        }
        for k in (1..=x.len().max(5)).map(Steps::Finite).chain([Steps::Infinite]) {
            found.extend(refinement(i, &ml, &vl(k, delta), &x)?);
        }
        found.extend(mismatch(i, &vl(Steps::Finite(1), delta), &sl, &x)?);
        Ok(found)
    })?;
    Ok(report("chain", None, None, trials, seed, started, violations))
}

/// `L^1 = ML`, `L^inf = SL` and `VL^{|X|} = ML`.
pub fn check_identities(delta: f64, trials: usize, seed: u64) -> Result<TrialReport, VerifyError> {
    let started = Instant::now();
    let ml = Method::MaximalLinkage.at(delta);
    let sl = Method::SingleLinkage.at(delta);
    let l = |k| Method::KLinkage { steps: k, budget: crate::functors::Budget::Infinite }.at(delta);
    let violations = run_trials(trials, seed, |i, rng| {
        let x = random_space(rng, 1, CHAIN_POINTS);
        Ok([
            mismatch(i, &l(Steps::Finite(1)), &ml, &x)?,
            mismatch(i, &l(Steps::Infinite), &sl, &x)?,
            mismatch(i, &vl(Steps::Finite(x.len()), delta), &ml, &x)?,
        ]
        .into_iter()
        .flatten()
        .collect())
    })?;
    Ok(report("identities", None, None, trials, seed, started, violations))
}

/// Realizing a random flag cover with edge length `delta` and non-edge
/// length `2 * delta` and applying `ML_delta` gives the cover back.
pub fn check_ml_surjectivity(delta: f64, trials: usize, seed: u64) -> Result<TrialReport, VerifyError> {
    let started = Instant::now();
    let violations = run_trials(trials, seed, |i, rng| {
        let n = rng.random_range(1..=SURJECTIVITY_POINTS);
        let cover = random_flag_cover(rng, n).into_cover();
        let recovered = maximal_linkage(&realize_flag_cover(&cover, delta), delta);
        Ok((recovered.as_cover() != &cover)
            .then(|| Violation::MlSurjectivity {
                trial: i,
                cover,
                delta,
                recovered: flag_blocks(&recovered),
            })
            .into_iter()
            .collect())
    })?;
    Ok(report("ml-surjectivity", None, None, trials, seed, started, violations))
}

/// Each trial compares maximal cliques with exhaustive enumeration on a
/// random relation, and flagification with the iterative fixed point on a
/// random cover.
pub fn check_oracles(trials: usize, seed: u64) -> Result<TrialReport, VerifyError> {
    let started = Instant::now();
    let violations = run_trials(trials, seed, |i, rng| {
        let mut found = Vec::new();
        let n = rng.random_range(1..=LINKED_ORACLE_POINTS);
        let g = random_graph(rng, n);
        let r = Relation::from_graph(g.clone());
        let (fast, slow) = (maximal_linked_sets(&r), brute_force_maximal_linked(&r)?);
        if fast != slow {
            let mut blocks: Vec<Vec<usize>> = g.edges().into_iter().map(|(u, v)| vec![u, v]).collect();
            blocks.extend((0..n).filter(|&v| g.degree(v) == 0).map(|v| vec![v]));
            found.push(Violation::LinkedOracle {
                trial: i,
                relation: Cover::new(g.labels().clone(), blocks)?,
                fast: flag_blocks(&fast),
                oracle: flag_blocks(&slow),
            });
        }
        let n = rng.random_range(1..=FLAGIFY_ORACLE_POINTS);
        let cover = random_cover(rng, n);
        let (fast, slow) = (cover.flagify(), iterative_flagify_oracle(&cover)?);
        if fast != slow {
            found.push(Violation::FlagifyOracle {
                trial: i,
                fast: flag_blocks(&fast),
                oracle: flag_blocks(&slow),
                cover,
            });
        }
        Ok(found)
    })?;
    Ok(report("oracles", None, None, trials, seed, started, violations))
}

/// The sweep of `method` over a random space is a sieve, and evaluating it at
/// random scales agrees with the flat method.
pub fn check_sieves(method: &Method, trials: usize, seed: u64) -> Result<TrialReport, VerifyError> {
    let started = Instant::now();
    let tag = method.clone().at(0.0);
    let violations = run_trials(trials, seed, |i, rng| {
        let x = random_space(rng, SIEVE_POINTS.0, SIEVE_POINTS.1);
        let s = match build_sieve(&x, method) {
            Ok(s) => s,
            Err(e @ (SieveError::MonotonicityViolation { .. } | SieveError::NoTrivialCover)) => {
                return Ok(vec![Violation::SieveAxioms {
                    trial: i,
                    method: tag.clone(),
                    space: x,
                    detail: e.to_string(),
                }])
            }
            Err(e) => return Err(e.into()),
        };
        let axioms = check_sieve_axioms(&s);
        if !axioms.sieve || !axioms.repeated_covers.is_empty() {
            return Ok(vec![Violation::SieveAxioms {
                trial: i,
                method: tag.clone(),
                space: x,
                detail: format!("{axioms:?}"),
            }]);
        }
        let top = 1.25 * x.diameter().max(1.0);
        let mut found = Vec::new();
        for _ in 0..SIEVE_SAMPLES {
            let t = rng.random_range(0.0..top);
            let (swept, flat) = (s.evaluate(t), method.clone().at(t).apply(&x)?);
            if *swept != flat {
                found.push(Violation::SieveEvaluation {
                    trial: i,
                    method: tag.clone(),
                    space: x.clone(),
                    t,
                    sieve_blocks: flag_blocks(swept),
                    flat_blocks: flag_blocks(&flat),
                });
            }
        }
        Ok(found)
    })?;
    Ok(report("sieve-axioms", Some(tag), None, trials, seed, started, violations))
}

/// Random non-expansive maps are consistent between the sieves of their
/// source and target at every scale.
pub fn check_sieve_functoriality(method: &Method, trials: usize, seed: u64) -> Result<TrialReport, VerifyError> {
    let started = Instant::now();
    let tag = method.clone().at(0.0);
    let violations = run_trials(trials, seed, |i, rng| {
        let f = random_morphism(rng, Category::Met, FUNCTORIALITY_POINTS);
        let sx = build_sieve(f.source(), method)?;
        let sy = build_sieve(f.target(), method)?;
        Ok((!sieve_consistent(&f, &sx, &sy)?)
            .then(|| Violation::SieveFunctoriality {
                trial: i,
                method: tag.clone(),
                source: f.source().clone(),
                target: f.target().clone(),
                map: f.label_pairs(),
            })
            .into_iter()
            .collect())
    })?;
    Ok(report("sieve-functoriality", Some(tag), Some(Category::Met), trials, seed, started, violations))
}
