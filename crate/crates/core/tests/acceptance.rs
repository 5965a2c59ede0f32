//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every check is seeded; reports are written under the
//! cargo test temp directory and compared byte for byte in criterion 12.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use sievecluster::functors::{single_linkage, edge_linkage, vertex_linkage};
use sievecluster::verify::{
    check_chain, check_functoriality, check_identities, check_ml_surjectivity, check_oracles, check_sandwich,
    check_sieve_functoriality, check_sieves, find_counterexample, random_metric, Category, MetricMode, TrialReport,
    Violation, DEFAULT_MAP_BUDGET, DEFAULT_MAX_POINTS,
};
use sievecluster::{Budget, EdgeConvention, FiniteMetricSpace, Method, MethodSpec, PathSpaceSpec, Steps};

const SEED: u64 = 20_240_917;
const DELTA: f64 = 1.0;

const MET_TRIALS: usize = 200;
const MET_LIMIT: Duration = Duration::from_secs(30);
const INJ_TRIALS: usize = 200;
const INJ_LIMIT: Duration = Duration::from_secs(60);
const WITNESS_LIMIT: Duration = Duration::from_secs(120);
const SANDWICH_TRIALS: usize = 100;
const CHAIN_TRIALS: usize = 100;
const IDENTITY_TRIALS: usize = 100;
const SURJECTIVITY_TRIALS: usize = 50;
const ORACLE_TRIALS: usize = 500;
const SIEVE_TRIALS: usize = 100;
const SIEVE_MAP_TRIALS: usize = 100;
const CONNECTIVITY_POINTS: usize = 200;
/// Scales from a sparse forest-like graph to a dense one.
const CONNECTIVITY_DELTAS: [f64; 7] = [0.1, 0.15, 0.2, 0.25, 0.3, 0.5, 1.0];
const CONNECTIVITY_LIMIT: Duration = Duration::from_secs(10);
const SL_POINTS: usize = 2000;
const SL_DELTA: f64 = 0.1;
const SL_LIMIT: Duration = Duration::from_secs(5);

type Job = Box<dyn Fn() -> TrialReport>;

struct Outcome {
    passed: bool,
    detail: String,
}

struct Run {
    dir: PathBuf,
    /// Report-producing jobs by file name, replayed for the determinism check.
    jobs: Vec<(String, Job)>,
}

impl Run {
    /// Runs `job`, stores its JSON, and keeps it for the rerun.
    fn report(&mut self, name: String, job: Job) -> TrialReport {
        let r = job();
        std::fs::write(self.dir.join(&name), to_json(&r)).expect("write report");
        self.jobs.push((name, job));
        r
    }
}

fn to_json(r: &TrialReport) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize") + "\n"
}

fn l(k: Steps, budget: Budget) -> Method {
    Method::KLinkage { steps: k, budget }
}

fn el(k: usize, convention: EdgeConvention) -> Method {
    Method::EdgeLinkage { k: Steps::Finite(k), convention }
}

fn file_name(check: &str, spec: &MethodSpec) -> String {
    let raw = format!("{check}-{spec}.json");
    raw.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect()
}

fn replays(v: &[Violation]) -> bool {
    v.iter().all(|w| w.replay().unwrap_or(false))
}

fn met_methods() -> Vec<MethodSpec> {
    let mut out = vec![Method::SingleLinkage.at(DELTA), Method::MaximalLinkage.at(DELTA)];
    for k in [Steps::Finite(1), Steps::Finite(2), Steps::Finite(3), Steps::Infinite] {
        for budget in [Budget::Infinite, Budget::Finite(1.5 * DELTA)] {
            out.push(l(k, budget).at(DELTA));
        }
    }
    out
}

fn injective_methods() -> Vec<MethodSpec> {
    let mut out = Vec::new();
    for k in 1..=3 {
        let s = Steps::Finite(k);
        out.push(Method::VertexLinkage { k: s }.at(DELTA));
        out.push(el(k, EdgeConvention::Standard).at(DELTA));
        out.push(Method::Bk { k: s }.at(DELTA));
        out.push(Method::BkStar { k: s }.at(DELTA));
    }
    out
}

fn functoriality(run: &mut Run, specs: Vec<MethodSpec>, category: Category, trials: usize, limit: Duration) -> Outcome {
    let started = Instant::now();
    let mut bad = Vec::new();
    for spec in &specs {
        let s = spec.clone();
        let r = run.report(
            file_name(&format!("functoriality-{category:?}"), spec),
            Box::new(move || check_functoriality(&s, trials, category, SEED).expect("built-in method")),
        );
        if !r.passed() {
            bad.push(format!("{spec}: {}", r.violations.len()));
        }
    }
    let elapsed = started.elapsed();
    Outcome {
        passed: bad.is_empty() && elapsed < limit,
        detail: format!(
            "{} methods x {trials} trials, violations [{}], {:.2} s (limit {} s)",
            specs.len(),
            bad.join("; "),
            elapsed.as_secs_f64(),
            limit.as_secs()
        ),
    }
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    let mut passed = true;
    let positives = [
        Method::VertexLinkage { k: Steps::Finite(2) }.at(DELTA),
        el(2, EdgeConvention::Standard).at(DELTA),
        Method::Bk { k: Steps::Finite(2) }.at(DELTA),
        Method::BkStar { k: Steps::Finite(2) }.at(DELTA),
    ];
    for spec in positives {
        let started = Instant::now();
        let out = find_counterexample(&spec, DEFAULT_MAX_POINTS, DEFAULT_MAP_BUDGET).expect("threshold family");
        let elapsed = started.elapsed();
        let ok = match &out.witness {
            Some(w @ Violation::Functoriality { source, .. }) => {
                source.len() <= DEFAULT_MAX_POINTS && w.replay().unwrap_or(false) && elapsed < WITNESS_LIMIT
            }
            _ => false,
        };
        passed &= ok;
        let size = match &out.witness {
            Some(Violation::Functoriality { source, .. }) => source.len().to_string(),
            _ => "none".into(),
        };
        notes.push(format!("{spec} witness on {size} points after {} maps {:.2} s", out.maps_checked, elapsed.as_secs_f64()));
    }
    for spec in [Method::SingleLinkage.at(DELTA), Method::MaximalLinkage.at(DELTA)] {
        let started = Instant::now();
        let out = find_counterexample(&spec, DEFAULT_MAX_POINTS, DEFAULT_MAP_BUDGET).expect("threshold family");
        let elapsed = started.elapsed();
        passed &= out.witness.is_none() && elapsed < WITNESS_LIMIT;
        notes.push(format!(
            "{spec} {} after {} maps {:.2} s",
            if out.witness.is_none() { "NotFound" } else { "FOUND" },
            out.maps_checked,
            elapsed.as_secs_f64()
        ));
    }
    Outcome {
        passed,
        detail: format!("{} (limit {} s each)", notes.join("; "), WITNESS_LIMIT.as_secs()),
    }
}

fn sandwich_methods() -> (Vec<MethodSpec>, Vec<MethodSpec>) {
    let mut specs = met_methods();
    for k in 1..=3 {
        let s = Steps::Finite(k);
        specs.push(Method::VertexLinkage { k: s }.at(DELTA));
        specs.push(el(k, EdgeConvention::CliqueException).at(DELTA));
        specs.push(Method::Bk { k: s }.at(DELTA));
        specs.push(Method::BkStar { k: s }.at(DELTA));
    }
    specs.push(Method::VertexLinkage { k: Steps::Infinite }.at(DELTA));
    specs.push(el(1, EdgeConvention::Standard).at(DELTA));
    specs.push(
        Method::Generated {
            test_spaces: vec![
                FiniteMetricSpace::path_space(PathSpaceSpec { k: 2, delta: 0.75 }),
                FiniteMetricSpace::path_space(PathSpaceSpec { k: 1, delta: 0.5 }),
            ],
        }
        .at(0.0),
    );
    // the standard edge convention never merges a two-point space
    let trivial = vec![el(2, EdgeConvention::Standard).at(DELTA), el(3, EdgeConvention::Standard).at(DELTA)];
    (specs, trivial)
}

fn criterion_4(run: &mut Run) -> Outcome {
    let (specs, trivial) = sandwich_methods();
    let mut bad = Vec::new();
    for spec in &specs {
        let s = spec.clone();
        let r = run.report(
            file_name("sandwich", spec),
            Box::new(move || check_sandwich(&s, SANDWICH_TRIALS, SEED).expect("non-trivial method")),
        );
        if !r.passed() || !replays(&r.violations) {
            bad.push(format!("{spec}: {}", r.violations.len()));
        }
    }
    let skipped: Vec<String> = trivial
        .iter()
        .filter(|s| sievecluster::functors::clustering_parameter(s).is_err())
        .map(|s| s.to_string())
        .collect();
    Outcome {
        passed: bad.is_empty() && skipped.len() == trivial.len(),
        detail: format!(
            "{} non-trivial methods x {SANDWICH_TRIALS} spaces, violations [{}]; trivial by probe: {}",
            specs.len(),
            bad.join("; "),
            skipped.join(", ")
        ),
    }
}

fn single(run: &mut Run, name: &str, job: Job, what: &str) -> Outcome {
    let r = run.report(format!("{name}.json"), job);
    Outcome {
        passed: r.passed(),
        detail: format!("{what}: {} violations", r.violations.len()),
    }
}

fn sieves(run: &mut Run, methods: Vec<Method>, trials: usize, functorial: bool) -> Outcome {
    let mut bad = Vec::new();
    for m in &methods {
        let tag = m.clone().at(0.0);
        let mm = m.clone();
        let (name, job): (String, Job) = if functorial {
            (
                file_name("sieve-functoriality", &tag),
                Box::new(move || check_sieve_functoriality(&mm, trials, SEED).expect("threshold family")),
            )
        } else {
            (
                file_name("sieve-axioms", &tag),
                Box::new(move || check_sieves(&mm, trials, SEED).expect("threshold family")),
            )
        };
        let r = run.report(name, job);
        if !r.passed() {
            bad.push(format!("{}: {}", m.family(), r.violations.len()));
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: format!(
            "{} methods x {trials} trials, violations [{}]",
            methods.len(),
            bad.join("; ")
        ),
    }
}

fn criterion_11() -> Outcome {
    let x = random_metric(CONNECTIVITY_POINTS, SEED, MetricMode::EuclideanPoints);
    let (mut vl, mut el) = (Duration::ZERO, Duration::ZERO);
    let mut worst = Duration::ZERO;
    for delta in CONNECTIVITY_DELTAS {
        let started = Instant::now();
        vertex_linkage(&x, delta, 2);
        let v = started.elapsed();
        let started = Instant::now();
        edge_linkage(&x, delta, 2);
        let e = started.elapsed();
        vl += v;
        el += e;
        worst = worst.max(v + e);
    }
    let started = Instant::now();
    let big = random_metric(SL_POINTS, SEED, MetricMode::EuclideanPoints);
    let s = single_linkage(&big, SL_DELTA);
    let sl = started.elapsed();
    Outcome {
        passed: worst < CONNECTIVITY_LIMIT && sl < SL_LIMIT,
        detail: format!(
            "VL^2 and EL^2 on {CONNECTIVITY_POINTS} points at {} scales: VL^2 {:.3} s, EL^2 {:.3} s, slowest scale {:.3} s \
             (limit {} s); SL on {SL_POINTS} points incl. distances {:.3} s, {} clusters (limit {} s)",
            CONNECTIVITY_DELTAS.len(),
            vl.as_secs_f64(),
            el.as_secs_f64(),
            worst.as_secs_f64(),
            CONNECTIVITY_LIMIT.as_secs(),
            sl.as_secs_f64(),
            s.len(),
            SL_LIMIT.as_secs()
        ),
    }
}

fn criterion_12(run: &Run) -> Outcome {
    let mut differing = Vec::new();
    for (name, job) in &run.jobs {
        let first = std::fs::read(run.dir.join(name)).expect("report written");
        if to_json(&job()).into_bytes() != first {
            differing.push(name.clone());
        }
    }
    Outcome {
        passed: differing.is_empty(),
        detail: format!(
            "{} report files regenerated with seed {SEED}, differing [{}]",
            run.jobs.len(),
            differing.join(", ")
        ),
    }
}

fn main() -> ExitCode {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-reports");
    std::fs::create_dir_all(&dir).expect("report directory");
    let mut run = Run { dir, jobs: Vec::new() };
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();

    let mut record = |n: u32, title: &'static str, outcome: Outcome| {
        println!("criterion {n:>2} {}: {title}: {}", if outcome.passed { "PASS" } else { "FAIL" }, outcome.detail);
        results.push((n, title, outcome));
    };

    record(1, "functoriality on Met", functoriality(&mut run, met_methods(), Category::Met, MET_TRIALS, MET_LIMIT));
    record(
        2,
        "functoriality on Met^inj",
        functoriality(&mut run, injective_methods(), Category::MetInj, INJ_TRIALS, INJ_LIMIT),
    );
    record(3, "non-functoriality witnesses", criterion_3());
    record(4, "sandwich", criterion_4(&mut run));
    record(
        5,
        "natural-transformation chain",
        single(&mut run, "chain", Box::new(|| check_chain(DELTA, CHAIN_TRIALS, SEED).unwrap()), "VL chain and VL^1 = SL"),
    );
    record(
        6,
        "identities",
        single(
            &mut run,
            "identities",
            Box::new(|| check_identities(DELTA, IDENTITY_TRIALS, SEED).unwrap()),
            "L^1 = ML, L^inf = SL, VL^|X| = ML",
        ),
    );
    record(
        7,
        "ML surjectivity",
        single(
            &mut run,
            "ml-surjectivity",
            Box::new(|| check_ml_surjectivity(DELTA, SURJECTIVITY_TRIALS, SEED).unwrap()),
            "flag covers on <= 7 points",
        ),
    );
    record(
        8,
        "oracle equivalence",
        single(
            &mut run,
            "oracles",
            Box::new(|| check_oracles(ORACLE_TRIALS, SEED).unwrap()),
            "500 relations on <= 12 points and 500 covers on <= 8 points",
        ),
    );
    let l2 = l(Steps::Finite(2), Budget::Infinite);
    record(
        9,
        "sieve axioms",
        sieves(
            &mut run,
            vec![
                Method::SingleLinkage,
                Method::MaximalLinkage,
                l2.clone(),
                Method::VertexLinkage { k: Steps::Finite(2) },
                el(2, EdgeConvention::Standard),
            ],
            SIEVE_TRIALS,
            false,
        ),
    );
    record(10, "sieve functoriality", sieves(&mut run, vec![Method::SingleLinkage, l2], SIEVE_MAP_TRIALS, true));
    record(11, "performance", criterion_11());
    let determinism = criterion_12(&run);
    record(12, "determinism", determinism);

    let failed: Vec<u32> = results.iter().filter(|(_, _, o)| !o.passed).map(|(n, _, _)| *n).collect();
    println!("acceptance: {} of {} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
