//! Command-line front end: argument parsing and dispatch.
//!
//! Exit status: 0 on success, 1 when a check reports violations it should
//! not have, 2 on malformed input or usage.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sievecluster::covers::Cover;
use sievecluster::functors::{clustering_parameter, parse_convention, FunctorError};
use sievecluster::graphs::{bk_closure, bk_star_closure};
use sievecluster::io::{ingest, IngestOptions, InputFormat};
use sievecluster::sieves::build_sieve;
use sievecluster::verify::{
    check_chain, check_functoriality, check_identities, check_ml_surjectivity, check_oracles, check_sandwich,
    check_sieve_functoriality, check_sieves, find_counterexample, Category, TrialReport, DEFAULT_MAP_BUDGET,
    DEFAULT_MAX_POINTS,
};
use sievecluster::{threshold_graph, Budget, FiniteMetricSpace, Graph, Method, MethodSpec, Norm, Steps};

pub const SEED_ENV: &str = "SIEVECLUSTER_SEED";

#[derive(Debug, Parser)]
#[command(name = "sievecluster", version, about = "Overlapping clustering of finite metric spaces")]
pub struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cluster a space at one scale and write the cover as JSON.
    Cluster {
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Also write the threshold graph (or its B_k / B_k* closure) as DOT.
        #[arg(long, value_name = "PATH")]
        emit_dot: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sweep a method over all scales and write the sieve as JSON.
    Sieve {
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        input: InputArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replace a cover (JSON) by its flagification.
    Flagify {
        cover: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print whether the first cover refines the second.
    Refines { finer: PathBuf, coarser: PathBuf },
    /// Print the clustering parameter of a method.
    ParamProbe {
        #[command(flatten)]
        method: MethodArgs,
    },
    /// Run a seeded property check and write its report as JSON.
    Verify {
        check: Check,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "met")]
        category: Category,
        /// With `functoriality` on Met, also run the exhaustive counterexample search.
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
        max_points: usize,
        /// Maximum number of maps the counterexample search may check.
        #[arg(long = "budget", default_value_t = DEFAULT_MAP_BUDGET)]
        map_budget: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the threshold graph of a space, or its B_k / B_k* closure.
    ExportDot {
        #[arg(long)]
        delta: f64,
        #[arg(long, conflicts_with = "bkstar")]
        bk: Option<usize>,
        #[arg(long)]
        bkstar: Option<usize>,
        /// Write the plain edge-list format instead of DOT.
        #[arg(long)]
        edge_list: bool,
        #[command(flatten)]
        input: InputArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Functoriality,
    Sandwich,
    Chain,
    Identities,
    MlSurjectivity,
    Oracles,
    SieveAxioms,
    SieveFunctoriality,
    Counterexample,
}

#[derive(Debug, Args)]
struct MethodArgs {
    /// sl, ml, l, vl, el, bk, bkstar or generated.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    /// Step count or connectivity level (integer or `inf`).
    #[arg(long)]
    k: Option<Steps>,
    /// Path-length budget for `l` (real or `inf`).
    #[arg(long = "K")]
    budget: Option<Budget>,
    /// Edge-connectivity convention for `el`: standard or clique.
    #[arg(long)]
    convention: Option<String>,
    /// Test space for `generated` (repeatable).
    #[arg(long = "test-space", value_name = "PATH")]
    test_spaces: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct InputArgs {
    input: PathBuf,
    /// auto, matrix, points or json.
    #[arg(long, default_value = "auto")]
    format: InputFormat,
    /// Norm for point clouds: euclidean, manhattan or chebyshev.
    #[arg(long, default_value = "euclidean")]
    metric: Norm,
}

/// Input or usage problem; exits with status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<i32, InputError>;

impl MethodArgs {
    fn family(&self) -> Result<&str, InputError> {
        self.method.as_deref().ok_or_else(|| InputError("--method is required".into()))
    }

    /// `delta` is required for scale-dependent families unless a default is given.
    fn spec(&self, default_delta: Option<f64>) -> Result<MethodSpec, InputError> {
        let family = self.family()?;
        let delta = match (self.delta, family) {
            (Some(d), _) => d,
            (None, "generated") => 0.0,
            (None, _) => default_delta.ok_or_else(|| InputError(format!("{family}: --delta is required")))?,
        };
        let convention = self.convention.as_deref().map(parse_convention).transpose()?;
        let test_spaces = if self.test_spaces.is_empty() {
            None
        } else {
            Some(
                self.test_spaces
                    .iter()
                    .map(|p| ingest(p, IngestOptions::default()).map_err(|e| InputError(format!("{}: {e}", p.display()))))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        };
        Ok(MethodSpec::from_parts(family, delta, self.k, self.budget, convention, test_spaces)?)
    }
}

impl InputArgs {
    fn load(&self) -> Result<FiniteMetricSpace, InputError> {
        ingest(&self.input, IngestOptions { format: self.format, norm: self.metric })
            .map_err(|e| InputError(format!("{}: {e}", self.input.display())))
    }
}

fn read_cover(path: &Path) -> Result<Cover, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

struct Sink {
    pretty: bool,
}

impl Sink {
    fn json<T: Serialize>(&self, value: &T, output: Option<&Path>) -> Result<(), InputError> {
        let mut text = if self.pretty {
            serde_json::to_string_pretty(value)?
        } else {
            serde_json::to_string(value)?
        };
        text.push('\n');
        self.text(&text, output)
    }

    fn text(&self, text: &str, output: Option<&Path>) -> Result<(), InputError> {
        match output {
            Some(path) => std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display()))),
            None => std::io::stdout().write_all(text.as_bytes()).map_err(InputError::from),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Outcome {
    let sink = Sink { pretty: cli.pretty };
    match cli.command {
        Command::Cluster { method, input, emit_dot, output } => {
            let spec = method.spec(None)?;
            let x = input.load()?;
            let cover = spec.apply(&x)?;
            if let Some(path) = emit_dot {
                let name = spec.to_string();
                sink.text(&scale_graph(&x, &spec).to_dot(&name), Some(&path))?;
            }
            sink.json(&cover, output.as_deref())?;
            Ok(0)
        }
        Command::Sieve { method, input, output } => {
            if method.delta.is_some() {
                return Err(InputError("sieve sweeps every scale; --delta is not accepted".into()));
            }
            let spec = method.spec(Some(0.0))?;
            let x = input.load()?;
            let sieve = build_sieve(&x, &spec.method)?;
            sink.json(&sieve, output.as_deref())?;
            Ok(0)
        }
        Command::Flagify { cover, output } => {
            sink.json(&read_cover(&cover)?.flagify(), output.as_deref())?;
            Ok(0)
        }
        Command::Refines { finer, coarser } => {
            let refines = read_cover(&finer)?.refines(&read_cover(&coarser)?)?;
            sink.text(&format!("{refines}\n"), None)?;
            Ok(0)
        }
        Command::ParamProbe { method } => {
            let spec = method.spec(None)?;
            match clustering_parameter(&spec) {
                Ok(p) => {
                    sink.text(&format!("{}\n", p.delta_f), None)?;
                    Ok(0)
                }
                Err(e @ (FunctorError::TrivialFunctor(_) | FunctorError::NonMonotoneProbe(_))) => {
                    eprintln!("{e}");
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify {
            check,
            method,
            trials,
            seed,
            category,
            search,
            max_points,
            map_budget,
            output,
        } => {
            let started = Instant::now();
            let (report, expected_violations) =
                verify(check, &method, trials, seed, category, search, max_points, map_budget)?;
            eprintln!("elapsed: {:.3} s", started.elapsed().as_secs_f64());
            sink.json(&report, output.as_deref())?;
            let as_expected = match expected_violations {
                Expectation::None => report.violations.is_empty(),
                Expectation::Some => !report.violations.is_empty(),
                Expectation::Either => true,
            };
            Ok(if as_expected { 0 } else { 1 })
        }
        Command::ExportDot { delta, bk, bkstar, edge_list, input, output } => {
            let x = input.load()?;
            let g = threshold_graph(&x, delta);
            let (g, name) = match (bk, bkstar) {
                (Some(k), _) => (bk_closure(&g, k), format!("B_{k} closure at {delta}")),
                (_, Some(k)) => (bk_star_closure(&g, k), format!("B*_{k} closure at {delta}")),
                _ => (g, format!("threshold graph at {delta}")),
            };
            let text = if edge_list { g.to_edge_list() } else { g.to_dot(&name) };
            sink.text(&text, output.as_deref())?;
            Ok(0)
        }
    }
}

/// The graph a method reads at its scale: the threshold graph, closed under
/// the B_k or B_k* rule for those families.
fn scale_graph(x: &FiniteMetricSpace, spec: &MethodSpec) -> Graph {
    let g = threshold_graph(x, spec.delta);
    let level = |k: Steps| match k {
        Steps::Finite(k) => k,
        Steps::Infinite => x.len(),
    };
    match &spec.method {
        Method::Bk { k } => bk_closure(&g, level(*k)),
        Method::BkStar { k } => bk_star_closure(&g, level(*k)),
        _ => g,
    }
}

enum Expectation {
    None,
    Some,
    Either,
}

/// Families that are functorial on injective maps but not on all
/// non-expansive maps, at levels where the difference shows.
fn fails_on_met(spec: &MethodSpec) -> bool {
    let level_two = |k: &Steps| !matches!(k, Steps::Finite(1));
    match &spec.method {
        Method::VertexLinkage { k } | Method::Bk { k } | Method::BkStar { k } => level_two(k),
        Method::EdgeLinkage { k, .. } => level_two(k),
        _ => false,
    }
}

#[allow(clippy::too_many_arguments)]
fn verify(
    check: Check,
    method: &MethodArgs,
    trials: usize,
    seed: u64,
    category: Category,
    search: bool,
    max_points: usize,
    budget: u64,
) -> Result<(TrialReport, Expectation), InputError> {
    let delta = method.delta.unwrap_or(1.0);
    Ok(match check {
        Check::Functoriality => {
            let spec = method.spec(Some(1.0))?;
            let mut report = check_functoriality(&spec, trials, category, seed)?;
            if search && category == Category::Met {
                report.violations.extend(find_counterexample(&spec, max_points, budget)?.witness);
            }
            let expected = if category == Category::Met && fails_on_met(&spec) {
                Expectation::Either
            } else {
                Expectation::None
            };
            (report, expected)
        }
        Check::Counterexample => {
            let spec = method.spec(Some(1.0))?;
            let started = Instant::now();
            let outcome = find_counterexample(&spec, max_points, budget)?;
            let expected = if fails_on_met(&spec) { Expectation::Some } else { Expectation::None };
            let report = TrialReport {
                check: "counterexample".into(),
                method: Some(spec),
                category: Some(Category::Met),
                trials: outcome.maps_checked as usize,
                seed,
                violations: outcome.witness.into_iter().collect(),
                elapsed: started.elapsed(),
            };
            (report, expected)
        }
        Check::Sandwich => (check_sandwich(&method.spec(Some(1.0))?, trials, seed)?, Expectation::None),
        Check::Chain => (check_chain(delta, trials, seed)?, Expectation::None),
        Check::Identities => (check_identities(delta, trials, seed)?, Expectation::None),
        Check::MlSurjectivity => (check_ml_surjectivity(delta, trials, seed)?, Expectation::None),
        Check::Oracles => (check_oracles(trials, seed)?, Expectation::None),
        Check::SieveAxioms => (check_sieves(&method.spec(Some(0.0))?.method, trials, seed)?, Expectation::None),
        Check::SieveFunctoriality => (
            check_sieve_functoriality(&method.spec(Some(0.0))?.method, trials, seed)?,
            Expectation::None,
        ),
    })
}
