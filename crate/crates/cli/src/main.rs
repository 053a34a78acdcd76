//! Command-line front end for the set-cover / set-partition / coloring /
//! weighted-GF(2) solvers.
//!
//! Every subcommand parses its inputs, dispatches the matching solver,
//! re-checks any YES certificate before reporting it, prints a short
//! human-readable summary, and finishes with a JSON report (`"schema": 1`).
//! All randomness is derived from the `--seed` value, so identical argv and
//! seed produce byte-identical stdout; nothing time-dependent is printed.
//!
//! Exit codes: 0 = question answered (either verdict), 2 = unreadable or
//! malformed input, 3 = a size guard refused the work, 4 = parameters
//! violate a solver hypothesis, 5 = a soundness check failed.

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use setcover_core::few_sets::{branch_and_solve_with_stats, leaf_exponent, BranchStats};
use setcover_core::instances::{
    brute_force_chromatic, brute_force_linsat, brute_force_set_cover, brute_force_set_partition,
    generate_random_graph, generate_random_instance, generate_random_linsat, parse_graph,
    parse_linsat, parse_set_system, verify_coloring, verify_cover, verify_linsat,
    verify_mask_partition, verify_partition, Certificate, GeneratorParams, ProblemMode, RandomSeed,
    Verdict,
};
use setcover_core::lattice::{SetOracle, SingletonOracle};
use setcover_core::linsat_solver::{
    default_trials, linsat_exponent, solve_linsat_with_stats, LinsatStats,
};
use setcover_core::sampled_solver::{
    chromatic_decision, solve_large_cover_with_delta, solve_partition_oracle_with_stats,
    solve_partition_with_stats, IndependentSetOracle, SampleStats,
};
use setcover_core::witness::schedule_for_sigma;
use setcover_core::Error as CoreError;

const SCHEMA_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// Argument surface
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "setcover",
    version,
    about = "Exact and randomized solvers for set cover, set partition, \
             graph coloring, and weighted GF(2) linear systems",
    after_help = "Exit codes: 0 answered, 2 parse error, 3 size guard \
                  exceeded, 4 hypothesis violation, 5 soundness-check failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether some at-most-SIZE sets from the input family cover
    /// its universe (randomized; tuned for large targets).
    SolveCover(SolveCoverArgs),
    /// Decide whether exactly SIZE pairwise-disjoint sets tile the
    /// universe, from an explicit family or a membership oracle.
    SolvePartition(SolvePartitionArgs),
    /// Decide whether a graph is properly colorable with the given number
    /// of colors (YES answers carry verified color classes).
    Chromatic(ChromaticArgs),
    /// Decide whether the weighted GF(2) system has a solution within its
    /// cost budget.
    Linsat(LinsatArgs),
    /// Deterministic branching solver for instances whose solutions use
    /// few sets of size >= R.
    FewSets(FewSetsArgs),
    /// Sweep a solver against its brute-force reference on seeded random
    /// instances; nonzero exit on any soundness violation.
    OracleCheck(OracleCheckArgs),
    /// Re-run a randomized solver many times on one instance and report
    /// the acceptance frequency with a Wilson 95% interval.
    RateEstimate(RateEstimateArgs),
    /// Print the sampling schedule for a solution density, the split-search
    /// objective optimum, and the branching leaf-exponent table.
    Params(ParamsArgs),
}

#[derive(Args)]
struct SeedArg {
    /// Base random seed (unsigned integer), or "random" to draw a fresh
    /// one; the value actually used is echoed in the JSON report.
    #[arg(long, default_value = "0")]
    seed: String,
}

impl SeedArg {
    fn resolve(&self) -> Result<u64, CoreError> {
        if self.seed == "random" {
            return Ok(rand::random::<u64>());
        }
        self.seed.parse::<u64>().map_err(|_| {
            CoreError::parse(
                0,
                format!(
                    "--seed expects an unsigned integer or 'random', got '{}'",
                    self.seed
                ),
            )
        })
    }
}

#[derive(Args)]
struct SolveCoverArgs {
    /// Set-system instance file.
    #[arg(long)]
    input: String,
    /// Cover size budget (replaces the target stored in the file).
    #[arg(long)]
    size: usize,
    /// Failure-probability budget for NO answers, in (0, 1).
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct SolvePartitionArgs {
    /// Explicit set-system instance file.
    #[arg(long, conflicts_with = "oracle")]
    input: Option<String>,
    /// Membership-oracle family: "singleton" or "independent-set:GRAPH_FILE".
    #[arg(long)]
    oracle: Option<String>,
    /// Universe size for oracle families that have no file (singleton).
    #[arg(long)]
    n: Option<usize>,
    /// Number of disjoint sets that must exactly tile the universe
    /// (required with --oracle; overrides the file target with --input).
    #[arg(long)]
    size: Option<usize>,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct ChromaticArgs {
    /// Graph file (`p edge` header, 1-based `e u v` lines).
    #[arg(long)]
    graph: String,
    /// Number of colors to test.
    #[arg(long)]
    colors: usize,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct LinsatArgs {
    /// Weighted GF(2) system file (`p linsat` header).
    #[arg(long)]
    input: String,
    /// Independent repetitions (default: ceil(m^1.5) for m columns).
    #[arg(long)]
    trials: Option<u64>,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Cover,
    Partition,
}

impl ModeArg {
    fn to_mode(self) -> ProblemMode {
        match self {
            ModeArg::Cover => ProblemMode::Cover,
            ModeArg::Partition => ProblemMode::Partition,
        }
    }
}

#[derive(Args)]
struct FewSetsArgs {
    /// Set-system instance file.
    #[arg(long)]
    input: String,
    /// Size from which a set counts as large (branching threshold).
    #[arg(long)]
    r: usize,
    /// Whether chosen sets must cover or exactly tile the universe.
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Override the target stored in the file.
    #[arg(long)]
    size: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverKind {
    Cover,
    Partition,
    Linsat,
    Chromatic,
    FewSets,
}

impl SolverKind {
    fn name(self) -> &'static str {
        match self {
            SolverKind::Cover => "cover",
            SolverKind::Partition => "partition",
            SolverKind::Linsat => "linsat",
            SolverKind::Chromatic => "chromatic",
            SolverKind::FewSets => "few-sets",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    /// Brute-force-checkable sizes; finishes in seconds.
    Small,
}

#[derive(Args)]
struct OracleCheckArgs {
    /// Which solver to sweep.
    #[arg(long, value_enum)]
    solver: SolverKind,
    /// Instance battery to run.
    #[arg(long, value_enum, default_value = "small")]
    sweep: SweepKind,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RateSolver {
    /// Pick from the instance file header (setsystem -> cover,
    /// linsat -> linsat, edge -> chromatic).
    Auto,
    Cover,
    Partition,
    Linsat,
    Chromatic,
}

#[derive(Args)]
struct RateEstimateArgs {
    /// Instance file (set system, graph, or weighted GF(2) system).
    #[arg(long)]
    instance: String,
    /// Independent solver runs.
    #[arg(long)]
    runs: u64,
    /// Solver to repeat (default: inferred from the file header).
    #[arg(long, value_enum, default_value = "auto")]
    solver: RateSolver,
    /// Color count, required when the instance is a graph.
    #[arg(long)]
    colors: Option<usize>,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct ParamsArgs {
    /// Solution density whose sampling schedule should be printed.
    #[arg(long)]
    sigma: Option<f64>,
    /// Universe size the schedule is instantiated for.
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// Largest branching threshold in the leaf-exponent table.
    #[arg(long, default_value_t = 12)]
    r_max: usize,
}

// ---------------------------------------------------------------------------
// Failure plumbing
// ---------------------------------------------------------------------------

enum Failure {
    Core(CoreError),
    /// A YES certificate failed re-verification, or a sweep found a false
    /// positive: the strongest possible error, reported distinctly.
    Soundness(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) => match e {
                CoreError::Parse { .. } | CoreError::InvalidInstance(_) => 2,
                CoreError::GuardExceeded(_) => 3,
                CoreError::HypothesisViolation(_) | CoreError::InfeasibleParams(_) => 4,
                CoreError::CountOverflow | CoreError::TableMismatch(_) => 5,
            },
            Failure::Soundness(_) => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Soundness(msg) => format!("soundness-check failure: {msg}"),
        }
    }
}

fn read_input(path: &str) -> Result<String, CoreError> {
    fs::read_to_string(path).map_err(|e| CoreError::parse(0, format!("cannot read '{path}': {e}")))
}

// ---------------------------------------------------------------------------
// JSON report pieces
// ---------------------------------------------------------------------------

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum CertJson {
    /// Indices into the instance's set list.
    SetIndices { sets: Vec<usize> },
    /// Explicit element lists (oracle families have no index space).
    ElementSets { sets: Vec<Vec<usize>> },
    /// Chosen column indices of a linear system.
    Columns { columns: Vec<usize> },
}

fn mask_elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn cert_json(cert: &Certificate) -> CertJson {
    match cert {
        Certificate::SetIndices(idx) => CertJson::SetIndices { sets: idx.clone() },
        Certificate::SetMasks(masks) => CertJson::ElementSets {
            sets: masks.iter().map(|&m| mask_elements(m)).collect(),
        },
        Certificate::Columns(cols) => CertJson::Columns {
            columns: cols.clone(),
        },
    }
}

fn verdict_str(v: &Verdict) -> &'static str {
    match v {
        Verdict::Yes(_) => "yes",
        Verdict::No => "no",
    }
}

#[derive(Serialize)]
struct LayerJson {
    pass: usize,
    l: usize,
    sampled: usize,
    closure: usize,
}

#[derive(Serialize)]
struct SampleWorkJson {
    passes: usize,
    layers_visited: usize,
    sets_sampled: u64,
    closure_nodes: u64,
    oracle_queries: u64,
    candidates_checked: u64,
    layer_count: usize,
    layers: Vec<LayerJson>,
}

impl From<&SampleStats> for SampleWorkJson {
    fn from(st: &SampleStats) -> Self {
        SampleWorkJson {
            passes: st.passes,
            layers_visited: st.layers_visited,
            sets_sampled: st.sets_sampled,
            closure_nodes: st.closure_nodes,
            oracle_queries: st.oracle_queries,
            candidates_checked: st.candidates_checked,
            layer_count: st.layer_log.len(),
            layers: st
                .layer_log
                .iter()
                .map(|e| LayerJson {
                    pass: e.pass,
                    l: e.l,
                    sampled: e.sampled,
                    closure: e.closure,
                })
                .collect(),
        }
    }
}

fn print_report<T: Serialize>(report: &T) {
    let text = serde_json::to_string_pretty(report).expect("report serialization cannot fail");
    println!("{text}");
}

fn print_verdict_summary(verdict: &Verdict) {
    match verdict {
        Verdict::Yes(_) => println!("verdict: YES"),
        Verdict::No => println!("verdict: NO"),
    }
}

fn print_index_certificate(idx: &[usize], noun: &str) {
    let mut line = format!("certificate ({} {noun}):", idx.len());
    for i in idx {
        let _ = write!(line, " {i}");
    }
    println!("{line}");
}

fn print_mask_certificate(masks: &[u64], singular: &str, plural: &str) {
    println!("certificate ({} {plural}):", masks.len());
    for (i, &m) in masks.iter().enumerate() {
        let mut line = format!("  {singular} {i}:");
        for e in mask_elements(m) {
            let _ = write!(line, " {e}");
        }
        println!("{line}");
    }
}

// ---------------------------------------------------------------------------
// solve-cover
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SolveCoverReport<'a> {
    schema: u32,
    command: &'a str,
    input: &'a str,
    n: usize,
    m: usize,
    size: usize,
    delta: f64,
    seed: u64,
    verdict: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    work: SampleWorkJson,
}

fn run_solve_cover(args: &SolveCoverArgs) -> Result<(), Failure> {
    if !(args.delta > 0.0 && args.delta < 1.0) {
        return Err(CoreError::InfeasibleParams(format!(
            "--delta must lie strictly between 0 and 1, got {}",
            args.delta
        ))
        .into());
    }
    let seed_value = args.seed.resolve()?;
    let inst = parse_set_system(&read_input(&args.input)?)?.with_target(args.size);
    if inst.n() == 0 {
        return Err(
            CoreError::InvalidInstance("cover search needs a non-empty universe".into()).into(),
        );
    }
    let sigma = args.size as f64 / inst.n() as f64;
    let seed = RandomSeed::new(seed_value);
    let (verdict, stats) = solve_large_cover_with_delta(&inst, sigma, args.delta, &seed)?;

    if let Verdict::Yes(cert) = &verdict {
        let Certificate::SetIndices(idx) = cert else {
            return Err(Failure::Soundness(
                "cover solver returned a certificate of the wrong kind".into(),
            ));
        };
        if !verify_cover(&inst, idx) {
            return Err(Failure::Soundness(
                "cover certificate failed re-verification".into(),
            ));
        }
    }

    print_verdict_summary(&verdict);
    if let Verdict::Yes(Certificate::SetIndices(idx)) = &verdict {
        print_index_certificate(idx, "sets");
    }
    print_report(&SolveCoverReport {
        schema: SCHEMA_VERSION,
        command: "solve-cover",
        input: &args.input,
        n: inst.n(),
        m: inst.m(),
        size: args.size,
        delta: args.delta,
        seed: seed_value,
        verdict: verdict_str(&verdict),
        certificate: verdict.certificate().map(cert_json),
        verified: verdict.certificate().map(|_| true),
        work: SampleWorkJson::from(&stats),
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// solve-partition
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SolvePartitionReport<'a> {
    schema: u32,
    command: &'a str,
    family: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<&'a str>,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    size: usize,
    seed: u64,
    verdict: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    work: SampleWorkJson,
}

fn run_solve_partition(args: &SolvePartitionArgs) -> Result<(), Failure> {
    let seed_value = args.seed.resolve()?;
    let seed = RandomSeed::new(seed_value);

    if let Some(path) = &args.input {
        let parsed = parse_set_system(&read_input(path)?)?;
        let inst = match args.size {
            Some(s) => parsed.with_target(s),
            None => parsed,
        };
        let (verdict, stats) = solve_partition_with_stats(&inst, &seed)?;
        if let Verdict::Yes(cert) = &verdict {
            let Certificate::SetIndices(idx) = cert else {
                return Err(Failure::Soundness(
                    "partition solver returned a certificate of the wrong kind".into(),
                ));
            };
            if !verify_partition(&inst, idx) {
                return Err(Failure::Soundness(
                    "partition certificate failed re-verification".into(),
                ));
            }
        }
        print_verdict_summary(&verdict);
        if let Verdict::Yes(Certificate::SetIndices(idx)) = &verdict {
            print_index_certificate(idx, "sets");
        }
        print_report(&SolvePartitionReport {
            schema: SCHEMA_VERSION,
            command: "solve-partition",
            family: "explicit",
            input: Some(path),
            n: inst.n(),
            m: Some(inst.m()),
            size: inst.s(),
            seed: seed_value,
            verdict: verdict_str(&verdict),
            certificate: verdict.certificate().map(cert_json),
            verified: verdict.certificate().map(|_| true),
            work: SampleWorkJson::from(&stats),
        });
        return Ok(());
    }

    let Some(oracle_spec) = &args.oracle else {
        return Err(CoreError::parse(
            0,
            "solve-partition needs either --input FILE or --oracle FAMILY",
        )
        .into());
    };
    let size = args.size.ok_or_else(|| {
        CoreError::parse(
            0,
            "--size is required when solving against an oracle family",
        )
    })?;

    if oracle_spec == "singleton" {
        let n = args.n.ok_or_else(|| {
            CoreError::parse(0, "--n is required for the singleton oracle family")
        })?;
        let oracle = SingletonOracle { n };
        return finish_oracle_partition(&oracle, "singleton", n, size, seed_value, &seed);
    }
    if let Some(path) = oracle_spec.strip_prefix("independent-set:") {
        let graph = parse_graph(&read_input(path)?)?;
        let oracle = IndependentSetOracle::new(&graph);
        let family = format!("independent-set:{path}");
        return finish_oracle_partition(&oracle, &family, graph.n(), size, seed_value, &seed);
    }
    Err(CoreError::parse(
        0,
        format!(
            "--oracle expects 'singleton' or 'independent-set:GRAPH_FILE', got '{oracle_spec}'"
        ),
    )
    .into())
}

fn finish_oracle_partition(
    oracle: &dyn SetOracle,
    family: &str,
    n: usize,
    size: usize,
    seed_value: u64,
    seed: &RandomSeed,
) -> Result<(), Failure> {
    let (verdict, stats) = solve_partition_oracle_with_stats(oracle, size, seed)?;
    verify_oracle_partition(&verdict, oracle, n, size)?;
    print_verdict_summary(&verdict);
    if let Verdict::Yes(Certificate::SetMasks(masks)) = &verdict {
        print_mask_certificate(masks, "part", "parts");
    }
    print_report(&SolvePartitionReport {
        schema: SCHEMA_VERSION,
        command: "solve-partition",
        family,
        input: None,
        n,
        m: None,
        size,
        seed: seed_value,
        verdict: verdict_str(&verdict),
        certificate: verdict.certificate().map(cert_json),
        verified: verdict.certificate().map(|_| true),
        work: SampleWorkJson::from(&stats),
    });
    Ok(())
}

fn verify_oracle_partition(
    verdict: &Verdict,
    oracle: &dyn SetOracle,
    n: usize,
    size: usize,
) -> Result<(), Failure> {
    if let Verdict::Yes(cert) = verdict {
        let Certificate::SetMasks(masks) = cert else {
            return Err(Failure::Soundness(
                "oracle partition solver returned a certificate of the wrong kind".into(),
            ));
        };
        let ok =
            verify_mask_partition(n, masks, size) && masks.iter().all(|&m| oracle.contains_set(m));
        if !ok {
            return Err(Failure::Soundness(
                "oracle partition certificate failed re-verification".into(),
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// chromatic
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ChromaticReport<'a> {
    schema: u32,
    command: &'a str,
    graph: &'a str,
    vertices: usize,
    edges: usize,
    colors: usize,
    seed: u64,
    verdict: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
}

fn run_chromatic(args: &ChromaticArgs) -> Result<(), Failure> {
    let seed_value = args.seed.resolve()?;
    let graph = parse_graph(&read_input(&args.graph)?)?;
    let seed = RandomSeed::new(seed_value);
    let verdict = chromatic_decision(&graph, args.colors, &seed)?;

    if let Verdict::Yes(cert) = &verdict {
        let Certificate::SetMasks(classes) = cert else {
            return Err(Failure::Soundness(
                "coloring decision returned a certificate of the wrong kind".into(),
            ));
        };
        if !verify_coloring(&graph, classes, args.colors) {
            return Err(Failure::Soundness(
                "color classes failed re-verification".into(),
            ));
        }
    }

    print_verdict_summary(&verdict);
    if let Verdict::Yes(Certificate::SetMasks(classes)) = &verdict {
        print_mask_certificate(classes, "class", "classes");
    }
    print_report(&ChromaticReport {
        schema: SCHEMA_VERSION,
        command: "chromatic",
        graph: &args.graph,
        vertices: graph.n(),
        edges: graph.edge_count(),
        colors: args.colors,
        seed: seed_value,
        verdict: verdict_str(&verdict),
        certificate: verdict.certificate().map(cert_json),
        verified: verdict.certificate().map(|_| true),
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// linsat
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct LinsatWorkJson {
    trials_run: u64,
    splits_examined: u64,
    list_entries: u64,
    pairs_matched: u64,
    fallback_candidates: u64,
    used_fallback: bool,
}

impl From<&LinsatStats> for LinsatWorkJson {
    fn from(st: &LinsatStats) -> Self {
        LinsatWorkJson {
            trials_run: st.trials_run,
            splits_examined: st.splits_examined,
            list_entries: st.list_entries,
            pairs_matched: st.pairs_matched,
            fallback_candidates: st.fallback_candidates,
            used_fallback: st.used_fallback,
        }
    }
}

#[derive(Serialize)]
struct LinsatReport<'a> {
    schema: u32,
    command: &'a str,
    input: &'a str,
    rows: usize,
    cols: usize,
    budget: u64,
    trials: u64,
    seed: u64,
    verdict: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cost: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    work: LinsatWorkJson,
}

fn run_linsat(args: &LinsatArgs) -> Result<(), Failure> {
    let seed_value = args.seed.resolve()?;
    let inst = parse_linsat(&read_input(&args.input)?)?;
    let trials = args.trials.unwrap_or_else(|| default_trials(inst.m_cols()));
    let seed = RandomSeed::new(seed_value);
    let (verdict, stats) = solve_linsat_with_stats(&inst, trials, &seed)?;

    let mut cost = None;
    if let Verdict::Yes(cert) = &verdict {
        let Certificate::Columns(cols) = cert else {
            return Err(Failure::Soundness(
                "linear-system solver returned a certificate of the wrong kind".into(),
            ));
        };
        if !verify_linsat(&inst, cols) {
            return Err(Failure::Soundness(
                "column certificate failed re-verification".into(),
            ));
        }
        cost = Some(inst.cost_of(cols));
    }

    print_verdict_summary(&verdict);
    if let Verdict::Yes(Certificate::Columns(cols)) = &verdict {
        print_index_certificate(cols, "columns");
        println!("cost: {} (budget {})", inst.cost_of(cols), inst.t());
    }
    print_report(&LinsatReport {
        schema: SCHEMA_VERSION,
        command: "linsat",
        input: &args.input,
        rows: inst.n_rows(),
        cols: inst.m_cols(),
        budget: inst.t(),
        trials,
        seed: seed_value,
        verdict: verdict_str(&verdict),
        certificate: verdict.certificate().map(cert_json),
        cost,
        verified: verdict.certificate().map(|_| true),
        work: LinsatWorkJson::from(&stats),
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// few-sets
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct BranchWorkJson {
    nodes: u64,
    leaves: u64,
    max_commit_depth: usize,
}

#[derive(Serialize)]
struct FewSetsReport<'a> {
    schema: u32,
    command: &'a str,
    input: &'a str,
    n: usize,
    m: usize,
    size: usize,
    r: usize,
    mode: &'a str,
    verdict: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted_leaf_exponent: Option<f64>,
    work: BranchWorkJson,
}

fn run_few_sets(args: &FewSetsArgs) -> Result<(), Failure> {
    let parsed = parse_set_system(&read_input(&args.input)?)?;
    let inst = match args.size {
        Some(s) => parsed.with_target(s),
        None => parsed,
    };
    let mode = args.mode.to_mode();
    let (verdict, stats) = branch_and_solve_with_stats(&inst, args.r, mode)?;

    if let Verdict::Yes(cert) = &verdict {
        let Certificate::SetIndices(idx) = cert else {
            return Err(Failure::Soundness(
                "branching solver returned a certificate of the wrong kind".into(),
            ));
        };
        let ok = match mode {
            ProblemMode::Cover => verify_cover(&inst, idx),
            ProblemMode::Partition => verify_partition(&inst, idx),
        };
        if !ok {
            return Err(Failure::Soundness(
                "branching certificate failed re-verification".into(),
            ));
        }
    }

    print_verdict_summary(&verdict);
    if let Verdict::Yes(Certificate::SetIndices(idx)) = &verdict {
        print_index_certificate(idx, "sets");
    }
    let BranchStats {
        nodes,
        leaves,
        max_commit_depth,
    } = stats;
    print_report(&FewSetsReport {
        schema: SCHEMA_VERSION,
        command: "few-sets",
        input: &args.input,
        n: inst.n(),
        m: inst.m(),
        size: inst.s(),
        r: args.r,
        mode: match mode {
            ProblemMode::Cover => "cover",
            ProblemMode::Partition => "partition",
        },
        verdict: verdict_str(&verdict),
        certificate: verdict.certificate().map(cert_json),
        verified: verdict.certificate().map(|_| true),
        predicted_leaf_exponent: leaf_exponent(args.r).ok(),
        work: BranchWorkJson {
            nodes,
            leaves,
            max_commit_depth,
        },
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------------

#[derive(Default)]
struct SweepOutcome {
    runs: u64,
    false_positives: u64,
    certificate_failures: u64,
    /// Deterministic solvers only: verdict disagreed with brute force.
    mismatches: u64,
}

impl SweepOutcome {
    fn violations(&self) -> u64 {
        self.false_positives + self.certificate_failures + self.mismatches
    }
}

#[derive(Serialize)]
struct OracleCheckReport<'a> {
    schema: u32,
    command: &'a str,
    solver: &'a str,
    sweep: &'a str,
    seed: u64,
    runs: u64,
    false_positives: u64,
    certificate_failures: u64,
    mismatches: u64,
    pass: bool,
}

fn run_oracle_check(args: &OracleCheckArgs) -> Result<(), Failure> {
    let seed_value = args.seed.resolve()?;
    let base = RandomSeed::new(seed_value);
    let outcome = match args.solver {
        SolverKind::Cover => sweep_cover(&base)?,
        SolverKind::Partition => sweep_partition(&base)?,
        SolverKind::Linsat => sweep_linsat(&base)?,
        SolverKind::Chromatic => sweep_chromatic(&base)?,
        SolverKind::FewSets => sweep_few_sets(&base)?,
    };

    println!(
        "{} false positives / {} runs",
        outcome.false_positives, outcome.runs
    );
    if outcome.certificate_failures > 0 {
        println!("{} certificate failures", outcome.certificate_failures);
    }
    if outcome.mismatches > 0 {
        println!("{} verdict mismatches", outcome.mismatches);
    }
    let pass = outcome.violations() == 0;
    print_report(&OracleCheckReport {
        schema: SCHEMA_VERSION,
        command: "oracle-check",
        solver: args.solver.name(),
        sweep: "small",
        seed: seed_value,
        runs: outcome.runs,
        false_positives: outcome.false_positives,
        certificate_failures: outcome.certificate_failures,
        mismatches: outcome.mismatches,
        pass,
    });
    if pass {
        Ok(())
    } else {
        Err(Failure::Soundness(format!(
            "{} violation(s) over {} runs",
            outcome.violations(),
            outcome.runs
        )))
    }
}

fn sweep_cover(base: &RandomSeed) -> Result<SweepOutcome, CoreError> {
    let mut out = SweepOutcome::default();
    for k in 0..150u64 {
        let n = 4 + (k as usize % 5); // 4..=8, any parity: infeasible
                                      // layer windows only skip candidate
                                      // sizes inside the driver
        let params = GeneratorParams {
            n,
            m: 4 + (k as usize % 5),
            max_set_size: 1 + (k as usize % 3),
            planted: false,
            s: 1 + (k as usize % n),
        };
        let inst = generate_random_instance(&params, &base.derive(1).derive(k))?;
        let brute_yes = brute_force_set_cover(&inst)?.is_yes();
        let sigma = inst.s() as f64 / n as f64;
        let (verdict, _) =
            solve_large_cover_with_delta(&inst, sigma, 0.25, &base.derive(2).derive(k))?;
        out.runs += 1;
        if let Verdict::Yes(cert) = &verdict {
            let verified = matches!(cert, Certificate::SetIndices(idx) if verify_cover(&inst, idx));
            if !verified {
                out.certificate_failures += 1;
            }
            if !brute_yes {
                out.false_positives += 1;
            }
        }
    }
    Ok(out)
}

fn sweep_partition(base: &RandomSeed) -> Result<SweepOutcome, CoreError> {
    let mut out = SweepOutcome::default();
    for k in 0..150u64 {
        // Even universe sizes: the sampling schedule's balance window is
        // empty for odd n at these densities and would refuse the run.
        let n = 4 + 2 * (k as usize % 3); // 4, 6, 8
        let m = 4 + (k as usize % 5);
        let max_set_size = 1 + (k as usize % 3);
        let s = 1 + (k as usize % n);
        let params = GeneratorParams {
            n,
            m,
            max_set_size,
            // Plant only when s disjoint sets of the allowed size can tile n
            // elements; otherwise fall back to an unplanted draw.
            planted: k % 3 == 0 && s * max_set_size >= n && s <= n && s <= m,
            s,
        };
        let inst = generate_random_instance(&params, &base.derive(3).derive(k))?;
        let brute_yes = brute_force_set_partition(&inst)?.is_yes();
        let (verdict, _) = solve_partition_with_stats(&inst, &base.derive(4).derive(k))?;
        out.runs += 1;
        if let Verdict::Yes(cert) = &verdict {
            let verified =
                matches!(cert, Certificate::SetIndices(idx) if verify_partition(&inst, idx));
            if !verified {
                out.certificate_failures += 1;
            }
            if !brute_yes {
                out.false_positives += 1;
            }
        }
    }
    Ok(out)
}

fn sweep_linsat(base: &RandomSeed) -> Result<SweepOutcome, CoreError> {
    let mut out = SweepOutcome::default();
    for k in 0..200u64 {
        let rows = 3 + (k as usize % 4); // 3..=6
        let cols = 4 + (k as usize % 7); // 4..=10
        let inst = generate_random_linsat(rows, cols, 4, k % 2 == 0, &base.derive(5).derive(k))?;
        let brute_yes = brute_force_linsat(&inst)?.is_yes();
        let (verdict, _) =
            solve_linsat_with_stats(&inst, default_trials(cols), &base.derive(6).derive(k))?;
        out.runs += 1;
        if let Verdict::Yes(cert) = &verdict {
            let verified = matches!(cert, Certificate::Columns(c) if verify_linsat(&inst, c));
            if !verified {
                out.certificate_failures += 1;
            }
            if !brute_yes {
                out.false_positives += 1;
            }
        }
    }
    Ok(out)
}

fn sweep_chromatic(base: &RandomSeed) -> Result<SweepOutcome, CoreError> {
    let mut out = SweepOutcome::default();
    let classes: [(usize, f64); 6] = [(5, 0.3), (5, 0.6), (7, 0.3), (7, 0.6), (8, 0.3), (8, 0.6)];
    for (ci, &(n, p)) in classes.iter().enumerate() {
        for g_idx in 0..5u64 {
            let gseed = base.derive(7).derive(ci as u64).derive(g_idx);
            let graph = generate_random_graph(n, p, &gseed)?;
            let chi = brute_force_chromatic(&graph)?;
            for (ti, colors) in [chi.saturating_sub(1), chi, chi + 1]
                .into_iter()
                .enumerate()
            {
                let sseed = base
                    .derive(8)
                    .derive(ci as u64)
                    .derive(g_idx)
                    .derive(ti as u64);
                let verdict = chromatic_decision(&graph, colors, &sseed)?;
                out.runs += 1;
                if let Verdict::Yes(cert) = &verdict {
                    let verified = matches!(cert, Certificate::SetMasks(cl)
                        if verify_coloring(&graph, cl, colors));
                    if !verified {
                        out.certificate_failures += 1;
                    }
                    if colors < chi {
                        out.false_positives += 1;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn sweep_few_sets(base: &RandomSeed) -> Result<SweepOutcome, CoreError> {
    let mut out = SweepOutcome::default();
    for k in 0..150u64 {
        let n = 3 + (k as usize % 4); // 3..=6
        let params = GeneratorParams {
            n,
            m: 3 + (k as usize % 4),
            max_set_size: (1 + (k as usize % 3)).min(n),
            planted: false,
            s: 1 + (k as usize % n),
        };
        let inst = generate_random_instance(&params, &base.derive(9).derive(k))?;
        let r = 2 + (k as usize % 2);
        for mode in [ProblemMode::Cover, ProblemMode::Partition] {
            let brute_yes = match mode {
                ProblemMode::Cover => brute_force_set_cover(&inst)?.is_yes(),
                ProblemMode::Partition => brute_force_set_partition(&inst)?.is_yes(),
            };
            let (verdict, _) = branch_and_solve_with_stats(&inst, r, mode)?;
            out.runs += 1;
            if verdict.is_yes() != brute_yes {
                // Deterministic solver: both directions must agree.
                if verdict.is_yes() {
                    out.false_positives += 1;
                } else {
                    out.mismatches += 1;
                }
            }
            if let Verdict::Yes(cert) = &verdict {
                let verified = match (mode, cert) {
                    (ProblemMode::Cover, Certificate::SetIndices(idx)) => verify_cover(&inst, idx),
                    (ProblemMode::Partition, Certificate::SetIndices(idx)) => {
                        verify_partition(&inst, idx)
                    }
                    _ => false,
                };
                if !verified {
                    out.certificate_failures += 1;
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// rate-estimate
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RateEstimateReport<'a> {
    schema: u32,
    command: &'a str,
    instance: &'a str,
    solver: &'a str,
    runs: u64,
    seed: u64,
    accepted: u64,
    rate: f64,
    wilson_low: f64,
    wilson_high: f64,
    certificate_failures: u64,
}

/// Wilson 95% score interval for `accepted` successes in `runs` draws.
fn wilson_interval(accepted: u64, runs: u64) -> (f64, f64) {
    if runs == 0 {
        return (0.0, 1.0);
    }
    let z = 1.96_f64;
    let n = runs as f64;
    let p = accepted as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn sniff_format(text: &str) -> Result<&'static str, CoreError> {
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.split_whitespace().next() == Some("c") {
            continue;
        }
        let mut words = t.split_whitespace();
        if words.next() == Some("p") {
            return match words.next() {
                Some("setsystem") => Ok("setsystem"),
                Some("edge") => Ok("edge"),
                Some("linsat") => Ok("linsat"),
                other => Err(CoreError::parse(
                    0,
                    format!("unrecognized instance kind '{}'", other.unwrap_or("")),
                )),
            };
        }
        break;
    }
    Err(CoreError::parse(
        0,
        "instance file has no 'p <kind> ...' header line",
    ))
}

fn run_rate_estimate(args: &RateEstimateArgs) -> Result<(), Failure> {
    if args.runs == 0 {
        return Err(CoreError::InfeasibleParams("--runs must be positive".into()).into());
    }
    let seed_value = args.seed.resolve()?;
    let base = RandomSeed::new(seed_value);
    let text = read_input(&args.instance)?;
    let solver = match args.solver {
        RateSolver::Auto => match sniff_format(&text)? {
            "setsystem" => RateSolver::Cover,
            "edge" => RateSolver::Chromatic,
            _ => RateSolver::Linsat,
        },
        chosen => chosen,
    };

    let mut accepted = 0u64;
    let mut cert_failures = 0u64;
    let solver_name;
    match solver {
        RateSolver::Cover => {
            solver_name = "cover";
            let inst = parse_set_system(&text)?;
            if inst.n() == 0 {
                return Err(CoreError::InvalidInstance(
                    "cover search needs a non-empty universe".into(),
                )
                .into());
            }
            let sigma = inst.s() as f64 / inst.n() as f64;
            for i in 0..args.runs {
                let (verdict, _) =
                    solve_large_cover_with_delta(&inst, sigma, 0.25, &base.derive(10).derive(i))?;
                if let Verdict::Yes(cert) = &verdict {
                    accepted += 1;
                    if !matches!(cert, Certificate::SetIndices(idx) if verify_cover(&inst, idx)) {
                        cert_failures += 1;
                    }
                }
            }
        }
        RateSolver::Partition => {
            solver_name = "partition";
            let inst = parse_set_system(&text)?;
            for i in 0..args.runs {
                let (verdict, _) = solve_partition_with_stats(&inst, &base.derive(10).derive(i))?;
                if let Verdict::Yes(cert) = &verdict {
                    accepted += 1;
                    if !matches!(cert, Certificate::SetIndices(idx) if verify_partition(&inst, idx))
                    {
                        cert_failures += 1;
                    }
                }
            }
        }
        RateSolver::Linsat => {
            solver_name = "linsat";
            let inst = parse_linsat(&text)?;
            let trials = default_trials(inst.m_cols());
            for i in 0..args.runs {
                let (verdict, _) =
                    solve_linsat_with_stats(&inst, trials, &base.derive(10).derive(i))?;
                if let Verdict::Yes(cert) = &verdict {
                    accepted += 1;
                    if !matches!(cert, Certificate::Columns(c) if verify_linsat(&inst, c)) {
                        cert_failures += 1;
                    }
                }
            }
        }
        RateSolver::Chromatic => {
            solver_name = "chromatic";
            let colors = args
                .colors
                .ok_or_else(|| CoreError::parse(0, "--colors is required for graph instances"))?;
            let graph = parse_graph(&text)?;
            for i in 0..args.runs {
                let verdict = chromatic_decision(&graph, colors, &base.derive(10).derive(i))?;
                if let Verdict::Yes(cert) = &verdict {
                    accepted += 1;
                    if !matches!(cert, Certificate::SetMasks(cl)
                        if verify_coloring(&graph, cl, colors))
                    {
                        cert_failures += 1;
                    }
                }
            }
        }
        RateSolver::Auto => unreachable!("resolved above"),
    }

    let rate = accepted as f64 / args.runs as f64;
    let (lo, hi) = wilson_interval(accepted, args.runs);
    println!("accepted {accepted}/{} (rate {rate:.6})", args.runs);
    println!("wilson95: [{lo:.6}, {hi:.6}]");
    print_report(&RateEstimateReport {
        schema: SCHEMA_VERSION,
        command: "rate-estimate",
        instance: &args.instance,
        solver: solver_name,
        runs: args.runs,
        seed: seed_value,
        accepted,
        rate,
        wilson_low: lo,
        wilson_high: hi,
        certificate_failures: cert_failures,
    });
    if cert_failures > 0 {
        return Err(Failure::Soundness(format!(
            "{cert_failures} certificate(s) failed re-verification"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// params
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ScheduleJson {
    sigma: f64,
    n: usize,
    zeta: f64,
    beta: f64,
    sample_rate: f64,
    sample_rate_exponent: f64,
    repeats: usize,
    layers: Vec<usize>,
}

#[derive(Serialize)]
struct SplitObjectiveJson {
    sigma: f64,
    value: f64,
}

#[derive(Serialize)]
struct LeafExponentJson {
    r: usize,
    lambda: f64,
}

#[derive(Serialize)]
struct ParamsReport<'a> {
    schema: u32,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    schedule: Option<ScheduleJson>,
    split_objective: SplitObjectiveJson,
    leaf_exponents: Vec<LeafExponentJson>,
}

fn format_pow2(exponent: f64) -> String {
    if exponent.fract() == 0.0 {
        format!("2^-{}", exponent as i64)
    } else {
        format!("2^-{exponent:.4}")
    }
}

/// Fixed six-decimal rendering with trailing zeros trimmed, so schedule
/// parameters read as "0.01" rather than float noise.
fn format_trimmed(x: f64) -> String {
    let s = format!("{x:.6}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed.is_empty() {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

fn run_params(args: &ParamsArgs) -> Result<(), Failure> {
    let schedule = match args.sigma {
        Some(sigma) => {
            let sched = schedule_for_sigma(sigma, args.n)?;
            let exponent = sched.zeta * args.n as f64;
            println!("schedule for sigma={sigma} at n={}:", args.n);
            println!("  zeta = {}", format_trimmed(sched.zeta));
            println!("  beta = {}", format_trimmed(sched.beta));
            println!(
                "  sample rate = {} = {}",
                format_pow2(exponent),
                format_trimmed(sched.sample_rate)
            );
            println!("  repeats = {}", sched.repeats);
            let layers: Vec<usize> = sched.layer_range().collect();
            let mut line = String::from("  layers:");
            for l in &layers {
                let _ = write!(line, " {l}");
            }
            println!("{line}");
            Some(ScheduleJson {
                sigma,
                n: args.n,
                zeta: sched.zeta,
                beta: sched.beta,
                sample_rate: sched.sample_rate,
                sample_rate_exponent: exponent,
                repeats: sched.repeats,
                layers,
            })
        }
        None => None,
    };

    let (sigma_star, value) = linsat_exponent();
    println!("split objective: maximized at sigma={sigma_star:.6}, value={value:.6}");

    let r_max = args.r_max.clamp(2, 64);
    let mut table = Vec::new();
    println!("leaf exponents:");
    for r in 2..=r_max {
        let lambda = leaf_exponent(r).map_err(Failure::Core)?;
        println!("  r={r}: {lambda:.6}");
        table.push(LeafExponentJson { r, lambda });
    }

    print_report(&ParamsReport {
        schema: SCHEMA_VERSION,
        command: "params",
        schedule,
        split_objective: SplitObjectiveJson {
            sigma: sigma_star,
            value,
        },
        leaf_exponents: table,
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// main
// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    // Behave like a standard pipeline tool when stdout closes early
    // (e.g. `setcover params | head`): die on SIGPIPE instead of panicking.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SolveCover(args) => run_solve_cover(args),
        Command::SolvePartition(args) => run_solve_partition(args),
        Command::Chromatic(args) => run_chromatic(args),
        Command::Linsat(args) => run_linsat(args),
        Command::FewSets(args) => run_few_sets(args),
        Command::OracleCheck(args) => run_oracle_check(args),
        Command::RateEstimate(args) => run_rate_estimate(args),
        Command::Params(args) => run_params(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
