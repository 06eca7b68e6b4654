use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rainbow::format::{self, FamilyFile, PickJson, Timing, TraceJson, VerdictReport};
use rainbow::harness::{self, CampaignSpec, Target};
use rainbow::numeric;
use rainbow_core::constructive::{
    bipartite_greedy, default_max_trials, partite_recursive, random_permutation_certify, CertifyOutcome,
    ConstructiveError,
};
use rainbow_core::generators::Construction;
use rainbow_core::solver::{
    extremal_search, find_rainbow, matching_number, ExtremalParams, NuValue, OrderHeuristic, SolverConfig, Verdict,
};
use rainbow_core::Family;
use serde::Serialize;
use serde_json::json;

/// `println!` that stops quietly when stdout is closed (e.g. piped to `head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

const VERSION: &str = env!("CARGO_PKG_VERSION");

const EXIT_REFUTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "rainbow", version, about = "Rainbow matchings in hypergraph families")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for campaigns (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Suppress human-readable output.
    #[arg(long, global = true)]
    quiet: bool,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a family admits a rainbow matching.
    Solve(SolveArgs),
    /// Write a construction as a family file.
    Generate(GenerateArgs),
    /// Run a verification campaign.
    Verify(VerifyArgs),
    /// Local search for large families without a rainbow matching.
    Search(SearchArgs),
    /// Matching number of one member.
    Nu(NuArgs),
    /// Evaluate an analytic inequality.
    CheckInequality(InequalityArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Exact,
    Greedy,
    Recursive,
    Randomized,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    family: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    algorithm: Algorithm,
    #[arg(long)]
    node_budget: Option<u64>,
    /// input-order, smallest-family-first or min-degree-vertex.
    #[arg(long, default_value = "smallest-family-first", value_parser = parse_order)]
    order: OrderHeuristic,
    /// Members to match with the randomized sampler (default: all).
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    max_trials: Option<u64>,
    /// Write the constructive trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// star, cover, clique, partite-threshold, theorem13-tight, complete,
    /// random-uniform or random-partite.
    #[arg(long)]
    construction: String,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    ks: Option<Vec<usize>>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long, default_value_t = 1)]
    center: u32,
    #[arg(long, default_value_t = 1)]
    part: u32,
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    partite: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// theorem12, lemma21, theorem13, theorem14, prop23, corollary26 or
    /// question16-explore.
    #[arg(long, value_parser = parse_target)]
    target: Target,
    /// Inclusive range `a..b` or a single value.
    #[arg(long, value_parser = harness::parse_span)]
    n: (u32, u32),
    #[arg(long, value_parser = harness::parse_span)]
    k: Option<(u32, u32)>,
    #[arg(long, value_parser = harness::parse_span, default_value = "2..3")]
    t: (u32, u32),
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long)]
    node_budget: Option<u64>,
    /// Member sizes relative to the threshold; below 1 every cell is exploratory.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    size_offset: i64,
    /// Append JSON lines here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Recompute one instance, given as `CELL:INDEX`.
    #[arg(long)]
    replay: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_delimiter = ',')]
    ks: Vec<usize>,
    /// Solver calls allowed.
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    /// Perturbations without improvement before a restart.
    #[arg(long)]
    plateau: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NuArgs {
    #[arg(long)]
    family: PathBuf,
    /// 1-based member number.
    #[arg(long, default_value_t = 1)]
    member: usize,
    #[arg(long)]
    node_budget: Option<u64>,
}

#[derive(Args)]
struct InequalityArgs {
    /// `3.4` for the tail inequality, `3.2` for the log-ratio function.
    #[arg(long)]
    lemma: String,
    #[arg(long)]
    n: u64,
    /// Uniformities, descending; `vxc` repeats `v` `c` times.
    #[arg(long)]
    ks: Option<String>,
    #[arg(long, default_value_t = numeric::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    k1: Option<f64>,
    #[arg(long)]
    k2: Option<f64>,
}

fn parse_order(s: &str) -> Result<OrderHeuristic, String> {
    OrderHeuristic::parse(s).ok_or_else(|| format!("unknown order {s:?}"))
}

fn parse_target(s: &str) -> Result<Target, String> {
    Target::parse(s).ok_or_else(|| format!("unknown target {s:?}"))
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, message: message.to_string() }
}

struct Output {
    json: bool,
    quiet: bool,
}

impl Output {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) {
        if self.json {
            say!("{}", serde_json::to_string_pretty(value).expect("serializable"));
        } else if !self.quiet {
            say!("{}", text());
        }
    }
}

fn millis(start: Instant) -> Timing {
    Timing { millis: start.elapsed().as_millis() as u64 }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Output { json: cli.json, quiet: cli.quiet };
    let result = match &cli.command {
        Command::Solve(a) => solve(&cli, a, &out),
        Command::Generate(a) => generate(&cli, a, &out),
        Command::Verify(a) => verify(&cli, a, &out),
        Command::Search(a) => search(&cli, a, &out),
        Command::Nu(a) => nu(&cli, a, &out),
        Command::CheckInequality(a) => check_inequality(&cli, a, &out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("rainbow: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_family(path: &std::path::Path) -> Result<Family, Failure> {
    format::read_family(path).map_err(usage)
}

fn solve(cli: &Cli, a: &SolveArgs, out: &Output) -> Result<u8, Failure> {
    let family = read_family(&a.family)?;
    let start = Instant::now();
    let mut report = VerdictReport {
        verdict: String::new(),
        algorithm: String::new(),
        witness: None,
        nodes: None,
        detail: None,
        seed: cli.seed,
        version: VERSION.into(),
        timing: Timing { millis: 0 },
    };
    let mut trace = None;
    let mut code = 0;
    let violated = |e: ConstructiveError, report: &mut VerdictReport| match e {
        ConstructiveError::HypothesisViolated { .. } => {
            report.verdict = "hypothesis-violated".into();
            report.detail = Some(e.to_string());
            Ok(())
        }
        other => Err(usage(other)),
    };
    match a.algorithm {
        Algorithm::Exact => {
            report.algorithm = "exact".into();
            let cfg = SolverConfig { node_budget: a.node_budget, order: a.order, seed: cli.seed };
            let s = find_rainbow(&family, &cfg);
            report.verdict = s.verdict.as_str().into();
            report.nodes = Some(s.nodes);
            report.witness = s.verdict.matching().map(format::witness_json);
            if s.verdict == Verdict::BudgetExceeded {
                code = EXIT_BUDGET;
            }
        }
        Algorithm::Greedy => {
            report.algorithm = "greedy".into();
            match bipartite_greedy(&family) {
                Ok(g) => {
                    report.verdict = "matching".into();
                    report.witness = Some(format::witness_json(&g.matching));
                    trace = Some(TraceJson::greedy(&g.trace));
                }
                Err(e) => violated(e, &mut report)?,
            }
        }
        Algorithm::Recursive => {
            report.algorithm = "recursive".into();
            match partite_recursive(&family) {
                Ok(r) => {
                    report.verdict = "matching".into();
                    report.witness = Some(format::witness_json(&r.matching));
                    trace = Some(TraceJson::recursive(&r.events));
                }
                Err(e) => violated(e, &mut report)?,
            }
        }
        Algorithm::Randomized => {
            report.algorithm = "randomized".into();
            let t = a.t.unwrap_or(family.len());
            let trials = a.max_trials.unwrap_or_else(|| default_max_trials(t));
            let c = random_permutation_certify(&family, t, trials, cli.seed).map_err(usage)?;
            match c.outcome {
                CertifyOutcome::Found { trial, indices, matching } => {
                    report.verdict = "matching".into();
                    report.witness = Some(
                        matching
                            .picks
                            .iter()
                            .map(|p| PickJson { family: indices[p.family] + 1, edge: p.edge.raw().collect() })
                            .collect(),
                    );
                    report.nodes = Some(trial + 1);
                    trace = Some(TraceJson::Randomized {
                        trial: Some(trial),
                        indices: indices.iter().map(|i| i + 1).collect(),
                        hypothesis_holds: c.hypothesis_holds,
                    });
                }
                CertifyOutcome::Exhausted { trials } => {
                    report.verdict = "exhausted".into();
                    report.nodes = Some(trials);
                    trace = Some(TraceJson::Randomized { trial: None, indices: Vec::new(), hypothesis_holds: c.hypothesis_holds });
                    code = EXIT_BUDGET;
                }
            }
        }
    }
    report.timing = millis(start);
    if let Some(path) = &a.trace {
        let trace = trace.ok_or_else(|| usage("no trace: the algorithm produced none"))?;
        format::write_json(path, &trace).map_err(usage)?;
    }
    out.emit(&report, || {
        let mut s = report.verdict.clone();
        if let Some(w) = &report.witness {
            for p in w {
                s.push_str(&format!("\n  F{}: {:?}", p.family, p.edge));
            }
        }
        if let Some(d) = &report.detail {
            s.push_str(&format!("\n  {d}"));
        }
        s
    });
    Ok(code)
}

fn construction(cli: &Cli, a: &GenerateArgs) -> Result<Construction, Failure> {
    let k = || a.k.ok_or_else(|| usage("--k is required for this construction"));
    let t = || a.t.ok_or_else(|| usage("--t is required for this construction"));
    let ks = || a.ks.clone().ok_or_else(|| usage("--ks is required for this construction"));
    let sizes = || a.sizes.clone().ok_or_else(|| usage("--sizes is required for this construction"));
    let n = a.n;
    Ok(match a.construction.as_str() {
        "star" => Construction::Star { n, k: k()?, t: t()?, center: a.center },
        "cover" => Construction::Cover { n, k: k()?, t: t()? },
        "clique" => Construction::Clique { n, k: k()?, t: t()? },
        "partite-threshold" => Construction::PartiteThreshold { n, k: k()? as u32, t: t()?, part: a.part },
        "theorem13-tight" => Construction::ProductTight { n, ks: ks()? },
        "complete" => Construction::Complete { n, k: k()?, t: t()?, partite: a.partite },
        "random-uniform" => Construction::RandomUniform { n, ks: ks()?, sizes: sizes()?, seed: cli.seed },
        "random-partite" => Construction::RandomPartite { n, k: k()?, sizes: sizes()?, seed: cli.seed },
        other => return Err(usage(format!("unknown construction {other:?}"))),
    })
}

fn generate(cli: &Cli, a: &GenerateArgs, out: &Output) -> Result<u8, Failure> {
    let c = construction(cli, a)?;
    let family = c.generate().map_err(usage)?;
    let file = FamilyFile::from_family(&family);
    match &a.out {
        Some(path) => {
            format::write_json(path, &file).map_err(usage)?;
            let summary = json!({
                "construction": c.kind(),
                "sizes": family.sizes(),
                "out": path.display().to_string(),
                "seed": cli.seed,
                "version": VERSION,
            });
            out.emit(&summary, || format!("{} sizes {:?} -> {}", c.kind(), family.sizes(), path.display()));
        }
        None => say!("{}", serde_json::to_string_pretty(&file).expect("serializable")),
    }
    Ok(0)
}

fn verify(cli: &Cli, a: &VerifyArgs, out: &Output) -> Result<u8, Failure> {
    let spec = CampaignSpec {
        target: a.target,
        n: a.n,
        k: a.k.unwrap_or(a.target.default_k()),
        t: a.t,
        trials: a.trials,
        seed: cli.seed,
        node_budget: a.node_budget,
        size_offset: a.size_offset,
    };
    if let Some(at) = &a.replay {
        let (cell, index) = at
            .split_once(':')
            .and_then(|(c, i)| Some((c.parse().ok()?, i.parse().ok()?)))
            .ok_or_else(|| usage("--replay expects CELL:INDEX"))?;
        let r = harness::replay(&spec, cell, index).map_err(usage)?;
        let value = json!({ "cell": cell, "index": index, "seed": cli.seed, "version": VERSION, "result": r });
        out.emit(&value, || format!("cell {cell} instance {index}: {:?} {:?}", r.outcome, r.constructive));
        return Ok(0);
    }
    let report = harness::run_campaign(&spec, a.threads(cli)).map_err(usage)?;
    if let Some(path) = &a.report {
        report.append_jsonl(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    if out.json {
        say!("{}", serde_json::to_string(&report.manifest).expect("serializable"));
        for c in &report.cells {
            say!("{}", serde_json::to_string(c).expect("serializable"));
        }
    } else if !out.quiet {
        for c in &report.cells {
            let cell = &c.cell;
            let head = format!("cell {:>3} n={} k={} t={} {:?}", cell.index, cell.n, cell.k, cell.t, cell.variant);
            match &cell.skipped {
                Some(why) => say!("{head}: skipped ({why})"),
                None => say!(
                    "{head}{}: {} instances, {} matched, {} refuted, {} over budget, {} hypothesis violations{}",
                    if cell.conforming { "" } else { " [exploratory]" },
                    cell.instances,
                    c.positives,
                    c.refutations,
                    c.budget_exceeded,
                    c.hypothesis_violations,
                    if c.refutes() { "  << COUNTEREXAMPLE" } else { "" },
                ),
            }
        }
    }
    if report.refuted() {
        Ok(EXIT_REFUTED)
    } else if report.cells.iter().any(|c| c.budget_exceeded > 0) {
        Ok(EXIT_BUDGET)
    } else {
        Ok(0)
    }
}

impl VerifyArgs {
    fn threads(&self, cli: &Cli) -> Option<usize> {
        cli.threads
    }
}

fn search(cli: &Cli, a: &SearchArgs, out: &Output) -> Result<u8, Failure> {
    let mut params = ExtremalParams::new(a.n, a.ks.clone(), a.budget, cli.seed);
    if let Some(p) = a.plateau {
        params.plateau_limit = p;
    }
    let start = Instant::now();
    let r = extremal_search(&params).map_err(usage)?;
    let file = FamilyFile::from_family(&r.family);
    if let Some(path) = &a.out {
        format::write_json(path, &file).map_err(usage)?;
    }
    let value = json!({
        "product": r.product.to_string(),
        "sizes": r.family.sizes(),
        "steps": r.steps,
        "restarts": r.restarts,
        "budget_exhausted": r.budget_exhausted,
        "solver_confirmed": r.solver_confirmed,
        "brute_force_confirmed": r.brute_force_confirmed,
        "family": file,
        "seed": cli.seed,
        "version": VERSION,
        "timing": millis(start),
    });
    out.emit(&value, || {
        format!("product {} with sizes {:?} after {} solver calls", r.product, r.family.sizes(), r.steps)
    });
    Ok(0)
}

fn nu(cli: &Cli, a: &NuArgs, out: &Output) -> Result<u8, Failure> {
    let family = read_family(&a.family)?;
    if a.member == 0 || a.member > family.len() {
        return Err(usage(format!("--member must lie in 1..={}", family.len())));
    }
    let start = Instant::now();
    let cfg = SolverConfig { node_budget: a.node_budget, seed: cli.seed, ..Default::default() };
    let r = matching_number(family.member(a.member - 1), &cfg);
    let (exact, lower, upper) = match r.value {
        NuValue::Exact(v) => (Some(v), v, v),
        NuValue::Bounds { lower, upper } => (None, lower, upper),
    };
    let value = json!({
        "nu": exact,
        "lower": lower,
        "upper": upper,
        "witness": r.witness.iter().map(|e| e.raw().collect::<Vec<_>>()).collect::<Vec<_>>(),
        "nodes": r.nodes,
        "seed": cli.seed,
        "version": VERSION,
        "timing": millis(start),
    });
    out.emit(&value, || match exact {
        Some(v) => format!("nu = {v}"),
        None => format!("{lower} <= nu <= {upper} (budget exhausted)"),
    });
    Ok(if exact.is_some() { 0 } else { EXIT_BUDGET })
}

fn check_inequality(cli: &Cli, a: &InequalityArgs, out: &Output) -> Result<u8, Failure> {
    match a.lemma.as_str() {
        "3.4" => {
            let ks = numeric::parse_repeated_list(a.ks.as_deref().ok_or_else(|| usage("--ks is required"))?).map_err(usage)?;
            let c = numeric::tail_inequality(a.n, &ks, a.epsilon).map_err(usage)?;
            let value = json!({ "check": c, "epsilon": a.epsilon, "seed": cli.seed, "version": VERSION });
            out.emit(&value, || {
                format!(
                    "{:?}: lhs {:.12} rhs {:.12} (sum {} {} [{:.1}, {:.1}])",
                    c.comparison,
                    c.lhs,
                    c.rhs,
                    c.sum,
                    if c.in_range { "in" } else { "outside, exploratory" },
                    c.range.0,
                    c.range.1
                )
            });
            Ok(if c.in_range && c.comparison == numeric::Comparison::Fails { EXIT_REFUTED } else { 0 })
        }
        "3.2" => {
            let need = |v: Option<f64>, name: &str| v.ok_or_else(|| usage(format!("--{name} is required")));
            let (t, k1, k2) = (need(a.t, "t")?, need(a.k1, "k1")?, need(a.k2, "k2")?);
            let n = a.n as f64;
            let f = numeric::log_ratio(t, n, k1, k2).map_err(usage)?;
            let next = numeric::log_ratio(t + 1.0, n, k1, k2).map_err(usage)?;
            let value = json!({
                "value": f,
                "next": next,
                "decreasing": next < f,
                "decreasing_guaranteed": numeric::log_ratio_decreasing_from(t, n, k1),
                "seed": cli.seed,
                "version": VERSION,
            });
            out.emit(&value, || format!("f({t}) = {f:.6}, f({}) = {next:.6}", t + 1.0));
            Ok(0)
        }
        other => Err(usage(format!("unknown inequality {other:?}; expected 3.2 or 3.4"))),
    }
}
