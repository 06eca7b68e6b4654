//! Verification campaigns: random or constructed instances per parameter
//! cell, solved exactly, tallied, and written as JSON lines.
//!
//! Every instance is a pure function of `(seed, cell, index)`, so reports do
//! not depend on the number of worker threads and any failure can be
//! replayed from its record.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rainbow_core::combinations::unrank;
use rainbow_core::constructive::{
    bipartite_greedy, default_max_trials, partite_recursive, random_permutation_certify, sample_indicators,
    verify_greedy_trace, verify_recursion_trace, CertifyOutcome, ConstructiveError,
};
use rainbow_core::generators::{product_tight, random_family, random_partite_family};
use rainbow_core::rng::{derive, mix64};
use rainbow_core::solver::{find_rainbow, SolverConfig, Verdict};
use rainbow_core::{binomial, threshold, validate_rainbow, Edge, Family};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::format::{FamilyFile, Timing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    #[serde(rename = "theorem12")]
    PartiteRecursion,
    #[serde(rename = "lemma21")]
    BipartiteGreedy,
    #[serde(rename = "theorem13")]
    ProductThreshold,
    #[serde(rename = "theorem14")]
    CoverThreshold,
    #[serde(rename = "prop23")]
    PermutationSampler,
    #[serde(rename = "corollary26")]
    PerfectMatching,
    #[serde(rename = "question16-explore")]
    PrefixProducts,
}

impl Target {
    pub const ALL: [Target; 7] = [
        Target::PartiteRecursion,
        Target::BipartiteGreedy,
        Target::ProductThreshold,
        Target::CoverThreshold,
        Target::PermutationSampler,
        Target::PerfectMatching,
        Target::PrefixProducts,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Target::PartiteRecursion => "theorem12",
            Target::BipartiteGreedy => "lemma21",
            Target::ProductThreshold => "theorem13",
            Target::CoverThreshold => "theorem14",
            Target::PermutationSampler => "prop23",
            Target::PerfectMatching => "corollary26",
            Target::PrefixProducts => "question16-explore",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Target::ALL.into_iter().find(|t| t.as_str() == s)
    }

    /// `k` range used when none is given: the number of parts for the
    /// partite targets, the uniformity otherwise.
    pub fn default_k(self) -> (u32, u32) {
        match self {
            Target::PartiteRecursion | Target::BipartiteGreedy => (3, 3),
            _ => (2, 2),
        }
    }

    fn max_n(self) -> u32 {
        match self {
            Target::CoverThreshold => 64,
            Target::PerfectMatching => 4,
            _ => 9,
        }
    }
}

/// An inclusive range `lo..=hi`.
pub type Span = (u32, u32);

pub fn parse_span(text: &str) -> Result<Span, String> {
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text.trim(), text.trim()),
    };
    let lo: u32 = lo.parse().map_err(|_| format!("bad range {text:?}"))?;
    let hi: u32 = hi.parse().map_err(|_| format!("bad range {text:?}"))?;
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok((lo, hi))
}

fn span(s: Span) -> impl Iterator<Item = u32> {
    s.0..=s.1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub target: Target,
    pub n: Span,
    pub k: Span,
    pub t: Span,
    pub trials: u64,
    pub seed: u64,
    pub node_budget: Option<u64>,
    /// Random member sizes are `threshold + size_offset`; `1` is the smallest
    /// size the statements under test cover.
    pub size_offset: i64,
}

impl CampaignSpec {
    pub fn new(target: Target, n: Span, t: Span, trials: u64, seed: u64) -> Self {
        CampaignSpec { target, n, k: target.default_k(), t, trials, seed, node_budget: None, size_offset: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    Matching,
    NoMatching,
    /// Open question; no verdict is predicted.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Random,
    /// The threshold-tight construction itself.
    Tight,
    /// The tight construction plus one random edge in the first member.
    AddEdge,
}

/// One parameter point of a campaign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub index: usize,
    pub variant: Variant,
    pub n: u32,
    pub k: u32,
    pub t: u32,
    pub ks: Vec<usize>,
    pub sizes: Vec<usize>,
    /// Whether the statement under test covers this cell. Contradictions in
    /// other cells are recorded but do not fail the run.
    pub conforming: bool,
    pub expect: Expect,
    pub instances: u64,
    pub skipped: Option<String>,
}

/// Member size `threshold + offset`, clamped to `[0, available]`.
fn offset_size(threshold: u128, offset: i64, available: u128) -> usize {
    let s = threshold as i128 + offset as i128;
    s.clamp(0, available as i128) as usize
}

fn pow(n: u32, e: u32) -> u128 {
    (n as u128).saturating_pow(e)
}

/// Enumerates the cells of `spec` in report order.
pub fn cells(spec: &CampaignSpec) -> Vec<Cell> {
    let mut out = Vec::new();
    let target = spec.target;
    let mut push = |mut c: Cell| {
        c.index = out.len();
        if c.variant == Variant::Random && spec.size_offset < 1 {
            c.conforming = false;
        }
        out.push(c);
    };
    let base = |n, k, t| Cell {
        index: 0,
        variant: Variant::Random,
        n,
        k,
        t,
        ks: Vec::new(),
        sizes: Vec::new(),
        conforming: false,
        expect: Expect::Matching,
        instances: spec.trials,
        skipped: None,
    };
    for k in span(spec.k) {
        for t in span(spec.t) {
            for n in span(spec.n) {
                // perfect matchings fix t = n; the t range is not iterated
                if target == Target::PerfectMatching && t != spec.t.0 {
                    continue;
                }
                let t = if target == Target::PerfectMatching { n } else { t };
                let mut c = base(n, k, t);
                if k == 0 || k > 3 || t == 0 || (t > 3 && target != Target::PerfectMatching) || n == 0 || n > target.max_n() {
                    c.skipped = Some(format!("outside guards 1 <= k <= 3, 1 <= t <= 3, 1 <= n <= {}", target.max_n()));
                    push(c);
                    continue;
                }
                match target {
                    Target::PartiteRecursion => {
                        c.ks = vec![k as usize; t as usize];
                        c.sizes = vec![offset_size((t as u128).saturating_sub(1) * pow(n, k.max(1) - 1), spec.size_offset, pow(n, k)); t as usize];
                        c.conforming = k >= 2 && n >= 3 * (k - 1) * t.saturating_sub(1);
                        c.skipped = (k < 2).then(|| "need k >= 2".to_string());
                        push(c);
                    }
                    Target::BipartiteGreedy => {
                        c.ks = vec![2; t as usize];
                        c.sizes = vec![offset_size((t as u128).saturating_sub(1) * n as u128, spec.size_offset, pow(n, 2)); t as usize];
                        c.conforming = n > t;
                        c.skipped = (k < 2).then(|| "need at least two parts".to_string());
                        push(c);
                    }
                    Target::ProductThreshold => {
                        c.ks = vec![k as usize; t as usize];
                        let bad = (t < 2 || n < k).then(|| "need t >= 2 and n >= k".to_string());
                        let mut tight = c.clone();
                        tight.variant = Variant::Tight;
                        tight.conforming = true;
                        tight.expect = Expect::NoMatching;
                        tight.instances = 1;
                        tight.skipped = bad.clone();
                        push(tight);
                        c.variant = Variant::AddEdge;
                        // beyond two members the statement needs n large
                        c.conforming = t == 2 && n >= 2 * k;
                        c.skipped = bad;
                        push(c);
                    }
                    Target::CoverThreshold => {
                        c.ks = vec![k as usize; t as usize];
                        if let (Ok(thr), Ok(all)) = (threshold::cover(n as u64, k as u64, t as u64), binomial(n as u64, k as u64)) {
                            c.sizes = vec![offset_size(thr, spec.size_offset, all); t as usize];
                        } else {
                            c.skipped = Some("need n >= k and t - 1 <= n".into());
                        }
                        c.conforming = n as u64 > 3 * (k as u64).pow(2) * t as u64;
                        push(c);
                    }
                    Target::PermutationSampler => {
                        c.ks = vec![k as usize; n as usize];
                        c.sizes = vec![offset_size((t as u128).saturating_sub(1) * pow(n, k.max(1) - 1), spec.size_offset, pow(n, k)); n as usize];
                        c.conforming = true;
                        c.skipped = (t > n).then(|| "need t <= n".to_string());
                        push(c);
                    }
                    Target::PerfectMatching => {
                        c.ks = vec![k as usize; n as usize];
                        c.sizes = vec![offset_size((n as u128).saturating_sub(1) * pow(n, k.max(1) - 1), spec.size_offset, pow(n, k)); n as usize];
                        c.conforming = true;
                        push(c);
                    }
                    Target::PrefixProducts => {
                        c.ks = vec![k as usize; t as usize];
                        c.expect = Expect::Unknown;
                        c.skipped = (n < k).then(|| "need n >= k".to_string());
                        push(c);
                    }
                }
            }
        }
    }
    out
}

/// Seed of instance `index` in `cell`.
pub fn instance_seed(seed: u64, cell: usize, index: u64) -> u64 {
    derive(derive(seed, cell as u64), index)
}

/// Hash-based draw from `0..m`; the modulo bias is below `m / 2^128`.
fn draw(seed: u64, j: u64, m: u128) -> u128 {
    let hi = mix64(derive(seed, 2 * j)) as u128;
    let lo = mix64(derive(seed, 2 * j + 1)) as u128;
    ((hi << 64) | lo) % m
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("no cell {0} in this campaign")]
    NoCell(usize),
    #[error("cell {0} is skipped")]
    Skipped(usize),
    #[error("instance {index} is outside the {instances} instances of cell {cell}")]
    NoInstance { cell: usize, index: u64, instances: u64 },
    #[error("could not build instance: {0}")]
    Build(String),
    #[error("could not start workers: {0}")]
    Threads(String),
}

const MAX_SIZE_DRAWS: u64 = 1_000_000;

/// Ascending member sizes meeting every prefix-product bound, and the number
/// of rejected draws.
fn prefix_sizes(n: u32, k: u32, t: u32, seed: u64) -> Result<(Vec<usize>, u64), HarnessError> {
    let all = binomial(n as u64, k as u64).map_err(|e| HarnessError::Build(e.to_string()))?;
    for attempt in 0..MAX_SIZE_DRAWS {
        let s = derive(seed, attempt);
        let mut sizes: Vec<usize> = (0..t as u64).map(|j| 1 + draw(s, j, all) as usize).collect();
        sizes.sort_unstable();
        if threshold::satisfies_prefix_products(n as u64, k as u64, &sizes).map_err(|e| HarnessError::Build(e.to_string()))? {
            return Ok((sizes, attempt));
        }
    }
    Err(HarnessError::Build("no admissible sizes found".into()))
}

/// The instance for `(cell, seed)` and, for size-sampling cells, the rejected
/// draws that preceded it.
pub fn build_instance(target: Target, cell: &Cell, seed: u64) -> Result<(Family, u64), HarnessError> {
    let (n, k, t) = (cell.n, cell.k, cell.t as usize);
    let err = |e: &dyn std::fmt::Display| HarnessError::Build(e.to_string());
    let family = match target {
        Target::PartiteRecursion => {
            let parts: Vec<u32> = (1..=k).collect();
            random_partite_family(n, k, &vec![parts; t], &cell.sizes, seed).map_err(|e| err(&e))?
        }
        Target::BipartiteGreedy => {
            let pairs: Vec<Vec<u32>> = (0..t as u64)
                .map(|i| {
                    let a = draw(seed, 2 * i, k as u128) as u32;
                    let b = (a + 1 + draw(seed, 2 * i + 1, k as u128 - 1) as u32) % k;
                    let mut pair = vec![a + 1, b + 1];
                    pair.sort_unstable();
                    pair
                })
                .collect();
            random_partite_family(n, k, &pairs, &cell.sizes, derive(seed, u64::MAX)).map_err(|e| err(&e))?
        }
        Target::ProductThreshold => {
            let f = product_tight(n, &cell.ks).map_err(|e| err(&e))?;
            if cell.variant == Variant::AddEdge {
                // a random k_1-set avoiding vertex 1 is never in the first star
                let k1 = cell.ks[0];
                let total = binomial(n as u64 - 1, k1 as u64).map_err(|e| err(&e))?;
                if total == 0 {
                    return Err(HarnessError::Build("no edge avoids vertex 1".into()));
                }
                let raw = unrank(draw(seed, 0, total), n - 1, k1).map_err(|e| err(&e))?;
                let e = Edge::new(raw.into_iter().map(|v| v + 1)).map_err(|e| err(&e))?;
                let first = f.member(0).with_edge(e).expect("edge avoids the star");
                f.with_member(0, first).map_err(|e| err(&e))?
            } else {
                f
            }
        }
        Target::CoverThreshold | Target::PrefixProducts => {
            let ks = vec![k as usize; t];
            let sizes = if target == Target::PrefixProducts {
                let (sizes, rejected) = prefix_sizes(n, k, cell.t, derive(seed, u64::MAX))?;
                let f = random_family(n, &ks, &sizes, false, seed).map_err(|e| err(&e))?;
                return Ok((f, rejected));
            } else {
                cell.sizes.clone()
            };
            random_family(n, &ks, &sizes, false, seed).map_err(|e| err(&e))?
        }
        Target::PermutationSampler | Target::PerfectMatching => {
            random_family(n, &cell.ks, &cell.sizes, true, seed).map_err(|e| err(&e))?
        }
    };
    Ok((family, 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Matching,
    NoMatching,
    BudgetExceeded,
}

/// Result of the constructive algorithm run alongside the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constructive {
    Ok,
    HypothesisViolated,
    InvalidInput,
    /// Output or trace failed re-validation.
    InvalidOutput,
    /// The algorithm produced a matching the solver says cannot exist.
    Disagreement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub outcome: Outcome,
    pub constructive: Option<Constructive>,
    pub detail: Option<String>,
    pub nodes: u64,
    /// `Σ X_i` for one sampled permutation (sampler campaigns).
    pub indicator_sum: Option<usize>,
    pub rejected_samples: u64,
    pub family: FamilyFile,
}

impl InstanceResult {
    fn contradicts(&self, expect: Expect) -> bool {
        matches!(
            (expect, self.outcome),
            (Expect::Matching, Outcome::NoMatching) | (Expect::NoMatching, Outcome::Matching)
        ) || matches!(self.constructive, Some(Constructive::Disagreement | Constructive::InvalidOutput))
    }

    fn is_failure(&self, expect: Expect) -> bool {
        self.contradicts(expect)
            || self.outcome == Outcome::BudgetExceeded
            || self.constructive.is_some_and(|c| c != Constructive::Ok)
            || (expect == Expect::Unknown && self.outcome == Outcome::NoMatching)
    }
}

fn constructive_status(e: &ConstructiveError) -> Constructive {
    match e {
        ConstructiveError::HypothesisViolated { .. } => Constructive::HypothesisViolated,
        _ => Constructive::InvalidInput,
    }
}

/// Runs instance `index` of `cell`.
pub fn run_instance(spec: &CampaignSpec, cell: &Cell, index: u64) -> Result<InstanceResult, HarnessError> {
    let seed = instance_seed(spec.seed, cell.index, index);
    let (family, rejected_samples) = build_instance(spec.target, cell, seed)?;
    let cfg = SolverConfig { node_budget: spec.node_budget, seed, ..Default::default() };
    let mut result = InstanceResult {
        outcome: Outcome::BudgetExceeded,
        constructive: None,
        detail: None,
        nodes: 0,
        indicator_sum: None,
        rejected_samples,
        family: FamilyFile::from_family(&family),
    };

    if spec.target == Target::PermutationSampler {
        let t = cell.t as usize;
        let c = random_permutation_certify(&family, t, default_max_trials(t), seed).map_err(|e| HarnessError::Build(e.to_string()))?;
        result.outcome = match c.outcome {
            CertifyOutcome::Found { indices, matching, .. } => {
                let sub = Family::new(indices.iter().map(|&i| family.member(i).clone()).collect()).expect("same universe");
                if let Err(d) = validate_rainbow(&sub, &matching) {
                    result.constructive = Some(Constructive::InvalidOutput);
                    result.detail = Some(d.to_string());
                }
                Outcome::Matching
            }
            CertifyOutcome::Exhausted { .. } => Outcome::BudgetExceeded,
        };
        let x = sample_indicators(&family, derive(seed, 1), 0).map_err(|e| HarnessError::Build(e.to_string()))?;
        result.indicator_sum = Some(x.iter().filter(|&&b| b).count());
        return Ok(result);
    }

    let search = find_rainbow(&family, &cfg);
    result.nodes = search.nodes;
    result.outcome = match &search.verdict {
        Verdict::Found(m) => {
            debug_assert_eq!(validate_rainbow(&family, m), Ok(()));
            Outcome::Matching
        }
        Verdict::NoMatching => Outcome::NoMatching,
        Verdict::BudgetExceeded => Outcome::BudgetExceeded,
    };

    let built = match spec.target {
        Target::PartiteRecursion => Some(partite_recursive(&family).map(|out| {
            let ok = validate_rainbow(&family, &out.matching).is_ok() && verify_recursion_trace(&family, &out.events).is_ok();
            (ok, out.matching)
        })),
        Target::BipartiteGreedy => Some(bipartite_greedy(&family).map(|out| {
            let ok = validate_rainbow(&family, &out.matching).is_ok() && verify_greedy_trace(&family, &out.trace).is_ok();
            (ok, out.matching)
        })),
        _ => None,
    };
    if let Some(built) = built {
        result.constructive = Some(match built {
            Ok((false, _)) => Constructive::InvalidOutput,
            Ok((true, _)) if result.outcome == Outcome::NoMatching => Constructive::Disagreement,
            Ok((true, _)) => Constructive::Ok,
            Err(e) => {
                result.detail = Some(e.to_string());
                constructive_status(&e)
            }
        });
    }
    Ok(result)
}

/// A failed or noteworthy instance, replayable from `(seed, cell, index)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub seed: u64,
    pub cell: usize,
    pub index: u64,
    pub instance_seed: u64,
    pub conforming: bool,
    pub outcome: Outcome,
    pub constructive: Option<Constructive>,
    pub detail: Option<String>,
    pub family: FamilyFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorStats {
    pub samples: u64,
    pub mean: f64,
    pub expected: f64,
    pub stderr: f64,
    pub within_three_stderr: bool,
}

impl IndicatorStats {
    pub fn from_sums(sums: &[usize], expected: f64) -> Self {
        let m = sums.len() as f64;
        let mean = sums.iter().sum::<usize>() as f64 / m;
        let var = sums.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
        let stderr = (var / m).sqrt();
        // a zero-variance sample must hit the expectation exactly
        let within = (mean - expected).abs() <= 3.0 * stderr + 1e-9;
        IndicatorStats { samples: sums.len() as u64, mean, expected, stderr, within_three_stderr: within }
    }
}

/// `Σ X_i` over `trials` sampled part-preserving permutations against its
/// expectation `Σ |F_i| / n^k`.
pub fn indicator_statistics(family: &Family, trials: u64, seed: u64) -> Result<IndicatorStats, HarnessError> {
    let p = family.partite().ok_or_else(|| HarnessError::Build("family is not partite".into()))?;
    let denom = pow(p.part_size(), p.parts()) as f64;
    let expected = family.sizes().iter().sum::<usize>() as f64 / denom;
    let sums = (0..trials)
        .map(|s| sample_indicators(family, seed, s).map(|x| x.iter().filter(|&&b| b).count()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| HarnessError::Build(e.to_string()))?;
    Ok(IndicatorStats::from_sums(&sums, expected))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub kind: String,
    pub target: Target,
    #[serde(flatten)]
    pub cell: Cell,
    pub seed: u64,
    pub positives: u64,
    pub refutations: u64,
    pub budget_exceeded: u64,
    pub hypothesis_violations: u64,
    pub disagreements: u64,
    /// Instances whose verdict contradicts the expectation.
    pub contradictions: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejected_samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indicators: Option<IndicatorStats>,
    pub failures: Vec<FailureRecord>,
    pub timing: Timing,
}

impl CellReport {
    /// Tallies sum to the instance count.
    pub fn conserved(&self) -> bool {
        self.skipped_or(|| self.positives + self.refutations + self.budget_exceeded == self.cell.instances)
    }

    fn skipped_or(&self, f: impl FnOnce() -> bool) -> bool {
        self.cell.skipped.is_some() || f()
    }

    /// A conforming cell with a contradiction or a constructive failure.
    pub fn refutes(&self) -> bool {
        self.cell.conforming
            && self.cell.skipped.is_none()
            && (self.contradictions > 0 || self.hypothesis_violations > 0 || self.disagreements > 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub kind: String,
    pub version: String,
    pub spec: CampaignSpec,
    pub cells: usize,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub manifest: Manifest,
    pub cells: Vec<CellReport>,
}

impl CampaignReport {
    pub fn refuted(&self) -> bool {
        self.cells.iter().any(CellReport::refutes)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FailureRecord> {
        self.cells.iter().flat_map(|c| &c.failures)
    }

    /// Appends the manifest and one line per cell to `path`.
    pub fn append_jsonl(&self, path: &Path) -> std::io::Result<()> {
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut text = serde_json::to_string(&self.manifest)?;
        text.push('\n');
        for c in &self.cells {
            text.push_str(&serde_json::to_string(c)?);
            text.push('\n');
        }
        file.write_all(text.as_bytes())
    }
}

/// Runs every cell of `spec` on `threads` workers (`None`: all cores).
pub fn run_campaign(spec: &CampaignSpec, threads: Option<usize>) -> Result<CampaignReport, HarnessError> {
    let cells = cells(spec);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| HarnessError::Threads(e.to_string()))?;
    let work: Vec<(usize, u64)> = cells
        .iter()
        .filter(|c| c.skipped.is_none())
        .flat_map(|c| (0..c.instances).map(move |i| (c.index, i)))
        .collect();
    let results: Vec<(Result<InstanceResult, HarnessError>, u64)> = pool.install(|| {
        work.par_iter()
            .map(|&(c, i)| {
                let start = Instant::now();
                let r = run_instance(spec, &cells[c], i);
                (r, start.elapsed().as_millis() as u64)
            })
            .collect()
    });

    let mut reports: Vec<CellReport> = cells
        .iter()
        .map(|c| CellReport {
            kind: "cell".into(),
            target: spec.target,
            cell: c.clone(),
            seed: spec.seed,
            positives: 0,
            refutations: 0,
            budget_exceeded: 0,
            hypothesis_violations: 0,
            disagreements: 0,
            contradictions: 0,
            rejected_samples: (spec.target == Target::PrefixProducts).then_some(0),
            indicators: None,
            failures: Vec::new(),
            timing: Timing { millis: 0 },
        })
        .collect();
    let mut sums: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
    for (&(c, index), (result, millis)) in work.iter().zip(results) {
        let r = result?;
        let report = &mut reports[c];
        let expect = report.cell.expect;
        report.timing.millis += millis;
        match r.outcome {
            Outcome::Matching => report.positives += 1,
            Outcome::NoMatching => report.refutations += 1,
            Outcome::BudgetExceeded => report.budget_exceeded += 1,
        }
        match r.constructive {
            Some(Constructive::HypothesisViolated) => report.hypothesis_violations += 1,
            Some(Constructive::Disagreement | Constructive::InvalidOutput) => report.disagreements += 1,
            _ => {}
        }
        if r.contradicts(expect) {
            report.contradictions += 1;
        }
        if let Some(rejected) = report.rejected_samples.as_mut() {
            *rejected += r.rejected_samples;
        }
        if let Some(x) = r.indicator_sum {
            sums[c].push(x);
        }
        if r.is_failure(expect) {
            report.failures.push(FailureRecord {
                seed: spec.seed,
                cell: c,
                index,
                instance_seed: instance_seed(spec.seed, c, index),
                conforming: report.cell.conforming,
                outcome: r.outcome,
                constructive: r.constructive,
                detail: r.detail,
                family: r.family,
            });
        }
    }
    for (report, sums) in reports.iter_mut().zip(sums) {
        if !sums.is_empty() {
            let c = &report.cell;
            let expected = c.sizes.iter().sum::<usize>() as f64 / pow(c.n, c.k) as f64;
            report.indicators = Some(IndicatorStats::from_sums(&sums, expected));
        }
    }
    Ok(CampaignReport {
        manifest: Manifest {
            kind: "manifest".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            spec: spec.clone(),
            cells: reports.len(),
            threads: pool.current_num_threads(),
        },
        cells: reports,
    })
}

/// Recomputes instance `index` of cell `cell`.
pub fn replay(spec: &CampaignSpec, cell: usize, index: u64) -> Result<InstanceResult, HarnessError> {
    let cells = cells(spec);
    let c = cells.get(cell).ok_or(HarnessError::NoCell(cell))?;
    if c.skipped.is_some() {
        return Err(HarnessError::Skipped(cell));
    }
    if index >= c.instances {
        return Err(HarnessError::NoInstance { cell, index, instances: c.instances });
    }
    run_instance(spec, c, index)
}

/// Whether replaying `record` reproduces it exactly.
pub fn replays_identically(spec: &CampaignSpec, record: &FailureRecord) -> bool {
    match replay(spec, record.cell, record.index) {
        Ok(r) => {
            r.outcome == record.outcome
                && r.constructive == record.constructive
                && r.detail == record.detail
                && r.family == record.family
                && instance_seed(spec.seed, record.cell, record.index) == record.instance_seed
        }
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!(parse_span("5..7"), Ok((5, 7)));
        assert_eq!(parse_span("4"), Ok((4, 4)));
        assert!(parse_span("7..5").is_err());
        assert!(parse_span("a..b").is_err());
    }

    #[test]
    fn target_names_round_trip() {
        for t in Target::ALL {
            assert_eq!(Target::parse(t.as_str()), Some(t));
            assert_eq!(serde_json::to_string(&t).unwrap(), format!("\"{}\"", t.as_str()));
        }
    }

    #[test]
    fn partite_recursion_cell() {
        let spec = CampaignSpec { k: (3, 3), ..CampaignSpec::new(Target::PartiteRecursion, (6, 6), (2, 2), 20, 3) };
        let r = run_campaign(&spec, Some(2)).unwrap();
        let c = &r.cells[0];
        assert_eq!(c.cell.sizes, [37, 37]);
        assert!(c.cell.conforming);
        assert_eq!((c.positives, c.refutations, c.hypothesis_violations), (20, 0, 0));
        assert!(!r.refuted());
    }

    #[test]
    fn report_is_independent_of_threads() {
        let spec = CampaignSpec::new(Target::BipartiteGreedy, (3, 5), (2, 3), 15, 9);
        let strip = |mut r: CampaignReport| {
            r.manifest.threads = 0;
            r.cells.iter_mut().for_each(|c| c.timing.millis = 0);
            r
        };
        let a = strip(run_campaign(&spec, Some(1)).unwrap());
        let b = strip(run_campaign(&spec, Some(4)).unwrap());
        assert_eq!(a, b);
        assert!(a.cells.iter().all(CellReport::conserved));
    }

    #[test]
    fn tight_cells_expect_no_matching() {
        let spec = CampaignSpec { k: (2, 2), ..CampaignSpec::new(Target::ProductThreshold, (4, 6), (2, 3), 10, 1) };
        let r = run_campaign(&spec, None).unwrap();
        for c in &r.cells {
            match c.cell.variant {
                Variant::Tight => assert_eq!((c.refutations, c.contradictions), (1, 0)),
                Variant::AddEdge if c.cell.conforming => assert_eq!(c.positives, c.cell.instances),
                // three members do not fit disjointly on so few vertices
                Variant::AddEdge => assert!(c.cell.n >= 6 || c.positives == 0),
                Variant::Random => unreachable!(),
            }
        }
        assert!(!r.refuted());
    }

    #[test]
    fn below_threshold_failures_replay() {
        let spec = CampaignSpec { size_offset: -1, ..CampaignSpec::new(Target::BipartiteGreedy, (3, 3), (2, 2), 40, 5) };
        let r = run_campaign(&spec, None).unwrap();
        assert!(r.failures().count() > 0);
        // sizes below the threshold are outside every statement
        assert!(!r.cells[0].cell.conforming);
        assert!(!r.refuted());
        for f in r.failures() {
            assert!(replays_identically(&spec, f));
        }
    }

    #[test]
    fn prefix_product_sizes_are_admissible() {
        for s in 0..50 {
            let (sizes, _) = prefix_sizes(6, 2, 3, s).unwrap();
            assert!(threshold::satisfies_prefix_products(6, 2, &sizes).unwrap());
        }
    }

    #[test]
    fn skipped_cells_have_reasons() {
        let spec = CampaignSpec::new(Target::PerfectMatching, (2, 5), (1, 1), 3, 0);
        let cs = cells(&spec);
        assert_eq!(cs.len(), 4);
        assert!(cs[3].skipped.is_some());
        assert_eq!(cs[1].t, 3);
    }
}
