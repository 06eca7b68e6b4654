//! Tight constructions and random instance samplers.
//!
//! Every construction is exact: sizes are asserted against their closed
//! forms in the tests, and partite output uses the canonical labeling of
//! [`PartiteStructure`].

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;

use crate::binomial::{binomial, checked_pow, Overflow};
use crate::combinations::{unrank, Combinations};
use crate::hypergraph::{Edge, Family, Hypergraph, PartiteStructure, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    Invalid(&'static str),
    #[error("member {member}: asked for {requested} edges but only {available} exist")]
    InfeasibleSize { member: usize, requested: usize, available: u128 },
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

fn edges_of(lists: impl IntoIterator<Item = Vec<u32>>) -> Vec<Edge> {
    let mut edges: Vec<Edge> = lists.into_iter().map(|l| Edge::new(l).expect("generated edge")).collect();
    edges.sort_unstable();
    edges
}

/// All `k`-subsets of `[n]` through `center`. Size `C(n − 1, k − 1)`.
pub fn star(n: u32, k: usize, center: u32) -> Result<Hypergraph, GenError> {
    if center == 0 || center > n || k == 0 || k > n as usize {
        return Err(GenError::Invalid("star needs 1 <= center <= n and 1 <= k <= n"));
    }
    let edges = edges_of(Combinations::new(n, k).filter(|e| e.contains(&center)));
    Ok(Hypergraph::from_sorted_unique(n, k, edges, None))
}

/// All `k`-subsets of `[n]` meeting `{1, ..., t − 1}`. Size
/// `C(n, k) − C(n − t + 1, k)`.
pub fn cover(n: u32, k: usize, t: u32) -> Result<Hypergraph, GenError> {
    if t == 0 || t - 1 > n || k == 0 || k > n as usize {
        return Err(GenError::Invalid("cover needs t >= 1, t - 1 <= n and 1 <= k <= n"));
    }
    let edges = edges_of(Combinations::new(n, k).filter(|e| e[0] < t));
    Ok(Hypergraph::from_sorted_unique(n, k, edges, None))
}

/// All `k`-subsets of `[kt − 1]`, on the universe `[n]`. Size `C(kt − 1, k)`.
pub fn clique(n: u32, k: usize, t: u32) -> Result<Hypergraph, GenError> {
    let span = (k as u64 * t as u64).checked_sub(1).ok_or(GenError::Invalid("clique needs k, t >= 1"))?;
    if k == 0 || t == 0 || span > n as u64 {
        return Err(GenError::Invalid("clique needs k, t >= 1 and kt - 1 <= n"));
    }
    let edges = edges_of(Combinations::new(span as u32, k));
    Ok(Hypergraph::from_sorted_unique(n, k, edges, None))
}

/// The complete `k`-graph on `[n]`.
pub fn complete(n: u32, k: usize) -> Result<Hypergraph, GenError> {
    if k > n as usize {
        return Err(GenError::Invalid("complete needs k <= n"));
    }
    Ok(Hypergraph::from_sorted_unique(n, k, edges_of(Combinations::new(n, k)), None))
}

/// Number of edges with one vertex in each of `r` parts of size `n`.
fn partite_count(n: u32, r: usize) -> Result<u128, Overflow> {
    checked_pow(n as u64, r as u32)
}

/// Edge number `code` (mixed radix, first part least significant) among the
/// edges using exactly the parts in `on_parts`.
fn partite_unrank(p: &PartiteStructure, on_parts: &[u32], mut code: u128) -> Vec<u32> {
    let n = p.part_size() as u128;
    on_parts
        .iter()
        .map(|&part| {
            let q = (code % n) as u32 + 1;
            code /= n;
            p.vertex(part, q).get()
        })
        .collect()
}

fn check_parts(p: &PartiteStructure, on_parts: &[u32]) -> Result<(), GenError> {
    let mut sorted = on_parts.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != on_parts.len() || on_parts.iter().any(|&q| q == 0 || q > p.parts()) {
        return Err(GenError::Invalid("parts must be distinct and within 1..=k"));
    }
    Ok(())
}

/// All edges with exactly one vertex in each part of `on_parts`, inside the
/// balanced `k`-part structure with parts of size `n`.
pub fn complete_partite(parts: u32, n: u32, on_parts: &[u32]) -> Result<Hypergraph, GenError> {
    let p = PartiteStructure::new(parts, n).ok_or(GenError::Invalid("need k, n >= 1"))?;
    check_parts(&p, on_parts)?;
    let total = partite_count(n, on_parts.len())?;
    let edges = edges_of((0..total).map(|c| partite_unrank(&p, on_parts, c)));
    Ok(Hypergraph::from_sorted_unique(p.universe(), on_parts.len(), edges, Some(p)))
}

/// All edges of the complete balanced `k`-partite `k`-graph whose vertex in
/// `part` lies in `fixed` (default: the first `t − 1` vertices of `part`).
/// Size `(t − 1)·n^(k − 1)`; no `t` of its edges are pairwise disjoint.
pub fn partite_threshold(
    n: u32,
    k: u32,
    t: u32,
    part: u32,
    fixed: Option<&[u32]>,
) -> Result<Hypergraph, GenError> {
    let p = PartiteStructure::new(k, n).ok_or(GenError::Invalid("need k, n >= 1"))?;
    if part == 0 || part > k || t == 0 {
        return Err(GenError::Invalid("need t >= 1 and 1 <= part <= k"));
    }
    let fixed: Vec<u32> = match fixed {
        Some(s) => s.to_vec(),
        None => {
            if t - 1 > n {
                return Err(GenError::Invalid("need t - 1 <= n"));
            }
            (1..t).map(|q| p.vertex(part, q).get()).collect()
        }
    };
    let mut dedup = fixed.clone();
    dedup.sort_unstable();
    dedup.dedup();
    if fixed.len() != (t - 1) as usize
        || dedup.len() != fixed.len()
        || fixed.iter().any(|&v| v == 0 || v > p.universe() || p.part_of(VertexId(v)) != part)
    {
        return Err(GenError::Invalid("fixed set must be t - 1 distinct vertices of the chosen part"));
    }
    let others: Vec<u32> = (1..=k).filter(|&q| q != part).collect();
    let per = partite_count(n, others.len())?;
    let mut lists = Vec::new();
    for &s in &fixed {
        for c in 0..per {
            let mut e = partite_unrank(&p, &others, c);
            e.push(s);
            lists.push(e);
        }
    }
    Ok(Hypergraph::from_sorted_unique(p.universe(), k as usize, edges_of(lists), Some(p)))
}

/// Two stars at vertex 1 (uniformities `k_1`, `k_2`) followed by complete
/// `k_i`-graphs: product of sizes `C(n−1,k_1−1)·C(n−1,k_2−1)·Π C(n,k_i)`,
/// and no rainbow matching because the stars collide at vertex 1.
pub fn product_tight(n: u32, ks: &[usize]) -> Result<Family, GenError> {
    if ks.len() < 2 {
        return Err(GenError::Invalid("need at least two uniformities"));
    }
    if ks.windows(2).any(|w| w[0] < w[1]) {
        return Err(GenError::Invalid("uniformities must be sorted in descending order"));
    }
    if ks.iter().any(|&k| k == 0 || k > n as usize) {
        return Err(GenError::Invalid("need 1 <= k_i <= n"));
    }
    let mut members = vec![star(n, ks[0], 1)?, star(n, ks[1], 1)?];
    for &k in &ks[2..] {
        members.push(complete(n, k)?);
    }
    Ok(Family::new(members).expect("shared universe"))
}

/// Samples `sizes[i]` distinct edges uniformly for member `i`.
///
/// Uniform members are `k_i`-subsets of `[n]`; partite members are edges of
/// the complete balanced `k`-partite `k`-graph with parts of size `n` (all
/// `k_i` must then be equal). Edges are drawn by rank, so the full edge set is
/// never materialized.
pub fn random_family(n: u32, ks: &[usize], sizes: &[usize], partite: bool, seed: u64) -> Result<Family, GenError> {
    if ks.is_empty() || ks.len() != sizes.len() {
        return Err(GenError::Invalid("need one size per uniformity and t >= 1"));
    }
    if partite {
        let k = ks[0];
        if k == 0 || ks.iter().any(|&x| x != k) {
            return Err(GenError::Invalid("partite sampling needs one common k >= 1"));
        }
        let all: Vec<u32> = (1..=k as u32).collect();
        let part_sets = vec![all; ks.len()];
        return random_partite_family(n, k as u32, &part_sets, sizes, seed);
    }
    let mut rng = crate::rng::rng(seed);
    let mut members = Vec::with_capacity(ks.len());
    for (i, (&k, &size)) in ks.iter().zip(sizes).enumerate() {
        if k == 0 || k > n as usize {
            return Err(GenError::Invalid("need 1 <= k_i <= n"));
        }
        let total = binomial(n as u64, k as u64)?;
        if size as u128 > total {
            return Err(GenError::InfeasibleSize { member: i, requested: size, available: total });
        }
        let total = usize::try_from(total).map_err(|_| Overflow)?;
        let edges = edges_of(
            index::sample(&mut rng, total, size).into_iter().map(|r| unrank(r as u128, n, k).expect("rank < total")),
        );
        members.push(Hypergraph::from_sorted_unique(n, k, edges, None));
    }
    Ok(Family::new(members).expect("shared universe"))
}

/// Like [`random_family`] for partite members where member `i` lives on the
/// parts `part_sets[i]` of a `k`-part structure with parts of size `n`.
pub fn random_partite_family(
    n: u32,
    k: u32,
    part_sets: &[Vec<u32>],
    sizes: &[usize],
    seed: u64,
) -> Result<Family, GenError> {
    if part_sets.is_empty() || part_sets.len() != sizes.len() {
        return Err(GenError::Invalid("need one size per member and t >= 1"));
    }
    let p = PartiteStructure::new(k, n).ok_or(GenError::Invalid("need k, n >= 1"))?;
    let mut rng = crate::rng::rng(seed);
    let mut members = Vec::with_capacity(sizes.len());
    for (i, (parts, &size)) in part_sets.iter().zip(sizes).enumerate() {
        check_parts(&p, parts)?;
        if parts.is_empty() {
            return Err(GenError::Invalid("members need at least one part"));
        }
        let total = partite_count(n, parts.len())?;
        if size as u128 > total {
            return Err(GenError::InfeasibleSize { member: i, requested: size, available: total });
        }
        let total = usize::try_from(total).map_err(|_| Overflow)?;
        let edges = edges_of(index::sample(&mut rng, total, size).into_iter().map(|c| partite_unrank(&p, parts, c as u128)));
        members.push(Hypergraph::from_sorted_unique(p.universe(), parts.len(), edges, Some(p)));
    }
    Ok(Family::new(members).expect("shared universe"))
}

/// A validated description of one construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// `t` copies of the star at `center`.
    Star { n: u32, k: usize, t: u32, center: u32 },
    /// `t` copies of the cover of `{1, ..., t − 1}`.
    Cover { n: u32, k: usize, t: u32 },
    /// `t` copies of the complete graph on `[kt − 1]`.
    Clique { n: u32, k: usize, t: u32 },
    /// `t` copies of the partite threshold construction in `part`.
    PartiteThreshold { n: u32, k: u32, t: u32, part: u32 },
    /// Two stars followed by complete graphs.
    ProductTight { n: u32, ks: Vec<usize> },
    /// `t` copies of the complete `k`-graph, partite when `partite`.
    Complete { n: u32, k: usize, t: u32, partite: bool },
    RandomUniform { n: u32, ks: Vec<usize>, sizes: Vec<usize>, seed: u64 },
    RandomPartite { n: u32, k: usize, sizes: Vec<usize>, seed: u64 },
}

impl Construction {
    pub fn kind(&self) -> &'static str {
        match self {
            Construction::Star { .. } => "star",
            Construction::Cover { .. } => "cover",
            Construction::Clique { .. } => "clique",
            Construction::PartiteThreshold { .. } => "partite-threshold",
            Construction::ProductTight { .. } => "theorem13-tight",
            Construction::Complete { .. } => "complete",
            Construction::RandomUniform { .. } => "random-uniform",
            Construction::RandomPartite { .. } => "random-partite",
        }
    }

    pub fn generate(&self) -> Result<Family, GenError> {
        let copies = |h: Hypergraph, t: u32| {
            if t == 0 {
                Err(GenError::Invalid("need t >= 1"))
            } else {
                Ok(Family::repeated(h, t as usize).expect("shared universe"))
            }
        };
        match self {
            Construction::Star { n, k, t, center } => copies(star(*n, *k, *center)?, *t),
            Construction::Cover { n, k, t } => copies(cover(*n, *k, *t)?, *t),
            Construction::Clique { n, k, t } => copies(clique(*n, *k, *t)?, *t),
            Construction::PartiteThreshold { n, k, t, part } => copies(partite_threshold(*n, *k, *t, *part, None)?, *t),
            Construction::ProductTight { n, ks } => product_tight(*n, ks),
            Construction::Complete { n, k, t, partite } => {
                let h = if *partite {
                    let parts: Vec<u32> = (1..=*k as u32).collect();
                    complete_partite(*k as u32, *n, &parts)?
                } else {
                    complete(*n, *k)?
                };
                copies(h, *t)
            }
            Construction::RandomUniform { n, ks, sizes, seed } => random_family(*n, ks, sizes, false, *seed),
            Construction::RandomPartite { n, k, sizes, seed } => random_family(*n, &vec![*k; sizes.len()], sizes, true, *seed),
        }
    }
}
