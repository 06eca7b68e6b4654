use alloc::vec;
use alloc::vec::Vec;

use rand::seq::IndexedRandom;
use rand::Rng as _;

use super::{brute_force_rainbow, find_rainbow, SolverConfig, Verdict};
use crate::combinations::Combinations;
use crate::hypergraph::{Edge, Family, Hypergraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalParams {
    pub n: u32,
    /// Uniformity of each member; `t = ks.len()`.
    pub ks: Vec<usize>,
    /// Maximum number of feasibility checks (solver calls).
    pub budget: u64,
    pub seed: u64,
    /// Non-improving perturbations tolerated before a restart.
    pub plateau_limit: u32,
}

impl ExtremalParams {
    pub fn new(n: u32, ks: Vec<usize>, budget: u64, seed: u64) -> Self {
        ExtremalParams { n, ks, budget, seed, plateau_limit: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtremalError {
    #[error("parameters outside the search guard: {0}")]
    Guard(&'static str),
}

/// Best family found. The product is a lower-bound witness for the maximum
/// over families with no rainbow matching; optimality is never claimed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalResult {
    pub family: Family,
    pub product: u128,
    pub steps: u64,
    pub restarts: u64,
    pub budget_exhausted: bool,
    /// The exact solver refutes a rainbow matching for `family`.
    pub solver_confirmed: bool,
    /// Independent enumeration agrees, when small enough to run.
    pub brute_force_confirmed: Option<bool>,
}

struct State<'a> {
    n: u32,
    ks: &'a [usize],
    pool: &'a [Vec<Edge>],
    member: Vec<Vec<bool>>,
    sizes: Vec<usize>,
}

impl State<'_> {
    fn family(&self) -> Family {
        let members = (0..self.ks.len())
            .map(|i| {
                let edges: Vec<Edge> = self.pool[i]
                    .iter()
                    .zip(&self.member[i])
                    .filter(|(_, &on)| on)
                    .map(|(e, _)| e.clone())
                    .collect();
                Hypergraph::from_sorted_unique(self.n, self.ks[i], edges, None)
            })
            .collect();
        Family::new(members).expect("members share one universe")
    }

    fn product(&self) -> u128 {
        self.sizes.iter().map(|&s| s as u128).product()
    }

    /// Increase of the product when member `i` gains one edge.
    fn gain(&self, i: usize) -> u128 {
        self.sizes.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &s)| s as u128).product()
    }

    fn set(&mut self, i: usize, e: usize, on: bool) {
        if self.member[i][e] != on {
            self.member[i][e] = on;
            if on {
                self.sizes[i] += 1;
            } else {
                self.sizes[i] -= 1;
            }
        }
    }
}

/// Local search for large `Π |F_i|` over families with no rainbow matching.
///
/// Hill-climbs by single-edge additions in order of product gain (ties broken
/// uniformly at random), perturbs local optima by deleting a random edge and
/// climbing again, and restarts from the empty family after
/// `plateau_limit` perturbations without improvement.
pub fn extremal_search(params: &ExtremalParams) -> Result<ExtremalResult, ExtremalError> {
    let (n, ks) = (params.n, params.ks.as_slice());
    if ks.is_empty() || ks.len() > 3 {
        return Err(ExtremalError::Guard("need 1 <= t <= 3"));
    }
    if n == 0 || n > 8 {
        return Err(ExtremalError::Guard("need 1 <= n <= 8"));
    }
    if ks.iter().any(|&k| k == 0 || k > 3 || k > n as usize) {
        return Err(ExtremalError::Guard("need 1 <= k_i <= min(3, n)"));
    }
    let t = ks.len();
    let pool: Vec<Vec<Edge>> = ks
        .iter()
        .map(|&k| Combinations::new(n, k).map(|e| Edge::new(e).expect("valid")).collect())
        .collect();
    let mut rng = crate::rng::rng(params.seed);
    let cfg = SolverConfig::default();
    let mut steps = 0u64;
    let mut restarts = 0u64;

    let mut state = State { n, ks, pool: &pool, member: pool.iter().map(|p| vec![false; p.len()]).collect(), sizes: vec![0; t] };
    let mut best_members = state.member.clone();
    let mut best_sizes = state.sizes.clone();
    let mut best_product = 0u128;

    // returns false when the budget ran out mid-climb
    let climb = |state: &mut State, rng: &mut crate::rng::Rng, steps: &mut u64| -> bool {
        loop {
            let mut moves: Vec<(u128, u64, usize, usize)> = Vec::new();
            for (i, on) in state.member.iter().enumerate() {
                let g = state.gain(i);
                for (e, _) in on.iter().enumerate().filter(|(_, &b)| !b) {
                    moves.push((g, rng.random(), i, e));
                }
            }
            // highest gain first, random order among equal gains
            moves.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut moved = false;
            for (_, _, i, e) in moves {
                if *steps >= params.budget {
                    return false;
                }
                *steps += 1;
                state.set(i, e, true);
                if find_rainbow(&state.family(), &cfg).verdict == Verdict::NoMatching {
                    moved = true;
                    break;
                }
                state.set(i, e, false);
            }
            if !moved {
                return true;
            }
        }
    };

    'outer: while steps < params.budget {
        for m in state.member.iter_mut() {
            m.iter_mut().for_each(|b| *b = false);
        }
        state.sizes.iter_mut().for_each(|s| *s = 0);
        if !climb(&mut state, &mut rng, &mut steps) {
            break;
        }
        let mut local = state.product();
        let mut stale = 0;
        loop {
            if local > best_product || (best_product == 0 && state.sizes.iter().sum::<usize>() > best_sizes.iter().sum()) {
                best_product = local;
                best_members = state.member.clone();
                best_sizes = state.sizes.clone();
            }
            if stale >= params.plateau_limit {
                break;
            }
            let filled: Vec<(usize, usize)> = (0..t)
                .flat_map(|i| (0..pool[i].len()).map(move |e| (i, e)))
                .filter(|&(i, e)| state.member[i][e])
                .collect();
            let Some(&(i, e)) = filled.choose(&mut rng) else { break };
            let saved = (state.member.clone(), state.sizes.clone());
            state.set(i, e, false);
            let finished = climb(&mut state, &mut rng, &mut steps);
            let p = state.product();
            if p > local {
                local = p;
                stale = 0;
            } else if p == local {
                stale += 1;
            } else {
                state.member = saved.0;
                state.sizes = saved.1;
                stale += 1;
            }
            if !finished {
                if p > best_product {
                    best_members = state.member.clone();
                    best_sizes = state.sizes.clone();
                }
                break 'outer;
            }
        }
        restarts += 1;
    }

    state.member = best_members;
    state.sizes = best_sizes;
    let family = state.family();
    let solver_confirmed = find_rainbow(&family, &cfg).verdict == Verdict::NoMatching;
    let brute_force_confirmed = brute_force_rainbow(&family).ok().map(|r| r.is_none());
    Ok(ExtremalResult {
        product: state.product(),
        family,
        steps,
        restarts,
        budget_exhausted: steps >= params.budget,
        solver_confirmed,
        brute_force_confirmed,
    })
}
