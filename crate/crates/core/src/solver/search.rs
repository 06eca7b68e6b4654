use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::{OrderHeuristic, SearchOutcome, SolverConfig, Verdict};
use crate::bitset::{with_packing, Packing};
use crate::hypergraph::Family;
use crate::matching::{Pick, RainbowMatching};

/// Decides whether `family` admits a rainbow matching.
///
/// Backtracks over members, keeping the set of used vertices. Before
/// descending it checks that every unassigned member still has an edge
/// avoiding that set. A returned matching always passes
/// [`validate_rainbow`](crate::validate_rainbow); [`Verdict::NoMatching`]
/// is only reported after the whole tree has been refuted.
pub fn find_rainbow(family: &Family, cfg: &SolverConfig) -> SearchOutcome {
    with_packing!(family.universe(), P => run::<P>(family, cfg))
}

enum Step {
    Found,
    Dead,
    Budget,
}

struct Search<P: Packing> {
    edges: Vec<Vec<P::Edge>>,
    /// Static member order, or tie ranks for the dynamic heuristic.
    rank: Vec<u64>,
    dynamic: bool,
    used: P::Used,
    chosen: Vec<usize>,
    open: Vec<usize>,
    nodes: u64,
    budget: u64,
    scratch: Vec<Vec<usize>>,
}

fn run<P: Packing>(family: &Family, cfg: &SolverConfig) -> SearchOutcome {
    let universe = family.universe();
    let t = family.len();
    let edges: Vec<Vec<P::Edge>> = family
        .members()
        .iter()
        .map(|m| m.edges().iter().map(|e| P::edge(universe, e)).collect())
        .collect();
    let mut rng = crate::rng::rng(cfg.seed);
    let ties: Vec<u64> = (0..t).map(|_| rng.random()).collect();
    let rank: Vec<u64> = match cfg.order {
        OrderHeuristic::InputOrder => (0..t as u64).collect(),
        OrderHeuristic::SmallestFamilyFirst => {
            let mut idx: Vec<usize> = (0..t).collect();
            idx.sort_by_key(|&i| (family.member(i).len(), ties[i], i));
            let mut rank = vec![0; t];
            for (pos, &i) in idx.iter().enumerate() {
                rank[i] = pos as u64;
            }
            rank
        }
        OrderHeuristic::MinDegreeVertex => ties,
    };
    let mut s = Search::<P> {
        edges,
        rank,
        dynamic: cfg.order == OrderHeuristic::MinDegreeVertex,
        used: P::used(universe),
        chosen: vec![usize::MAX; t],
        open: (0..t).collect(),
        nodes: 0,
        budget: cfg.node_budget.unwrap_or(u64::MAX),
        scratch: vec![Vec::new(); t + 1],
    };
    let verdict = match s.dfs(0) {
        Step::Found => {
            let picks = s
                .chosen
                .iter()
                .enumerate()
                .map(|(i, &e)| Pick { family: i, edge: family.member(i).edge(e).clone() })
                .collect();
            Verdict::Found(RainbowMatching::new(picks))
        }
        Step::Dead => Verdict::NoMatching,
        Step::Budget => Verdict::BudgetExceeded,
    };
    SearchOutcome { verdict, nodes: s.nodes }
}

impl<P: Packing> Search<P> {
    fn dfs(&mut self, depth: usize) -> Step {
        if self.open.is_empty() {
            return Step::Found;
        }
        if self.nodes >= self.budget {
            return Step::Budget;
        }
        self.nodes += 1;

        // pick the member to branch on; bail out if some member is blocked
        let mut pick_pos = 0;
        let mut pick_key = (usize::MAX, u64::MAX);
        for (pos, &m) in self.open.iter().enumerate() {
            let key = if self.dynamic {
                let avail = self.edges[m].iter().filter(|e| !P::hits(e, &self.used)).count();
                if avail == 0 {
                    return Step::Dead;
                }
                (avail, self.rank[m])
            } else {
                if !self.edges[m].iter().any(|e| !P::hits(e, &self.used)) {
                    return Step::Dead;
                }
                (0, self.rank[m])
            };
            if key < pick_key {
                pick_key = key;
                pick_pos = pos;
            }
        }
        let member = self.open.swap_remove(pick_pos);

        let mut candidates = core::mem::take(&mut self.scratch[depth]);
        candidates.clear();
        candidates.extend((0..self.edges[member].len()).filter(|&i| !P::hits(&self.edges[member][i], &self.used)));

        let mut result = Step::Dead;
        for &i in &candidates {
            let e = self.edges[member][i].clone();
            P::occupy(&e, &mut self.used);
            self.chosen[member] = i;
            let step = self.dfs(depth + 1);
            P::release(&e, &mut self.used);
            match step {
                Step::Dead => continue,
                other => {
                    result = other;
                    break;
                }
            }
        }
        self.scratch[depth] = candidates;
        if !matches!(result, Step::Found) {
            self.chosen[member] = usize::MAX;
        }
        // restore open set (order of `open` is irrelevant to the verdict)
        self.open.push(member);
        let last = self.open.len() - 1;
        self.open.swap(pick_pos, last);
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinations::Combinations;
    use crate::hypergraph::{Hypergraph, PartiteStructure};
    use crate::matching::validate_rainbow;

    fn star(n: u32, k: usize, c: u32) -> Hypergraph {
        Hypergraph::from_lists(n, k, Combinations::new(n, k).filter(|e| e.contains(&c)), None).unwrap()
    }

    fn all_heuristics() -> [SolverConfig; 3] {
        [OrderHeuristic::InputOrder, OrderHeuristic::SmallestFamilyFirst, OrderHeuristic::MinDegreeVertex]
            .map(|order| SolverConfig { order, seed: 11, ..Default::default() })
    }

    #[test]
    fn two_stars_at_one_vertex_have_no_matching() {
        let f = Family::repeated(star(4, 2, 1), 2).unwrap();
        for cfg in all_heuristics() {
            assert_eq!(find_rainbow(&f, &cfg).verdict, Verdict::NoMatching);
        }
    }

    #[test]
    fn unique_disjoint_pair_is_found() {
        let f = Family::new(vec![
            Hypergraph::from_lists(4, 2, [vec![1, 2], vec![3, 4]], None).unwrap(),
            Hypergraph::from_lists(4, 2, [vec![3, 4], vec![1, 3]], None).unwrap(),
        ])
        .unwrap();
        for cfg in all_heuristics() {
            let out = find_rainbow(&f, &cfg);
            let m = out.verdict.matching().expect("matching");
            assert_eq!(validate_rainbow(&f, m), Ok(()));
            assert_eq!(m.edge_for(0).unwrap().raw().collect::<Vec<_>>(), [1, 2]);
            assert_eq!(m.edge_for(1).unwrap().raw().collect::<Vec<_>>(), [3, 4]);
        }
    }

    #[test]
    fn partite_threshold_pair_has_no_matching() {
        // all 3 edges meeting vertex 1 in the 2-partite structure with n = 3
        let p = PartiteStructure::new(2, 3).unwrap();
        let h = Hypergraph::from_lists(6, 2, [vec![1, 2], vec![1, 4], vec![1, 6]], Some(p)).unwrap();
        let f = Family::repeated(h, 2).unwrap();
        // brute force over the 9 pairs
        let pairs = f.member(0).edges().iter().flat_map(|a| f.member(1).edges().iter().map(move |b| (a, b)));
        assert_eq!(pairs.filter(|(a, b)| a.is_disjoint(b)).count(), 0);
        assert_eq!(find_rainbow(&f, &SolverConfig::default()).verdict, Verdict::NoMatching);
    }

    #[test]
    fn budget_is_reported_separately() {
        let f = Family::repeated(star(8, 3, 1), 3).unwrap();
        let out = find_rainbow(&f, &SolverConfig::with_budget(0));
        assert_eq!(out.verdict, Verdict::BudgetExceeded);
        let out = find_rainbow(&f, &SolverConfig::with_budget(1_000_000));
        assert_eq!(out.verdict, Verdict::NoMatching);
    }

    #[test]
    fn empty_member_refutes() {
        let f = Family::new(vec![star(5, 2, 1), Hypergraph::empty(5, 2, None)]).unwrap();
        assert_eq!(find_rainbow(&f, &SolverConfig::default()).verdict, Verdict::NoMatching);
    }

    #[test]
    fn large_universe_uses_sparse_packing() {
        let n = 600;
        let a = Hypergraph::from_lists(n, 2, [vec![1, 600], vec![2, 3]], None).unwrap();
        let b = Hypergraph::from_lists(n, 2, [vec![600, 599]], None).unwrap();
        let f = Family::new(vec![a, b]).unwrap();
        let out = find_rainbow(&f, &SolverConfig::default());
        let m = out.verdict.matching().unwrap();
        assert_eq!(validate_rainbow(&f, m), Ok(()));
        assert_eq!(m.edge_for(0).unwrap().raw().collect::<Vec<_>>(), [2, 3]);
    }
}
