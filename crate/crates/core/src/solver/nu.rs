use alloc::vec;
use alloc::vec::Vec;

use super::SolverConfig;
use crate::bitset::{with_packing, Packing};
use crate::hypergraph::{Edge, Hypergraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuValue {
    Exact(usize),
    /// Budget ran out; `lower ≤ ν ≤ upper`.
    Bounds { lower: usize, upper: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuOutcome {
    pub value: NuValue,
    /// A largest matching found (size `lower` or the exact value).
    pub witness: Vec<Edge>,
    pub nodes: u64,
}

/// The matching number `ν(H)`: the maximum number of pairwise disjoint edges.
///
/// Branch and bound: pick the vertex of smallest positive degree in the
/// residual graph, then either take one of its edges or delete the vertex.
/// The bound is `min(#edges, ⌊#active vertices / k⌋)`.
pub fn matching_number(h: &Hypergraph, cfg: &SolverConfig) -> NuOutcome {
    if h.uniformity() == 0 {
        // only the empty edge is possible and it is disjoint from nothing else
        let witness: Vec<Edge> = h.edges().to_vec();
        return NuOutcome { value: NuValue::Exact(witness.len()), witness, nodes: 0 };
    }
    with_packing!(h.universe(), P => run::<P>(h, cfg))
}

struct Bnb<P: Packing> {
    edges: Vec<P::Edge>,
    k: usize,
    universe: u32,
    blocked: P::Used,
    stack: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
    degree: Vec<u32>,
}

fn run<P: Packing>(h: &Hypergraph, cfg: &SolverConfig) -> NuOutcome {
    let universe = h.universe();
    let edges: Vec<P::Edge> = h.edges().iter().map(|e| P::edge(universe, e)).collect();

    // greedy lexicographic matching as the initial incumbent
    let mut used = P::used(universe);
    let mut best = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        if !P::hits(e, &used) {
            P::occupy(e, &mut used);
            best.push(i);
        }
    }

    let mut s = Bnb::<P> {
        edges,
        k: h.uniformity(),
        universe,
        blocked: P::used(universe),
        stack: Vec::new(),
        best,
        nodes: 0,
        budget: cfg.node_budget.unwrap_or(u64::MAX),
        exhausted: false,
        degree: vec![0; universe as usize],
    };
    let root_upper = s.upper_bound();
    s.dfs();
    let lower = s.best.len();
    let value = if s.exhausted {
        NuValue::Bounds { lower, upper: root_upper.max(lower) }
    } else {
        NuValue::Exact(lower)
    };
    let witness = s.best.iter().map(|&i| h.edge(i).clone()).collect();
    NuOutcome { value, witness, nodes: s.nodes }
}

impl<P: Packing> Bnb<P> {
    fn upper_bound(&mut self) -> usize {
        self.degree.iter_mut().for_each(|d| *d = 0);
        let mut avail = 0;
        for e in &self.edges {
            if !P::hits(e, &self.blocked) {
                avail += 1;
                P::for_each_vertex(e, |v| self.degree[v as usize] += 1);
            }
        }
        let active = self.degree.iter().filter(|&&d| d > 0).count();
        avail.min(active / self.k)
    }

    fn dfs(&mut self) {
        if self.exhausted {
            return;
        }
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;
        let cur = self.stack.len();
        if cur > self.best.len() {
            self.best = self.stack.clone();
        }
        let ub = self.upper_bound();
        if ub == 0 || cur + ub <= self.best.len() {
            return;
        }
        // vertex of minimum positive residual degree; degrees are fresh from upper_bound
        let (mut pivot, mut pivot_deg) = (u32::MAX, u32::MAX);
        for v in 0..self.universe {
            let d = self.degree[v as usize];
            if d > 0 && d < pivot_deg {
                pivot = v;
                pivot_deg = d;
            }
        }
        let through: Vec<usize> = (0..self.edges.len())
            .filter(|&i| {
                let e = &self.edges[i];
                if P::hits(e, &self.blocked) {
                    return false;
                }
                let mut has = false;
                P::for_each_vertex(e, |v| has |= v == pivot);
                has
            })
            .collect();
        for i in through {
            let e = self.edges[i].clone();
            P::occupy(&e, &mut self.blocked);
            self.stack.push(i);
            self.dfs();
            self.stack.pop();
            P::release(&e, &mut self.blocked);
            if self.exhausted {
                return;
            }
        }
        P::set_used(pivot, &mut self.blocked, true);
        self.dfs();
        P::set_used(pivot, &mut self.blocked, false);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinations::Combinations;
    use crate::hypergraph::PartiteStructure;

    fn complete(n: u32, k: usize) -> Hypergraph {
        Hypergraph::from_lists(n, k, Combinations::new(n, k), None).unwrap()
    }

    fn exact(h: &Hypergraph) -> usize {
        match matching_number(h, &SolverConfig::default()).value {
            NuValue::Exact(v) => v,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn examples() {
        assert_eq!(exact(&complete(5, 2)), 2);
        let star = Hypergraph::from_lists(4, 2, [vec![1, 2], vec![1, 3], vec![1, 4]], None).unwrap();
        assert_eq!(exact(&star), 1);
        let p = PartiteStructure::new(2, 3).unwrap();
        let mut lists = Vec::new();
        for a in p.part_vertices(1) {
            for b in p.part_vertices(2) {
                lists.push(vec![a.get(), b.get()]);
            }
        }
        assert_eq!(exact(&Hypergraph::from_lists(6, 2, lists, Some(p)).unwrap()), 3);
        assert_eq!(exact(&Hypergraph::empty(4, 2, None)), 0);
        assert_eq!(exact(&complete(9, 3)), 3);
        assert_eq!(exact(&complete(8, 3)), 2);
    }

    #[test]
    fn witness_is_a_matching() {
        let h = complete(7, 3);
        let out = matching_number(&h, &SolverConfig::default());
        assert_eq!(out.value, NuValue::Exact(2));
        assert_eq!(out.witness.len(), 2);
        assert!(out.witness[0].is_disjoint(&out.witness[1]));
    }

    #[test]
    fn budget_yields_bounds() {
        let h = complete(12, 3);
        let out = matching_number(&h, &SolverConfig::with_budget(1));
        match out.value {
            NuValue::Bounds { lower, upper } => {
                assert!(lower <= 4 && 4 <= upper);
            }
            NuValue::Exact(v) => assert_eq!(v, 4),
        }
    }
}
