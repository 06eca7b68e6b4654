use alloc::vec::Vec;

use super::{ConstructiveError, Stage, TraceDefect};
use crate::hypergraph::{Edge, Family, Hypergraph, VertexId};
use crate::matching::{Pick, RainbowMatching};

/// Record of one run of [`bipartite_greedy`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GreedyTrace {
    /// `x_s` with its degree in `F_s − {x_1, ..., x_(s−1)}` at selection time.
    pub chosen_vertices: Vec<(VertexId, usize)>,
    /// Edges in selection order: `e_t` first, `e_1` last.
    pub chosen_edges: Vec<Pick>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOutput {
    pub matching: RainbowMatching,
    pub trace: GreedyTrace,
}

/// Two-phase greedy for `t` bipartite members `F_i ⊂ U_a × U_b`.
///
/// Forward: for `s = 1..t` take `x_s` of maximum degree in `F_s − X_(s−1)`
/// (lowest id on ties) and require that degree to be at least `t − s + 1`.
/// Backward: for `s = t..1` take the lexicographically first edge of `F_s`
/// through `x_s` that avoids `X_(s−1)` and the edges already chosen. With
/// `|F_i| > (t − 1)·n` and `n > t` both phases always succeed.
pub fn bipartite_greedy(family: &Family) -> Result<GreedyOutput, ConstructiveError> {
    let p = family.partite().ok_or(ConstructiveError::InvalidInput("members must be partite"))?;
    for m in family.members() {
        if m.uniformity() != 2 {
            return Err(ConstructiveError::InvalidInput("members must be 2-uniform"));
        }
        let mut parts: Vec<u32> = m.edges().iter().flat_map(|e| p.parts_of(e.vertices())).collect();
        parts.sort_unstable();
        parts.dedup();
        if parts.len() > 2 {
            return Err(ConstructiveError::InvalidInput("each member must live on two parts"));
        }
    }
    let members: Vec<&Hypergraph> = family.members().iter().collect();
    let (edges, trace) = run(&members, 0)?;
    Ok(GreedyOutput { matching: RainbowMatching::from_ordered_edges(edges), trace })
}

/// Engine shared with the recursive algorithm. Returns `e_1..e_t` in member
/// order; picks in the trace index into `members`.
pub(super) fn run(members: &[&Hypergraph], depth: usize) -> Result<(Vec<Edge>, GreedyTrace), ConstructiveError> {
    let t = members.len();
    let mut xs: Vec<VertexId> = Vec::with_capacity(t);
    let mut trace = GreedyTrace::default();
    for (s, f) in members.iter().enumerate() {
        let need = t - s;
        match f.max_residual_degree(&xs) {
            Some((x, d)) if d >= need => {
                xs.push(x);
                trace.chosen_vertices.push((x, d));
            }
            _ => {
                return Err(ConstructiveError::HypothesisViolated { stage: Stage::VertexSelection, step: s + 1, depth })
            }
        }
    }
    let mut chosen: Vec<Option<Edge>> = alloc::vec![None; t];
    for s in (0..t).rev() {
        let f = members[s];
        let x = xs[s];
        let pick = f.incident(x).iter().map(|&id| f.edge(id as usize)).find(|e| {
            xs[..s].iter().all(|y| !e.contains(*y)) && chosen[s + 1..].iter().flatten().all(|c| c.is_disjoint(e))
        });
        match pick {
            Some(e) => {
                trace.chosen_edges.push(Pick { family: s, edge: e.clone() });
                chosen[s] = Some(e.clone());
            }
            None => {
                return Err(ConstructiveError::HypothesisViolated { stage: Stage::EdgeSelection, step: s + 1, depth })
            }
        }
    }
    Ok((chosen.into_iter().map(|e| e.expect("filled")).collect(), trace))
}

/// Re-checks every claim of a [`GreedyTrace`] against the input family.
pub fn verify_greedy_trace(family: &Family, trace: &GreedyTrace) -> Result<(), TraceDefect> {
    let t = family.len();
    if trace.chosen_vertices.len() != t || trace.chosen_edges.len() != t {
        return Err(TraceDefect { entry: 0, what: "trace length differs from the family size" });
    }
    let xs: Vec<VertexId> = trace.chosen_vertices.iter().map(|&(x, _)| x).collect();
    for (s, &(x, claimed)) in trace.chosen_vertices.iter().enumerate() {
        let residual = family
            .member(s)
            .edges()
            .iter()
            .filter(|e| e.contains(x) && xs[..s].iter().all(|y| !e.contains(*y)))
            .count();
        if residual != claimed {
            return Err(TraceDefect { entry: s, what: "recorded residual degree is wrong" });
        }
        if residual < t - s {
            return Err(TraceDefect { entry: s, what: "residual degree below t - s + 1" });
        }
    }
    for (j, pick) in trace.chosen_edges.iter().enumerate() {
        let s = pick.family;
        if s != t - 1 - j {
            return Err(TraceDefect { entry: j, what: "edges not selected from t down to 1" });
        }
        if !family.member(s).contains(&pick.edge) || !pick.edge.contains(xs[s]) {
            return Err(TraceDefect { entry: j, what: "edge is not an edge of its member through x_s" });
        }
        if xs[..s].iter().any(|y| pick.edge.contains(*y)) {
            return Err(TraceDefect { entry: j, what: "edge meets an earlier chosen vertex" });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_partite, partite_threshold, random_partite_family};
    use crate::matching::validate_rainbow;
    use crate::solver::brute_force_rainbow;
    use alloc::vec;

    #[test]
    fn complete_bipartite_pair() {
        let h = complete_partite(2, 3, &[1, 2]).unwrap();
        let f = Family::repeated(h, 2).unwrap();
        let out = bipartite_greedy(&f).unwrap();
        assert_eq!(validate_rainbow(&f, &out.matching), Ok(()));
        assert_eq!(verify_greedy_trace(&f, &out.trace), Ok(()));
        // parts are {1,3,5} and {2,4,6}; removing 1 leaves 3 with full degree
        assert_eq!(out.trace.chosen_vertices, [(VertexId(1), 3), (VertexId(3), 3)]);
    }

    #[test]
    fn random_instances_above_threshold() {
        for seed in 0..200 {
            let f = random_partite_family(3, 2, &[vec![1, 2], vec![1, 2]], &[4, 4], seed).unwrap();
            let out = bipartite_greedy(&f).unwrap();
            assert_eq!(validate_rainbow(&f, &out.matching), Ok(()));
            assert!(brute_force_rainbow(&f).unwrap().is_some());
        }
    }

    #[test]
    fn different_part_pairs() {
        for seed in 0..200 {
            let f = random_partite_family(5, 3, &[vec![1, 2], vec![2, 3], vec![1, 3]], &[11, 11, 11], seed).unwrap();
            let out = bipartite_greedy(&f).unwrap();
            assert_eq!(validate_rainbow(&f, &out.matching), Ok(()));
            assert_eq!(verify_greedy_trace(&f, &out.trace), Ok(()));
        }
    }

    #[test]
    fn tight_family_violates() {
        let h = partite_threshold(3, 2, 2, 1, None).unwrap();
        let f = Family::repeated(h, 2).unwrap();
        assert!(matches!(bipartite_greedy(&f), Err(ConstructiveError::HypothesisViolated { .. })));
    }

    #[test]
    fn rejects_wrong_shapes() {
        let h = complete_partite(3, 2, &[1, 2, 3]).unwrap();
        assert!(matches!(bipartite_greedy(&Family::repeated(h, 2).unwrap()), Err(ConstructiveError::InvalidInput(_))));
        let g = crate::generators::complete(4, 2).unwrap();
        assert!(matches!(bipartite_greedy(&Family::repeated(g, 2).unwrap()), Err(ConstructiveError::InvalidInput(_))));
    }

    #[test]
    fn tampered_trace_is_caught() {
        let h = complete_partite(2, 3, &[1, 2]).unwrap();
        let f = Family::repeated(h, 2).unwrap();
        let mut out = bipartite_greedy(&f).unwrap();
        out.trace.chosen_vertices[1].1 = 2;
        assert!(verify_greedy_trace(&f, &out.trace).is_err());
    }
}
