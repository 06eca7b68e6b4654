use alloc::vec;
use alloc::vec::Vec;

use crate::hypergraph::VertexId;

/// A system of distinct representatives: `rep[i] ∈ sets[i]`, pairwise
/// distinct. Augmenting-path bipartite matching, trying candidates in the
/// given order, so the result is deterministic.
pub fn distinct_representatives(sets: &[Vec<VertexId>]) -> Option<Vec<VertexId>> {
    let mut verts: Vec<VertexId> = sets.iter().flatten().copied().collect();
    verts.sort_unstable();
    verts.dedup();
    let slot = |v: VertexId| verts.binary_search(&v).expect("present");
    let adj: Vec<Vec<usize>> = sets.iter().map(|s| s.iter().map(|&v| slot(v)).collect()).collect();
    let mut owner = vec![usize::MAX; verts.len()];

    fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [usize], seen: &mut [bool]) -> bool {
        for &v in &adj[i] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v] == usize::MAX || augment(owner[v], adj, owner, seen) {
                owner[v] = i;
                return true;
            }
        }
        false
    }

    for i in 0..sets.len() {
        let mut seen = vec![false; verts.len()];
        if !augment(i, &adj, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut rep = vec![VertexId(0); sets.len()];
    for (v, &i) in owner.iter().enumerate() {
        if i != usize::MAX {
            rep[i] = verts[v];
        }
    }
    Some(rep)
}
