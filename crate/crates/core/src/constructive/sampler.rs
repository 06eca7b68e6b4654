use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::ConstructiveError;
use crate::hypergraph::{Edge, Family, PartiteStructure, VertexId};
use crate::matching::{Pick, RainbowMatching};

/// A permutation of the vertex set that maps every part onto itself, stored
/// as one permutation of positions per part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartPermutation {
    structure: PartiteStructure,
    /// `positions[p][j]` is the 0-based image of position `j + 1` in part `p + 1`.
    positions: Vec<Vec<u32>>,
}

impl PartPermutation {
    /// `k` independent uniform shuffles, which is uniform over all
    /// part-preserving permutations.
    pub fn sample(structure: PartiteStructure, rng: &mut crate::rng::Rng) -> Self {
        let positions = (0..structure.parts())
            .map(|_| {
                let mut perm: Vec<u32> = (0..structure.part_size()).collect();
                perm.shuffle(rng);
                perm
            })
            .collect();
        PartPermutation { structure, positions }
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        let p = self.structure.part_of(v);
        let q = self.structure.position(v);
        self.structure.vertex(p, self.positions[p as usize - 1][q as usize - 1] + 1)
    }

    /// Image of the `i`-th block `{(i − 1)k + 1, ..., ik}`, 1-based `i`.
    pub fn block(&self, i: u32) -> Edge {
        let k = self.structure.parts();
        Edge::new((1..=k).map(|p| self.apply(self.structure.vertex(p, i)).get())).expect("distinct parts")
    }

    pub fn preserves_parts(&self) -> bool {
        (1..=self.structure.universe()).map(VertexId).all(|v| self.structure.part_of(self.apply(v)) == self.structure.part_of(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertifyOutcome {
    /// `indices` are the first `t` members (0-based, ascending) whose block
    /// was an edge in trial `trial`. Picks in `matching` index into `indices`.
    Found { trial: u64, indices: Vec<usize>, matching: RainbowMatching },
    Exhausted { trials: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certification {
    pub outcome: CertifyOutcome,
    /// Whether every `|F_i| > (t − 1)·n^(k − 1)`. The sampler runs either way.
    pub hypothesis_holds: bool,
}

pub fn default_max_trials(t: usize) -> u64 {
    64 * t as u64
}

fn structure_of(family: &Family) -> Result<PartiteStructure, ConstructiveError> {
    let p = *family.partite().ok_or(ConstructiveError::InvalidInput("members must be partite"))?;
    if family.len() != p.part_size() as usize {
        return Err(ConstructiveError::InvalidInput("need exactly n members"));
    }
    if family.members().iter().any(|m| m.uniformity() != p.parts() as usize) {
        return Err(ConstructiveError::InvalidInput("members must be k-uniform on all k parts"));
    }
    Ok(p)
}

fn indicators(family: &Family, pi: &PartPermutation) -> Vec<bool> {
    (0..family.len()).map(|i| family.member(i).contains(&pi.block(i as u32 + 1))).collect()
}

/// `X_i` for trial `trial`: whether block `i` of the sampled permutation is an
/// edge of `F_i`.
pub fn sample_indicators(family: &Family, seed: u64, trial: u64) -> Result<Vec<bool>, ConstructiveError> {
    let p = structure_of(family)?;
    let pi = PartPermutation::sample(p, &mut crate::rng::stream(seed, trial));
    Ok(indicators(family, &pi))
}

/// Randomized certificate for `t` of the `n` members of a family of
/// `k`-partite `k`-graphs with parts of size `n`.
///
/// Each trial samples a part-preserving permutation from its own stream
/// `(seed, trial)` and succeeds once `t` blocks land in their members.
/// `Exhausted` says nothing about existence.
pub fn random_permutation_certify(
    family: &Family,
    t: usize,
    max_trials: u64,
    seed: u64,
) -> Result<Certification, ConstructiveError> {
    let p = structure_of(family)?;
    if t == 0 || t > family.len() {
        return Err(ConstructiveError::InvalidInput("need 1 <= t <= n"));
    }
    let bound = crate::threshold::partite(p.part_size() as u64, p.parts(), t as u64)
        .map_err(|_| crate::binomial::Overflow)?;
    let hypothesis_holds = family.members().iter().all(|m| m.len() as u128 > bound);

    for trial in 0..max_trials {
        let pi = PartPermutation::sample(p, &mut crate::rng::stream(seed, trial));
        assert!(pi.preserves_parts(), "sampled permutation moves a vertex across parts");
        let blocks: Vec<Edge> = (1..=family.len() as u32).map(|i| pi.block(i)).collect();
        let mut seen = alloc::vec![false; p.universe() as usize + 1];
        for v in blocks.iter().flat_map(|b| b.vertices()) {
            assert!(!core::mem::replace(&mut seen[v.get() as usize], true), "blocks overlap");
        }
        let indices: Vec<usize> =
            (0..family.len()).filter(|&i| family.member(i).contains(&blocks[i])).take(t).collect();
        if indices.len() == t {
            let picks = indices.iter().enumerate().map(|(j, &i)| Pick { family: j, edge: blocks[i].clone() }).collect();
            let outcome = CertifyOutcome::Found { trial, indices, matching: RainbowMatching::new(picks) };
            return Ok(Certification { outcome, hypothesis_holds });
        }
    }
    Ok(Certification { outcome: CertifyOutcome::Exhausted { trials: max_trials }, hypothesis_holds })
}
