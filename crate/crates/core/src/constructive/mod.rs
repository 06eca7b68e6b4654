//! Constructive algorithms for rainbow matchings in partite families.
//!
//! These follow existence arguments step by step instead of searching:
//!
//! - [`bipartite_greedy`]: for `t` bipartite members with more than
//!   `(t − 1)·n` edges each, choose high-degree vertices forwards, then edges
//!   backwards.
//! - [`partite_recursive`]: for `r`-partite members with more than
//!   `(t − 1)·n^(r − 1)` edges each and `n ≥ 3(k − 1)(t − 1)`, recurse on
//!   links of distinct high-degree vertices or on fewer members.
//! - [`random_permutation_certify`]: sample part-preserving permutations and
//!   read off `n` disjoint blocks, one candidate edge per member.
//!
//! Each algorithm reports [`ConstructiveError::HypothesisViolated`] when a
//! step has no valid choice; with the size hypotheses satisfied this never
//! happens.

mod greedy;
mod recursive;
mod sampler;
mod sdr;

pub use greedy::{bipartite_greedy, verify_greedy_trace, GreedyOutput, GreedyTrace};
pub use recursive::{
    partite_hypothesis, partite_recursive, verify_recursion_trace, CaseTag, RecursionEvent, RecursiveOutput,
};
pub use sampler::{
    default_max_trials, random_permutation_certify, sample_indicators, CertifyOutcome, Certification,
    PartPermutation,
};
pub use sdr::distinct_representatives;

use core::fmt;

/// The step of a constructive algorithm that found no valid choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    /// Forward phase of the bipartite greedy: no vertex of large residual degree.
    VertexSelection,
    /// Backward phase of the bipartite greedy: no edge through the chosen vertex.
    EdgeSelection,
    /// A single remaining member is empty.
    BaseSingle,
    /// No edge of the last member avoids the partial matching.
    ExtendDisjoint,
    /// No edge through the high-degree vertex avoids the partial matching.
    HighDegreeVertex,
    /// High-degree vertex sets admit no distinct representatives.
    LinkSelection,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::VertexSelection => "vertex-selection",
            Stage::EdgeSelection => "edge-selection",
            Stage::BaseSingle => "base-single",
            Stage::ExtendDisjoint => "extend-disjoint",
            Stage::HighDegreeVertex => "high-degree-vertex",
            Stage::LinkSelection => "link-selection",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructiveError {
    #[error("input does not fit the algorithm: {0}")]
    InvalidInput(&'static str),
    /// `step` is 1-based within the stage's loop; `depth` is the recursion depth.
    #[error("no valid choice at {stage} step {step} (depth {depth})")]
    HypothesisViolated { stage: Stage, step: usize, depth: usize },
    #[error(transparent)]
    Overflow(#[from] crate::binomial::Overflow),
}

/// A recorded trace disagrees with the input it claims to describe.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("trace entry {entry}: {what}")]
pub struct TraceDefect {
    pub entry: usize,
    pub what: &'static str,
}
