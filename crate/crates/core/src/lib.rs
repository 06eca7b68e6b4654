//! Rainbow matchings for families of hypergraphs.
//!
//! A *family* `F_1, ..., F_t` of hypergraphs over a common vertex set admits a
//! *rainbow matching* when one can pick pairwise disjoint edges `e_i ∈ F_i`.
//! This crate provides:
//!
//! - the domain types ([`Hypergraph`], [`Family`], [`RainbowMatching`]) with
//!   degree queries and matching validation,
//! - exact closed-form thresholds ([`threshold`]) in checked or big-integer
//!   arithmetic,
//! - exact solvers ([`solver`]): backtracking rainbow search, matching number,
//!   a brute-force oracle and a local-search explorer for extremal families,
//! - constructive algorithms ([`constructive`]) that follow the existence
//!   arguments for k-partite families step by step,
//! - generators ([`generators`]) for the tight constructions and for random
//!   campaign instances.
//!
//! The crate is `no_std` and only needs `alloc`. Vertex ids are 1-based.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod binomial;
pub mod combinations;
pub mod constructive;
pub mod generators;
pub mod hypergraph;
pub mod matching;
pub mod rng;
pub mod solver;
pub mod threshold;

mod bitset;

pub use binomial::{binomial, binomial_big, Overflow};
pub use hypergraph::{Edge, Family, FamilyError, Hypergraph, HypergraphError, PartiteStructure, VertexId};
pub use matching::{validate_rainbow, MatchingDefect, Pick, RainbowMatching};
