//! Packed vertex sets for the search kernels.
//!
//! Universes of at most 512 vertices use fixed-width word arrays for both
//! edges and the used-vertex set, so a disjointness test is a handful of word
//! ANDs. Larger universes keep edges as sorted vertex lists and test them
//! against a dense used-vertex bitmap.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::hypergraph::Edge;

pub(crate) trait Packing {
    type Edge: Clone;
    type Used: Clone;

    fn used(universe: u32) -> Self::Used;
    fn edge(universe: u32, e: &Edge) -> Self::Edge;
    fn hits(e: &Self::Edge, used: &Self::Used) -> bool;
    fn occupy(e: &Self::Edge, used: &mut Self::Used);
    fn release(e: &Self::Edge, used: &mut Self::Used);
    /// 0-based vertex.
    fn is_used(v: u32, used: &Self::Used) -> bool;
    fn set_used(v: u32, used: &mut Self::Used, on: bool);
    /// 0-based vertices of a packed edge.
    fn for_each_vertex(e: &Self::Edge, f: impl FnMut(u32));
}

pub(crate) struct Fixed<const W: usize>;

impl<const W: usize> Packing for Fixed<W> {
    type Edge = [u64; W];
    type Used = [u64; W];

    fn used(universe: u32) -> [u64; W] {
        debug_assert!(universe as usize <= 64 * W);
        [0; W]
    }

    fn edge(_universe: u32, e: &Edge) -> [u64; W] {
        let mut m = [0u64; W];
        for v in e.vertices() {
            let i = v.get() as usize - 1;
            m[i / 64] |= 1 << (i % 64);
        }
        m
    }

    #[inline]
    fn hits(e: &[u64; W], used: &[u64; W]) -> bool {
        e.iter().zip(used).any(|(a, b)| a & b != 0)
    }

    #[inline]
    fn occupy(e: &[u64; W], used: &mut [u64; W]) {
        for (u, a) in used.iter_mut().zip(e) {
            *u |= a;
        }
    }

    #[inline]
    fn release(e: &[u64; W], used: &mut [u64; W]) {
        for (u, a) in used.iter_mut().zip(e) {
            *u &= !a;
        }
    }

    #[inline]
    fn is_used(v: u32, used: &[u64; W]) -> bool {
        used[v as usize / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    fn set_used(v: u32, used: &mut [u64; W], on: bool) {
        let (w, b) = (v as usize / 64, v % 64);
        if on {
            used[w] |= 1 << b;
        } else {
            used[w] &= !(1 << b);
        }
    }

    fn for_each_vertex(e: &[u64; W], mut f: impl FnMut(u32)) {
        for (w, &word) in e.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros();
                f(w as u32 * 64 + b);
                bits &= bits - 1;
            }
        }
    }
}

pub(crate) struct Sparse;

impl Packing for Sparse {
    type Edge = Box<[u32]>;
    type Used = Vec<u64>;

    fn used(universe: u32) -> Vec<u64> {
        vec![0; (universe as usize).div_ceil(64)]
    }

    fn edge(_universe: u32, e: &Edge) -> Box<[u32]> {
        e.vertices().iter().map(|v| v.get() - 1).collect()
    }

    #[inline]
    fn hits(e: &Box<[u32]>, used: &Vec<u64>) -> bool {
        e.iter().any(|&v| Self::is_used(v, used))
    }

    fn occupy(e: &Box<[u32]>, used: &mut Vec<u64>) {
        for &v in e.iter() {
            Self::set_used(v, used, true);
        }
    }

    fn release(e: &Box<[u32]>, used: &mut Vec<u64>) {
        for &v in e.iter() {
            Self::set_used(v, used, false);
        }
    }

    #[inline]
    fn is_used(v: u32, used: &Vec<u64>) -> bool {
        used[v as usize / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    fn set_used(v: u32, used: &mut Vec<u64>, on: bool) {
        let (w, b) = (v as usize / 64, v % 64);
        if on {
            used[w] |= 1 << b;
        } else {
            used[w] &= !(1 << b);
        }
    }

    fn for_each_vertex(e: &Box<[u32]>, mut f: impl FnMut(u32)) {
        for &v in e.iter() {
            f(v);
        }
    }
}

/// Runs `$body` with `$P` bound to the packing suited to `$universe`.
macro_rules! with_packing {
    ($universe:expr, $P:ident => $body:expr) => {{
        let u = $universe;
        if u <= 64 {
            type $P = $crate::bitset::Fixed<1>;
            $body
        } else if u <= 128 {
            type $P = $crate::bitset::Fixed<2>;
            $body
        } else if u <= 256 {
            type $P = $crate::bitset::Fixed<4>;
            $body
        } else if u <= 512 {
            type $P = $crate::bitset::Fixed<8>;
            $body
        } else {
            type $P = $crate::bitset::Sparse;
            $body
        }
    }};
}
pub(crate) use with_packing;

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip<P: Packing>(universe: u32) {
        let a = Edge::new([1, 64, 65, universe]).unwrap();
        let b = Edge::new([2, 63, universe - 1]).unwrap();
        let c = Edge::new([3, 65]).unwrap();
        let (pa, pb, pc) = (P::edge(universe, &a), P::edge(universe, &b), P::edge(universe, &c));
        let mut used = P::used(universe);
        P::occupy(&pa, &mut used);
        assert!(!P::hits(&pb, &used));
        assert!(P::hits(&pc, &used));
        P::release(&pa, &mut used);
        assert!(!P::hits(&pc, &used));
        let mut vs = Vec::new();
        P::for_each_vertex(&pa, |v| vs.push(v + 1));
        assert_eq!(vs, [1, 64, 65, universe]);
        P::set_used(63, &mut used, true);
        assert!(P::is_used(63, &used));
        assert!(P::hits(&pa, &used));
    }

    #[test]
    fn packings_agree() {
        roundtrip::<Fixed<2>>(128);
        roundtrip::<Fixed<8>>(500);
        roundtrip::<Sparse>(1000);
        roundtrip::<Sparse>(128);
    }
}
