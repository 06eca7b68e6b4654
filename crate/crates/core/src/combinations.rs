//! Lexicographic enumeration, ranking and unranking of k-subsets of `[n]`.
//!
//! Subsets are strictly increasing sequences of 1-based elements. Rank 0 is
//! `{1, ..., k}` and rank `C(n, k) - 1` is `{n - k + 1, ..., n}`.

use alloc::vec::Vec;

use crate::binomial::{binomial, Overflow};

/// Iterator over the k-subsets of `[n]` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: u32,
    current: Option<Vec<u32>>,
}

impl Combinations {
    pub fn new(n: u32, k: usize) -> Self {
        let current = if k as u64 > n as u64 { None } else { Some((1..=k as u32).collect()) };
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.current.as_mut()?;
        let out = cur.clone();
        let k = cur.len();
        // rightmost position that can still move
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            let max_here = self.n - (k - 1 - i) as u32;
            if cur[i] < max_here {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Lexicographic rank of a sorted subset of `[n]`.
pub fn rank(subset: &[u32], n: u32) -> Result<u128, Overflow> {
    let k = subset.len() as u64;
    let mut r: u128 = 0;
    let mut prev = 0u32;
    for (i, &x) in subset.iter().enumerate() {
        for skipped in prev + 1..x {
            r = r
                .checked_add(binomial((n - skipped) as u64, k - i as u64 - 1)?)
                .ok_or(Overflow)?;
        }
        prev = x;
    }
    Ok(r)
}

/// Inverse of [`rank`]. `r` must be below `C(n, k)`.
pub fn unrank(mut r: u128, n: u32, k: usize) -> Result<Vec<u32>, Overflow> {
    let mut out = Vec::with_capacity(k);
    let mut x = 1u32;
    for i in 0..k {
        loop {
            let block = binomial((n - x) as u64, (k - i - 1) as u64)?;
            if r < block {
                out.push(x);
                x += 1;
                break;
            }
            r -= block;
            x += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enumerates_in_lex_order() {
        let all: Vec<Vec<u32>> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]].map(|a| a.to_vec()).to_vec()
        );
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(9, 4).count(), 126);
    }

    #[test]
    fn rank_matches_enumeration_position() {
        for (pos, s) in Combinations::new(8, 3).enumerate() {
            assert_eq!(rank(&s, 8).unwrap(), pos as u128);
            assert_eq!(unrank(pos as u128, 8, 3).unwrap(), s);
        }
    }

    proptest! {
        #[test]
        fn unrank_then_rank_is_identity(n in 1u32..30, kk in 0usize..30, seed in any::<u64>()) {
            let k = kk % (n as usize + 1);
            let total = binomial(n as u64, k as u64).unwrap();
            let r = (seed as u128) % total;
            let s = unrank(r, n, k).unwrap();
            prop_assert_eq!(s.len(), k);
            prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(rank(&s, n).unwrap(), r);
        }
    }
}
