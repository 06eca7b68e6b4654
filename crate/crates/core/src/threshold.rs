//! Closed-form size thresholds for rainbow matchings.
//!
//! Each function returns the value a family size (or product of sizes) must
//! strictly exceed. All arithmetic is exact.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::binomial::{binomial, binomial_big, checked_pow, Overflow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ThresholdError {
    #[error("invalid parameters: {0}")]
    Invalid(&'static str),
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

/// `(t − 1)·n^(r − 1)`: member size bound for `t` families of `r`-partite
/// edges on parts of size `n`.
pub fn partite(n: u64, r: u32, t: u64) -> Result<u128, ThresholdError> {
    if n == 0 || r == 0 || t == 0 {
        return Err(ThresholdError::Invalid("n, r and t must be positive"));
    }
    Ok(((t - 1) as u128).checked_mul(checked_pow(n, r - 1)?).ok_or(Overflow)?)
}

/// `C(n, k) − C(n − t + 1, k)`: the number of `k`-subsets of `[n]` meeting a
/// fixed `(t − 1)`-set.
pub fn cover(n: u64, k: u64, t: u64) -> Result<u128, ThresholdError> {
    if k == 0 || n < k || t == 0 {
        return Err(ThresholdError::Invalid("need n >= k >= 1 and t >= 1"));
    }
    let rest = match (n + 1).checked_sub(t) {
        Some(m) => binomial(m, k)?,
        None => 0,
    };
    Ok(binomial(n, k)? - rest)
}

/// `max{C(kt − 1, k), C(n, k) − C(n − t + 1, k)}`: the largest `k`-graph on
/// `[n]` with no `t` pairwise disjoint edges, as given by the clique and cover
/// constructions.
pub fn erdos(n: u64, k: u64, t: u64) -> Result<u128, ThresholdError> {
    if k == 0 || n < k || t == 0 {
        return Err(ThresholdError::Invalid("need n >= k >= 1 and t >= 1"));
    }
    let clique = binomial((k.checked_mul(t).ok_or(Overflow)?) - 1, k)?;
    Ok(clique.max(cover(n, k, t)?))
}

/// `C(n − 1, k_1 − 1)·C(n − 1, k_2 − 1)·Π_{i≥3} C(n, k_i)` for uniformities
/// sorted in descending order.
pub fn product(n: u64, ks: &[u64]) -> Result<BigUint, ThresholdError> {
    if ks.len() < 2 {
        return Err(ThresholdError::Invalid("need at least two uniformities"));
    }
    if ks.windows(2).any(|w| w[0] < w[1]) {
        return Err(ThresholdError::Invalid("uniformities must be sorted in descending order"));
    }
    if ks[ks.len() - 1] == 0 || n < ks[0] {
        return Err(ThresholdError::Invalid("need n >= k_1 and every k_i >= 1"));
    }
    let mut acc = binomial_big(n - 1, ks[0] - 1) * binomial_big(n - 1, ks[1] - 1);
    for &k in &ks[2..] {
        acc *= binomial_big(n, k);
    }
    Ok(acc)
}

/// Product of member sizes as a big integer.
pub fn size_product(sizes: &[usize]) -> BigUint {
    sizes.iter().fold(BigUint::one(), |acc, &s| acc * BigUint::from(s))
}

/// The per-prefix bounds `(C(n, k) − C(n − r + 1, k))^r` for `r = 1..=t`
/// used by the ordered-product condition on `t` families of `k`-sets.
pub fn prefix_product_bounds(n: u64, k: u64, t: u64) -> Result<Vec<BigUint>, ThresholdError> {
    (1..=t)
        .map(|r| {
            let base = BigUint::from(cover(n, k, r)?);
            Ok(if base.is_zero() { BigUint::zero() } else { base.pow(r as u32) })
        })
        .collect()
}

/// `true` when sizes sorted ascending satisfy
/// `Π_{i≤r} |R_i| > (C(n, k) − C(n − r + 1, k))^r` for every prefix `r`.
pub fn satisfies_prefix_products(n: u64, k: u64, sizes_ascending: &[usize]) -> Result<bool, ThresholdError> {
    let bounds = prefix_product_bounds(n, k, sizes_ascending.len() as u64)?;
    let mut acc = BigUint::one();
    for (s, bound) in sizes_ascending.iter().zip(&bounds) {
        acc *= BigUint::from(*s);
        if acc <= *bound {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinations::Combinations;

    #[test]
    fn partite_examples() {
        assert_eq!(partite(3, 2, 2), Ok(3));
        assert_eq!(partite(6, 3, 2), Ok(36));
        assert_eq!(partite(7, 4, 1), Ok(0));
        assert_eq!(partite(2, 200, 2), Err(ThresholdError::Overflow(Overflow)));
        assert!(partite(0, 2, 2).is_err());
    }

    #[test]
    fn erdos_examples() {
        assert_eq!(erdos(10, 2, 3), Ok(17));
        assert_eq!(erdos(5, 2, 1), Ok(0));
        for (k, t) in [(2u64, 3u64), (3, 2), (3, 3), (2, 4)] {
            let n = k * t - 1;
            assert_eq!(erdos(n, k, t), Ok(binomial(n, k).unwrap()), "k={k} t={t}");
        }
    }

    #[test]
    fn product_examples() {
        assert_eq!(product(6, &[2, 2, 2]), Ok(BigUint::from(375u32)));
        assert_eq!(product(4, &[2, 2]), Ok(BigUint::from(9u32)));
        for k in 1..6u64 {
            let c = binomial_big(2 * k - 1, k - 1);
            assert_eq!(product(2 * k, &[k, k]), Ok(&c * &c));
        }
        assert!(product(6, &[2, 3]).is_err());
        assert!(product(6, &[2]).is_err());
    }

    #[test]
    fn cover_examples() {
        assert_eq!(cover(10, 2, 3), Ok(17));
        assert_eq!(cover(9, 3, 1), Ok(0));
        assert_eq!(cover(6, 3, 2), Ok(10));
    }

    #[test]
    fn cover_counts_sets_meeting_a_fixed_set() {
        for n in 1..=12u32 {
            for k in 1..=n {
                for t in 1..=n + 1 {
                    let fixed = t - 1;
                    let count = Combinations::new(n, k as usize).filter(|s| s.iter().any(|&v| v <= fixed)).count();
                    assert_eq!(cover(n as u64, k as u64, t as u64), Ok(count as u128), "n={n} k={k} t={t}");
                }
            }
        }
    }

    #[test]
    fn prefix_products() {
        // t = 1: any nonempty family passes
        assert_eq!(satisfies_prefix_products(6, 2, &[1]), Ok(true));
        assert_eq!(satisfies_prefix_products(6, 2, &[0]), Ok(false));
        // r = 2 bound for (6,2): C(6,2) - C(5,2) = 5, squared 25
        assert_eq!(satisfies_prefix_products(6, 2, &[5, 5]), Ok(false));
        assert_eq!(satisfies_prefix_products(6, 2, &[5, 6]), Ok(true));
    }
}
