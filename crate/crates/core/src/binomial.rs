//! Exact binomial coefficients.

use num_bigint::BigUint;
use num_traits::One;

/// Checked arithmetic left the range of the integer type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("integer overflow in exact arithmetic")]
pub struct Overflow;

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// `C(n, k)` in `u128`, or [`Overflow`] when the value does not fit.
///
/// Returns 0 for `k > n`. The running value after step `j` is `C(n, j)`, which
/// increases up to `j = n / 2`, so an overflow means the result is out of range.
pub fn binomial(n: u64, k: u64) -> Result<u128, Overflow> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1), reduced so the division is exact up front.
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = gcd(acc, den);
        let (acc_r, den_r) = (acc / g, den / g);
        debug_assert_eq!(num % den_r, 0);
        acc = acc_r.checked_mul(num / den_r).ok_or(Overflow)?;
    }
    Ok(acc)
}

/// `C(n, k)` as an arbitrary-precision integer.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `base^exp` in `u128` with overflow detection.
pub fn checked_pow(base: u64, exp: u32) -> Result<u128, Overflow> {
    (base as u128).checked_pow(exp).ok_or(Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(4, 2), Ok(6));
        assert_eq!(binomial(5, 0), Ok(1));
        assert_eq!(binomial(3, 5), Ok(0));
        assert_eq!(binomial(0, 0), Ok(1));
        assert_eq!(binomial_big(4, 2), BigUint::from(6u32));
    }

    #[test]
    fn pascal_identity_up_to_60() {
        for n in 1..=60u64 {
            for k in 1..=n {
                let lhs = binomial(n, k).unwrap();
                let rhs = binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap();
                assert_eq!(lhs, rhs, "C({n},{k})");
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        // C(200, 100) ~ 9.05e58 > u128::MAX ~ 3.4e38
        assert_eq!(binomial(200, 100), Err(Overflow));
        assert!(binomial_big(200, 100) > BigUint::from(u128::MAX));
        // C(130, 65) is still below 2^128
        assert!(binomial(130, 65).is_ok());
        assert_eq!(checked_pow(2, 128), Err(Overflow));
        assert_eq!(checked_pow(3, 4), Ok(81));
    }

    proptest! {
        #[test]
        fn big_and_checked_agree(n in 0u64..140, k in 0u64..140) {
            let big = binomial_big(n, k);
            match binomial(n, k) {
                Ok(v) => prop_assert_eq!(BigUint::from(v), big),
                Err(Overflow) => prop_assert!(big > BigUint::from(u128::MAX)),
            }
        }
    }
}
