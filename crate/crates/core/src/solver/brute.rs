use alloc::vec;
use alloc::vec::Vec;

use crate::hypergraph::Family;
use crate::matching::{Pick, RainbowMatching};

/// Largest `Π |F_i|` the enumeration accepts.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("brute force would enumerate {product} tuples (limit {limit})")]
pub struct GuardExceeded {
    pub product: u128,
    pub limit: u128,
}

/// Enumerates every tuple of `F_1 × ... × F_t` in odometer order and returns
/// the first pairwise disjoint one, or `None`.
///
/// Shares no code with [`find_rainbow`](super::find_rainbow): it is the oracle
/// the search is checked against.
pub fn brute_force_rainbow(family: &Family) -> Result<Option<RainbowMatching>, GuardExceeded> {
    let sizes = family.sizes();
    let mut product: u128 = 1;
    for &s in &sizes {
        product = product.saturating_mul(s as u128);
    }
    if product > BRUTE_FORCE_LIMIT {
        return Err(GuardExceeded { product, limit: BRUTE_FORCE_LIMIT });
    }
    if product == 0 {
        return Ok(None);
    }
    let t = sizes.len();
    let mut odometer = vec![0usize; t];
    let mut mark = vec![false; family.universe() as usize + 1];
    loop {
        let mut ok = true;
        let mut touched: Vec<u32> = Vec::new();
        'tuple: for (i, &j) in odometer.iter().enumerate() {
            for v in family.member(i).edge(j).raw() {
                if mark[v as usize] {
                    ok = false;
                    break 'tuple;
                }
                mark[v as usize] = true;
                touched.push(v);
            }
        }
        for v in touched {
            mark[v as usize] = false;
        }
        if ok {
            let picks = odometer
                .iter()
                .enumerate()
                .map(|(i, &j)| Pick { family: i, edge: family.member(i).edge(j).clone() })
                .collect();
            return Ok(Some(RainbowMatching::new(picks)));
        }
        // advance
        let mut pos = t;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < sizes[pos] {
                break;
            }
            odometer[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::matching::validate_rainbow;

    #[test]
    fn single_member_returns_an_edge() {
        let f = Family::new(vec![Hypergraph::from_lists(4, 2, [vec![2, 3]], None).unwrap()]).unwrap();
        let m = brute_force_rainbow(&f).unwrap().unwrap();
        assert_eq!(validate_rainbow(&f, &m), Ok(()));
    }

    #[test]
    fn empty_member_means_no_matching() {
        let f = Family::new(vec![
            Hypergraph::from_lists(4, 2, [vec![2, 3]], None).unwrap(),
            Hypergraph::empty(4, 2, None),
        ])
        .unwrap();
        assert_eq!(brute_force_rainbow(&f), Ok(None));
    }

    #[test]
    fn guard_is_enforced() {
        let all: Vec<Vec<u32>> = crate::combinations::Combinations::new(30, 3).collect();
        let h = Hypergraph::from_lists(30, 3, all, None).unwrap();
        let f = Family::repeated(h, 3).unwrap();
        assert!(matches!(brute_force_rainbow(&f), Err(GuardExceeded { .. })));
    }
}
