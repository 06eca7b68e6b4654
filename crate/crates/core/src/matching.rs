//! Rainbow matchings and their validation.

use alloc::vec::Vec;

use crate::hypergraph::{Edge, Family};

/// One chosen edge together with the member it was drawn from (0-based).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pick {
    pub family: usize,
    pub edge: Edge,
}

/// Pairwise disjoint edges, one per family member.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RainbowMatching {
    pub picks: Vec<Pick>,
}

impl RainbowMatching {
    pub fn new(mut picks: Vec<Pick>) -> Self {
        picks.sort_by_key(|p| p.family);
        RainbowMatching { picks }
    }

    /// Picks ordered by family index.
    pub fn from_ordered_edges(edges: Vec<Edge>) -> Self {
        RainbowMatching {
            picks: edges.into_iter().enumerate().map(|(family, edge)| Pick { family, edge }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }

    pub fn edge_for(&self, family: usize) -> Option<&Edge> {
        self.picks.iter().find(|p| p.family == family).map(|p| &p.edge)
    }
}

/// Reason a candidate fails to be a rainbow matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum MatchingDefect {
    /// Not exactly one pick for each family index.
    #[error("expected one pick per family member ({expected}), got {found} picks")]
    WrongCount { expected: usize, found: usize },
    #[error("pick for member {family} is not one of its edges")]
    NotMember { family: usize },
    #[error("picks for members {first} and {second} share a vertex")]
    Overlap { first: usize, second: usize },
}

impl MatchingDefect {
    /// Stable reason code used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            MatchingDefect::WrongCount { .. } => "wrong-count",
            MatchingDefect::NotMember { .. } => "not-member",
            MatchingDefect::Overlap { .. } => "overlap",
        }
    }
}

/// Checks that `m` has exactly one pick per member of `family`, that each
/// pick is an edge of its member, and that the picks are pairwise disjoint.
pub fn validate_rainbow(family: &Family, m: &RainbowMatching) -> Result<(), MatchingDefect> {
    let t = family.len();
    let mut seen = alloc::vec![false; t];
    for p in &m.picks {
        if p.family >= t || seen[p.family] {
            return Err(MatchingDefect::WrongCount { expected: t, found: m.picks.len() });
        }
        seen[p.family] = true;
    }
    if m.picks.len() != t {
        return Err(MatchingDefect::WrongCount { expected: t, found: m.picks.len() });
    }
    for p in &m.picks {
        if !family.member(p.family).contains(&p.edge) {
            return Err(MatchingDefect::NotMember { family: p.family });
        }
    }
    for (i, a) in m.picks.iter().enumerate() {
        for b in &m.picks[i + 1..] {
            if !a.edge.is_disjoint(&b.edge) {
                let (first, second) = (a.family.min(b.family), a.family.max(b.family));
                return Err(MatchingDefect::Overlap { first, second });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use alloc::vec;
    use proptest::prelude::*;

    fn fam(lists: &[&[&[u32]]], n: u32) -> Family {
        Family::new(
            lists
                .iter()
                .map(|es| Hypergraph::from_lists(n, 2, es.iter().map(|e| e.to_vec()), None).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn m(picks: &[(usize, &[u32])]) -> RainbowMatching {
        RainbowMatching::new(
            picks.iter().map(|(f, e)| Pick { family: *f, edge: Edge::new(e.iter().copied()).unwrap() }).collect(),
        )
    }

    #[test]
    fn accepts_disjoint_member_picks() {
        let f = fam(&[&[&[1, 2], &[3, 4]], &[&[3, 4], &[1, 3]]], 4);
        assert_eq!(validate_rainbow(&f, &m(&[(0, &[1, 2]), (1, &[3, 4])])), Ok(()));
    }

    #[test]
    fn rejects_overlap() {
        let f = fam(&[&[&[1, 2]], &[&[1, 2]]], 4);
        let err = validate_rainbow(&f, &m(&[(0, &[1, 2]), (1, &[1, 2])])).unwrap_err();
        assert_eq!(err, MatchingDefect::Overlap { first: 0, second: 1 });
        assert_eq!(err.code(), "overlap");
    }

    #[test]
    fn rejects_non_member() {
        let f = fam(&[&[&[1, 2]], &[&[3, 4]]], 4);
        let err = validate_rainbow(&f, &m(&[(0, &[3, 4]), (1, &[1, 2])])).unwrap_err();
        assert_eq!(err, MatchingDefect::NotMember { family: 0 });
    }

    #[test]
    fn rejects_wrong_count() {
        let f = fam(&[&[&[1, 2]], &[&[3, 4]]], 4);
        assert!(matches!(validate_rainbow(&f, &m(&[(0, &[1, 2])])), Err(MatchingDefect::WrongCount { .. })));
        assert!(matches!(
            validate_rainbow(&f, &m(&[(0, &[1, 2]), (0, &[1, 2])])),
            Err(MatchingDefect::WrongCount { .. })
        ));
        assert!(matches!(
            validate_rainbow(&f, &m(&[(0, &[1, 2]), (1, &[3, 4]), (2, &[3, 4])])),
            Err(MatchingDefect::WrongCount { .. })
        ));
    }

    proptest! {
        // validation agrees with a from-scratch set-based recheck
        #[test]
        fn matches_recheck(choices in proptest::collection::vec((0usize..3, 0usize..10), 0..4)) {
            let all: Vec<Vec<u32>> = crate::combinations::Combinations::new(5, 2).collect();
            let f = Family::new(vec![
                Hypergraph::from_lists(5, 2, all[..4].to_vec(), None).unwrap(),
                Hypergraph::from_lists(5, 2, all[3..8].to_vec(), None).unwrap(),
                Hypergraph::from_lists(5, 2, all[6..].to_vec(), None).unwrap(),
            ]).unwrap();
            let cand = RainbowMatching::new(choices.iter().map(|&(fi, ei)| Pick {
                family: fi,
                edge: Edge::new(all[ei].iter().copied()).unwrap(),
            }).collect());
            let mut fams: Vec<usize> = choices.iter().map(|c| c.0).collect();
            fams.sort_unstable();
            let one_each = fams == vec![0, 1, 2];
            let members = choices.iter().all(|&(fi, ei)| f.member(fi).edges().iter().any(|e| e.raw().eq(all[ei].iter().copied())));
            let mut used = std::collections::BTreeSet::new();
            let disjoint = choices.iter().all(|&(_, ei)| all[ei].iter().all(|v| used.insert(*v)));
            prop_assert_eq!(validate_rainbow(&f, &cand).is_ok(), one_each && members && disjoint);
        }
    }
}
