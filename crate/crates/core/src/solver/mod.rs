//! Exact decision procedures.
//!
//! [`find_rainbow`] is the workhorse backtracking search; [`brute_force_rainbow`]
//! is an independent enumeration used to cross-check it;
//! [`matching_number`] computes `ν(H)` by branch and bound; and
//! [`extremal_search`] explores families without rainbow matchings.

mod brute;
mod extremal;
mod nu;
mod search;

pub use brute::{brute_force_rainbow, GuardExceeded, BRUTE_FORCE_LIMIT};
pub use extremal::{extremal_search, ExtremalError, ExtremalParams, ExtremalResult};
pub use nu::{matching_number, NuOutcome, NuValue};
pub use search::find_rainbow;

use crate::matching::RainbowMatching;

/// Order in which the search assigns family members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum OrderHeuristic {
    /// Members in index order, as the existence arguments process them.
    InputOrder,
    /// Static order by increasing member size.
    #[default]
    SmallestFamilyFirst,
    /// At every node, the member with the fewest edges avoiding the vertices
    /// used so far.
    MinDegreeVertex,
}

impl OrderHeuristic {
    pub fn as_str(self) -> &'static str {
        match self {
            OrderHeuristic::InputOrder => "input-order",
            OrderHeuristic::SmallestFamilyFirst => "smallest-family-first",
            OrderHeuristic::MinDegreeVertex => "min-degree-vertex",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::InputOrder, Self::SmallestFamilyFirst, Self::MinDegreeVertex]
            .into_iter()
            .find(|h| h.as_str() == s)
    }
}

/// Search configuration. Heuristic and seed affect speed and which witness is
/// returned, never the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverConfig {
    /// Maximum number of search nodes; `None` for unbounded.
    pub node_budget: Option<u64>,
    pub order: OrderHeuristic,
    /// Breaks ties between equally ranked members.
    pub seed: u64,
}

impl SolverConfig {
    pub fn with_budget(budget: u64) -> Self {
        SolverConfig { node_budget: Some(budget), ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Found(RainbowMatching),
    /// Exhaustively refuted.
    NoMatching,
    /// The node budget ran out before a decision.
    BudgetExceeded,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Found(_) => "matching",
            Verdict::NoMatching => "no-matching",
            Verdict::BudgetExceeded => "budget-exceeded",
        }
    }

    pub fn matching(&self) -> Option<&RainbowMatching> {
        match self {
            Verdict::Found(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Verdict::Found(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub nodes: u64,
}
