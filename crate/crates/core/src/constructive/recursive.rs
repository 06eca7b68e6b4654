use alloc::vec;
use alloc::vec::Vec;

use super::{distinct_representatives, greedy, ConstructiveError, Stage, TraceDefect};
use crate::binomial::{checked_pow, Overflow};
use crate::hypergraph::{Edge, Family, Hypergraph, PartiteStructure, VertexId};
use crate::matching::{Pick, RainbowMatching};

/// Which case of the recursion a node took.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// Every member has `≥ t` vertices of degree `> 2(t−1)n^(r−2)`: descend
    /// into the links of distinct representatives.
    LinkRecurse,
    /// Some member `F_t` has `< t` such vertices and maximum degree
    /// `≤ (t−1)(r−1)n^(r−2)`: match the others, then extend by any edge of
    /// `F_t` avoiding them.
    ExtendDisjoint,
    /// As above but `F_t` has a vertex `x` of larger degree: match the others
    /// with `x` deleted, then extend by an edge of `F_t` through `x`.
    HighDegreeVertex,
    /// `r = 2`: two-phase bipartite greedy.
    BaseBipartite,
    /// `t = 1`: any edge.
    BaseSingle,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::LinkRecurse => "LINK-RECURSE",
            CaseTag::ExtendDisjoint => "EXTEND-DISJOINT",
            CaseTag::HighDegreeVertex => "HIGH-DEGREE-VERTEX",
            CaseTag::BaseBipartite => "BASE-BIPARTITE",
            CaseTag::BaseSingle => "BASE-T1",
        }
    }
}

/// One node of the recursion, recorded before descending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionEvent {
    pub depth: usize,
    pub case: CaseTag,
    /// Input member indices handled at this node, in processing order. For
    /// the two extension cases the last entry is the member playing `F_t`.
    pub members: Vec<usize>,
    pub r: usize,
    /// `2(t − 1)·n^(r − 2)`, when the high-degree test was made.
    pub high_degree_threshold: Option<u128>,
    /// Per member (in `members` order): vertices above the threshold.
    pub high_degree_counts: Vec<usize>,
    /// `(t − 1)(r − 1)·n^(r − 2)` for the extension cases.
    pub degree_bound: Option<u128>,
    /// Maximum vertex degree of the last member, for the extension cases.
    pub max_degree: Option<usize>,
    /// `x_1..x_t` for links; `[x]` for the high-degree case.
    pub pivots: Vec<VertexId>,
}

impl RecursionEvent {
    pub fn t(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursiveOutput {
    pub matching: RainbowMatching,
    pub events: Vec<RecursionEvent>,
}

struct Shape {
    structure: PartiteStructure,
    r: usize,
}

fn shape(family: &Family) -> Result<Shape, ConstructiveError> {
    let structure = *family.partite().ok_or(ConstructiveError::InvalidInput("members must be partite"))?;
    let r = family.member(0).uniformity();
    if family.members().iter().any(|m| m.uniformity() != r) {
        return Err(ConstructiveError::InvalidInput("members must share one uniformity r"));
    }
    if r < 2 {
        return Err(ConstructiveError::InvalidInput("need r >= 2"));
    }
    for m in family.members() {
        let mut parts: Vec<u32> = m.edges().iter().flat_map(|e| structure.parts_of(e.vertices())).collect();
        parts.sort_unstable();
        parts.dedup();
        if parts.len() > r {
            return Err(ConstructiveError::InvalidInput("each member must live on r fixed parts"));
        }
    }
    Ok(Shape { structure, r })
}

/// Whether `family` meets the size hypotheses of [`partite_recursive`]:
/// `n ≥ 3(k − 1)(t − 1)` and `|F_i| > (t − 1)·n^(r − 1)` for every member.
pub fn partite_hypothesis(family: &Family) -> Result<bool, ConstructiveError> {
    let s = shape(family)?;
    let (k, n, t) = (s.structure.parts() as u128, s.structure.part_size() as u128, family.len() as u128);
    let bound = crate::threshold::partite(n as u64, s.r as u32, t as u64).map_err(|_| Overflow)?;
    Ok(n >= 3 * (k - 1) * (t - 1) && family.members().iter().all(|m| m.len() as u128 > bound))
}

/// `(t−1)·factor·n^(r−2)`
fn scaled(n: u32, r: usize, t: usize, factor: u128) -> Result<u128, Overflow> {
    checked_pow(n as u64, r as u32 - 2)?
        .checked_mul((t as u128 - 1).checked_mul(factor).ok_or(Overflow)?)
        .ok_or(Overflow)
}

/// Vertices of degree `> threshold`, ascending.
fn high_degree(h: &Hypergraph, threshold: u128) -> Vec<VertexId> {
    h.vertices().filter(|&v| h.vertex_degree(v) as u128 > threshold).collect()
}

fn max_degree(h: &Hypergraph) -> Option<(VertexId, usize)> {
    let mut best: Option<(VertexId, usize)> = None;
    for v in h.vertices() {
        let d = h.vertex_degree(v);
        if d > 0 && best.is_none_or(|(_, b)| d > b) {
            best = Some((v, d));
        }
    }
    best
}

/// Rainbow matching for `t` members, each `r`-partite on `r` of the `k`
/// parts of a balanced structure with parts of size `n`.
///
/// Follows the induction on `t + r` literally and records every node as a
/// [`RecursionEvent`]. "Without loss of generality" reorderings are explicit
/// in the events and undone in the returned matching. With
/// `n ≥ 3(k − 1)(t − 1)` and `|F_i| > (t − 1)·n^(r − 1)` no step fails.
pub fn partite_recursive(family: &Family) -> Result<RecursiveOutput, ConstructiveError> {
    let s = shape(family)?;
    let mut events = Vec::new();
    let members: Vec<(usize, Hypergraph)> = family.members().iter().cloned().enumerate().collect();
    let n = s.structure.part_size();
    let picks = solve(members, s.r, n, 0, &mut events)?;
    let matching = RainbowMatching::new(picks.into_iter().map(|(family, edge)| Pick { family, edge }).collect());
    Ok(RecursiveOutput { matching, events })
}

fn solve(
    members: Vec<(usize, Hypergraph)>,
    r: usize,
    n: u32,
    depth: usize,
    events: &mut Vec<RecursionEvent>,
) -> Result<Vec<(usize, Edge)>, ConstructiveError> {
    let t = members.len();
    let ids: Vec<usize> = members.iter().map(|(i, _)| *i).collect();
    let event = |case| RecursionEvent {
        depth,
        case,
        members: ids.clone(),
        r,
        high_degree_threshold: None,
        high_degree_counts: Vec::new(),
        degree_bound: None,
        max_degree: None,
        pivots: Vec::new(),
    };

    if t == 1 {
        events.push(event(CaseTag::BaseSingle));
        let (i, h) = &members[0];
        let e = h.edges().first().ok_or(ConstructiveError::HypothesisViolated { stage: Stage::BaseSingle, step: 1, depth })?;
        return Ok(vec![(*i, e.clone())]);
    }
    if r == 2 {
        events.push(event(CaseTag::BaseBipartite));
        let graphs: Vec<&Hypergraph> = members.iter().map(|(_, h)| h).collect();
        let (edges, _) = greedy::run(&graphs, depth)?;
        return Ok(ids.into_iter().zip(edges).collect());
    }

    let threshold = scaled(n, r, t, 2)?;
    let high: Vec<Vec<VertexId>> = members.iter().map(|(_, h)| high_degree(h, threshold)).collect();
    let counts: Vec<usize> = high.iter().map(Vec::len).collect();

    if counts.iter().all(|&c| c >= t) {
        let xs = distinct_representatives(&high)
            .ok_or(ConstructiveError::HypothesisViolated { stage: Stage::LinkSelection, step: 1, depth })?;
        let mut ev = event(CaseTag::LinkRecurse);
        ev.high_degree_threshold = Some(threshold);
        ev.high_degree_counts = counts;
        ev.pivots = xs.clone();
        events.push(ev);
        let links: Vec<(usize, Hypergraph)> = members
            .iter()
            .zip(&xs)
            .map(|((i, h), &x)| {
                let others: Vec<VertexId> = xs.iter().copied().filter(|&y| y != x).collect();
                (*i, h.link(x, &others))
            })
            .collect();
        let sub = solve(links, r - 1, n, depth + 1, events)?;
        return Ok(sub.into_iter().zip(&xs).map(|((i, e), &x)| (i, e.with(x))).collect());
    }

    // reindex so that a member with fewer than t high-degree vertices is last
    let j = counts.iter().position(|&c| c < t).expect("some count below t");
    let mut members = members;
    let last = members.remove(j);
    let mut order: Vec<usize> = members.iter().map(|(i, _)| *i).collect();
    order.push(last.0);
    let mut counts_ordered: Vec<usize> = counts.clone();
    let c_last = counts_ordered.remove(j);
    counts_ordered.push(c_last);

    let bound = scaled(n, r, t, r as u128 - 1)?;
    let top = max_degree(&last.1);
    let top_degree = top.map_or(0, |(_, d)| d);
    let mut ev = event(CaseTag::ExtendDisjoint);
    ev.members = order;
    ev.high_degree_threshold = Some(threshold);
    ev.high_degree_counts = counts_ordered;
    ev.degree_bound = Some(bound);
    ev.max_degree = Some(top_degree);

    if top_degree as u128 <= bound {
        events.push(ev);
        let mut sub = solve(members, r, n, depth + 1, events)?;
        let used: Vec<VertexId> = sub.iter().flat_map(|(_, e)| e.vertices().iter().copied()).collect();
        let e = last
            .1
            .edges()
            .iter()
            .find(|e| used.iter().all(|v| !e.contains(*v)))
            .ok_or(ConstructiveError::HypothesisViolated { stage: Stage::ExtendDisjoint, step: t, depth })?;
        sub.push((last.0, e.clone()));
        Ok(sub)
    } else {
        let (x, _) = top.expect("positive degree");
        ev.case = CaseTag::HighDegreeVertex;
        ev.pivots = vec![x];
        events.push(ev);
        let reduced: Vec<(usize, Hypergraph)> = members.iter().map(|(i, h)| (*i, h.avoiding(&[x]))).collect();
        let mut sub = solve(reduced, r, n, depth + 1, events)?;
        let used: Vec<VertexId> = sub.iter().flat_map(|(_, e)| e.vertices().iter().copied()).collect();
        let e = last
            .1
            .incident(x)
            .iter()
            .map(|&id| last.1.edge(id as usize))
            .find(|e| used.iter().all(|v| !e.contains(*v)))
            .ok_or(ConstructiveError::HypothesisViolated { stage: Stage::HighDegreeVertex, step: t, depth })?;
        sub.push((last.0, e.clone()));
        Ok(sub)
    }
}

/// Replays the recursion described by `events` on `family` and re-checks
/// every recorded case condition from scratch.
pub fn verify_recursion_trace(family: &Family, events: &[RecursionEvent]) -> Result<(), TraceDefect> {
    let n = family.partite().ok_or(TraceDefect { entry: 0, what: "family is not partite" })?.part_size();
    let members: Vec<(usize, Vec<Edge>)> =
        family.members().iter().enumerate().map(|(i, h)| (i, h.edges().to_vec())).collect();
    let r = family.member(0).uniformity();
    let mut cursor = 0;
    replay(members, r, n, 0, events, &mut cursor)?;
    if cursor != events.len() {
        return Err(TraceDefect { entry: cursor, what: "trailing events" });
    }
    Ok(())
}

fn naive_degree(edges: &[Edge], v: VertexId) -> usize {
    edges.iter().filter(|e| e.vertices().contains(&v)).count()
}

fn touched(edges: &[Edge]) -> Vec<VertexId> {
    let mut vs: Vec<VertexId> = edges.iter().flat_map(|e| e.vertices().iter().copied()).collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

fn replay(
    members: Vec<(usize, Vec<Edge>)>,
    r: usize,
    n: u32,
    depth: usize,
    events: &[RecursionEvent],
    cursor: &mut usize,
) -> Result<(), TraceDefect> {
    let at = *cursor;
    let fail = |what| Err(TraceDefect { entry: at, what });
    let Some(ev) = events.get(at) else { return fail("missing event") };
    *cursor += 1;
    let t = members.len();
    if ev.depth != depth || ev.r != r || ev.t() != t {
        return fail("depth, r or t does not match the replay");
    }
    let mut ids: Vec<usize> = members.iter().map(|m| m.0).collect();
    let mut listed = ev.members.clone();
    ids.sort_unstable();
    listed.sort_unstable();
    if ids != listed {
        return fail("member set does not match the replay");
    }
    let ordered: Vec<(usize, Vec<Edge>)> = ev
        .members
        .iter()
        .map(|i| members.iter().find(|m| m.0 == *i).expect("checked").clone())
        .collect();

    match ev.case {
        CaseTag::BaseSingle => {
            if t != 1 {
                return fail("single-member base with t != 1");
            }
            Ok(())
        }
        CaseTag::BaseBipartite => {
            if t < 2 || r != 2 {
                return fail("bipartite base needs t >= 2 and r = 2");
            }
            Ok(())
        }
        case => {
            if t < 2 || r < 3 {
                return fail("recursive case needs t >= 2 and r >= 3");
            }
            let threshold = scaled(n, r, t, 2).map_err(|_| TraceDefect { entry: at, what: "overflow" })?;
            if ev.high_degree_threshold != Some(threshold) {
                return fail("wrong high-degree threshold");
            }
            let counts: Vec<usize> = ordered
                .iter()
                .map(|(_, es)| touched(es).into_iter().filter(|&v| naive_degree(es, v) as u128 > threshold).count())
                .collect();
            if counts != ev.high_degree_counts {
                return fail("wrong high-degree counts");
            }
            match case {
                CaseTag::LinkRecurse => {
                    if counts.iter().any(|&c| c < t) {
                        return fail("link case needs t high-degree vertices in every member");
                    }
                    let xs = &ev.pivots;
                    let mut distinct = xs.clone();
                    distinct.sort_unstable();
                    distinct.dedup();
                    if xs.len() != t || distinct.len() != t {
                        return fail("pivots are not t distinct vertices");
                    }
                    let mut links = Vec::with_capacity(t);
                    for ((i, es), &x) in ordered.iter().zip(xs) {
                        if naive_degree(es, x) as u128 <= threshold {
                            return fail("pivot is not a high-degree vertex of its member");
                        }
                        let link: Vec<Edge> = es
                            .iter()
                            .filter(|e| e.vertices().contains(&x) && xs.iter().all(|&y| y == x || !e.vertices().contains(&y)))
                            .map(|e| e.without(x))
                            .collect();
                        links.push((*i, link));
                    }
                    replay(links, r - 1, n, depth + 1, events, cursor)
                }
                CaseTag::ExtendDisjoint | CaseTag::HighDegreeVertex => {
                    if counts[t - 1] >= t {
                        return fail("last member must have fewer than t high-degree vertices");
                    }
                    let bound = scaled(n, r, t, r as u128 - 1).map_err(|_| TraceDefect { entry: at, what: "overflow" })?;
                    let last = &ordered[t - 1].1;
                    let top = touched(last).into_iter().map(|v| naive_degree(last, v)).max().unwrap_or(0);
                    if ev.degree_bound != Some(bound) || ev.max_degree != Some(top) {
                        return fail("wrong degree bound or maximum degree");
                    }
                    let mut rest: Vec<(usize, Vec<Edge>)> = ordered[..t - 1].to_vec();
                    if case == CaseTag::ExtendDisjoint {
                        if top as u128 > bound {
                            return fail("extension without pivot needs max degree within the bound");
                        }
                    } else {
                        let [x] = ev.pivots[..] else { return fail("high-degree case needs one pivot") };
                        if naive_degree(last, x) as u128 <= bound {
                            return fail("pivot degree does not exceed the bound");
                        }
                        for (_, es) in rest.iter_mut() {
                            es.retain(|e| !e.vertices().contains(&x));
                        }
                    }
                    replay(rest, r, n, depth + 1, events, cursor)
                }
                CaseTag::BaseBipartite | CaseTag::BaseSingle => unreachable!(),
            }
        }
    }
}
