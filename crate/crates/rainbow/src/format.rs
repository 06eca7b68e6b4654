//! JSON file formats: families, verdicts and traces.
//!
//! Vertex ids are 1-based everywhere. Member numbers in witnesses and traces
//! are 1-based as well; positions inside error messages follow JSON array
//! indexing (`families[0].edges[3]`).

use std::fs;
use std::path::Path;

use rainbow_core::constructive::{GreedyTrace, RecursionEvent};
use rainbow_core::{Family, FamilyError, Hypergraph, HypergraphError, PartiteStructure, RainbowMatching};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartiteSpec {
    pub k: u32,
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberFile {
    pub k: usize,
    pub edges: Vec<Vec<u32>>,
}

/// On-disk family: `{"universe", "partite": {"k", "n"} | null, "families": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub universe: u32,
    pub partite: Option<PartiteSpec>,
    pub families: Vec<MemberFile>,
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("families[{family}].edges[{edge}]: {what}")]
    Edge { family: usize, edge: usize, what: String },
    #[error("families[{family}]: {what}")]
    Member { family: usize, what: String },
    #[error("{0}")]
    Structure(String),
}

impl FamilyFile {
    pub fn from_family(family: &Family) -> Self {
        FamilyFile {
            universe: family.universe(),
            partite: family.partite().map(|p| PartiteSpec { k: p.parts(), n: p.part_size() }),
            families: family
                .members()
                .iter()
                .map(|m| MemberFile { k: m.uniformity(), edges: m.edges().iter().map(|e| e.raw().collect()).collect() })
                .collect(),
        }
    }

    pub fn to_family(&self) -> Result<Family, FormatError> {
        let partite = match &self.partite {
            None => None,
            Some(s) => Some(
                PartiteStructure::new(s.k, s.n)
                    .ok_or_else(|| FormatError::Structure("partite k and n must be positive".into()))?,
            ),
        };
        if let Some(p) = partite {
            if p.universe() != self.universe {
                return Err(FormatError::Structure(format!(
                    "partite structure spans {} vertices but universe is {}",
                    p.universe(),
                    self.universe
                )));
            }
        }
        let mut members = Vec::with_capacity(self.families.len());
        for (i, m) in self.families.iter().enumerate() {
            let h = Hypergraph::from_lists(self.universe, m.k, m.edges.iter().map(|e| e.iter().copied()), partite)
                .map_err(|e| member_error(i, e))?;
            members.push(h);
        }
        Family::new(members).map_err(|e| match e {
            FamilyError::Empty => FormatError::Structure("need at least one family".into()),
            other => FormatError::Structure(other.to_string()),
        })
    }
}

fn member_error(family: usize, e: HypergraphError) -> FormatError {
    let at = |edge: usize, what: String| FormatError::Edge { family, edge, what };
    match e {
        HypergraphError::Edge { edge, source } => at(edge, source.to_string()),
        HypergraphError::WrongSize { edge, expected, found } => {
            at(edge, format!("expected {expected} vertices, found {found}"))
        }
        HypergraphError::EdgeVertexOutOfRange { edge, vertex, universe } => {
            at(edge, format!("vertex {vertex} outside the universe [1, {universe}]"))
        }
        HypergraphError::DuplicateEdge { edge, first } => at(edge, format!("duplicates families[{family}].edges[{first}]")),
        HypergraphError::IllegalEdge { edge } => at(edge, "meets some part of the partite structure twice".into()),
        other => FormatError::Member { family, what: other.to_string() },
    }
}

pub fn parse_family(text: &str) -> Result<Family, FormatError> {
    let file: FamilyFile = serde_json::from_str(text)?;
    file.to_family()
}

pub fn read_family(path: &Path) -> Result<Family, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    parse_family(&text)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PickJson {
    /// 1-based member number.
    pub family: usize,
    pub edge: Vec<u32>,
}

pub fn witness_json(m: &RainbowMatching) -> Vec<PickJson> {
    m.picks.iter().map(|p| PickJson { family: p.family + 1, edge: p.edge.raw().collect() }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub millis: u64,
}

/// Output of `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdict: String,
    pub algorithm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<PickJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub seed: u64,
    pub version: String,
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDegree {
    pub vertex: u32,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventJson {
    pub depth: usize,
    pub case: String,
    /// 1-based member numbers in processing order.
    pub members: Vec<usize>,
    pub t: usize,
    pub r: usize,
    pub pivots: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub high_degree_threshold: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub high_degree_counts: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "kebab-case")]
pub enum TraceJson {
    Greedy { chosen_vertices: Vec<VertexDegree>, chosen_edges: Vec<PickJson> },
    Recursive { events: Vec<EventJson> },
    Randomized { trial: Option<u64>, indices: Vec<usize>, hypothesis_holds: bool },
}

impl TraceJson {
    pub fn greedy(trace: &GreedyTrace) -> Self {
        TraceJson::Greedy {
            chosen_vertices: trace
                .chosen_vertices
                .iter()
                .map(|&(v, degree)| VertexDegree { vertex: v.get(), degree })
                .collect(),
            chosen_edges: trace
                .chosen_edges
                .iter()
                .map(|p| PickJson { family: p.family + 1, edge: p.edge.raw().collect() })
                .collect(),
        }
    }

    pub fn recursive(events: &[RecursionEvent]) -> Self {
        TraceJson::Recursive {
            events: events
                .iter()
                .map(|e| EventJson {
                    depth: e.depth,
                    case: e.case.as_str().into(),
                    members: e.members.iter().map(|i| i + 1).collect(),
                    t: e.t(),
                    r: e.r,
                    pivots: e.pivots.iter().map(|v| v.get()).collect(),
                    // u128 does not fit a JSON number portably
                    high_degree_threshold: e.high_degree_threshold.map(|x| x.to_string()),
                    high_degree_counts: e.high_degree_counts.clone(),
                    degree_bound: e.degree_bound.map(|x| x.to_string()),
                    max_degree: e.max_degree,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rainbow_core::generators::{product_tight, random_family};

    #[test]
    fn round_trip() {
        for f in [product_tight(5, &[3, 2, 2]).unwrap(), random_family(3, &[3, 3], &[5, 9], true, 1).unwrap()] {
            let text = serde_json::to_string(&FamilyFile::from_family(&f)).unwrap();
            assert_eq!(parse_family(&text).unwrap(), f);
        }
    }

    #[test]
    fn errors_name_family_and_edge() {
        let cases = [
            (r#"{"universe":4,"partite":null,"families":[{"k":2,"edges":[[1,2]]},{"k":2,"edges":[[3,4],[1,5]]}]}"#, "families[1].edges[1]: vertex 5 outside the universe [1, 4]"),
            (r#"{"universe":4,"partite":null,"families":[{"k":2,"edges":[[1,2],[2,1]]}]}"#, "families[0].edges[1]: duplicates families[0].edges[0]"),
            (r#"{"universe":4,"partite":null,"families":[{"k":2,"edges":[[1,2,3]]}]}"#, "families[0].edges[0]: expected 2 vertices, found 3"),
            (r#"{"universe":4,"partite":{"k":2,"n":2},"families":[{"k":2,"edges":[[1,3]]}]}"#, "families[0].edges[0]: meets some part of the partite structure twice"),
            (r#"{"universe":4,"partite":null,"families":[{"k":2,"edges":[[2,2]]}]}"#, "families[0].edges[0]: vertex 2 appears twice"),
        ];
        for (text, want) in cases {
            assert_eq!(parse_family(text).unwrap_err().to_string(), want);
        }
    }

    #[test]
    fn structural_errors() {
        assert!(parse_family(r#"{"universe":4,"partite":null,"families":[]}"#).is_err());
        assert!(parse_family(r#"{"universe":5,"partite":{"k":2,"n":2},"families":[{"k":2,"edges":[]}]}"#).is_err());
        assert!(matches!(parse_family("{"), Err(FormatError::Json(_))));
    }
}
