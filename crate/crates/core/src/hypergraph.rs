//! Vertices, edges, hypergraphs and families.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::combinations::Combinations;

/// A vertex of the universe `[N]`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// 0-based position, for indexing internal tables.
    #[inline]
    pub(crate) fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A hyperedge: a strictly increasing sequence of vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    vertices: Vec<VertexId>,
}

/// Why a vertex list could not become an [`Edge`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum EdgeError {
    #[error("vertex ids are 1-based, found 0")]
    ZeroVertex,
    #[error("vertex {0} appears twice")]
    RepeatedVertex(u32),
}

impl Edge {
    /// Canonicalizes `vertices` to ascending order.
    pub fn new(vertices: impl IntoIterator<Item = u32>) -> Result<Edge, EdgeError> {
        let mut vs: Vec<u32> = vertices.into_iter().collect();
        vs.sort_unstable();
        if vs.first() == Some(&0) {
            return Err(EdgeError::ZeroVertex);
        }
        if let Some(w) = vs.windows(2).find(|w| w[0] == w[1]) {
            return Err(EdgeError::RepeatedVertex(w[0]));
        }
        Ok(Edge { vertices: vs.into_iter().map(VertexId).collect() })
    }

    #[inline]
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// `true` when `subset` (sorted, deduplicated) is contained in this edge.
    pub fn contains_all(&self, subset: &[VertexId]) -> bool {
        let mut it = self.vertices.iter();
        subset.iter().all(|s| it.any(|v| v == s))
    }

    pub fn is_disjoint(&self, other: &Edge) -> bool {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.vertices, &other.vertices);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// This edge with `v` removed.
    pub fn without(&self, v: VertexId) -> Edge {
        Edge { vertices: self.vertices.iter().copied().filter(|&u| u != v).collect() }
    }

    /// This edge with `v` added.
    pub fn with(&self, v: VertexId) -> Edge {
        let mut vertices = self.vertices.clone();
        match vertices.binary_search(&v) {
            Ok(_) => {}
            Err(pos) => vertices.insert(pos, v),
        }
        Edge { vertices }
    }

    pub fn raw(&self) -> impl Iterator<Item = u32> + '_ {
        self.vertices.iter().map(|v| v.0)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Balanced partition of `[k·n]` into `k` parts of size `n`, canonically
/// labeled: vertex `(q − 1)·k + p` is the `q`-th vertex of part `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartiteStructure {
    parts: u32,
    part_size: u32,
}

impl PartiteStructure {
    pub fn new(parts: u32, part_size: u32) -> Option<Self> {
        (parts >= 1 && part_size >= 1 && parts.checked_mul(part_size).is_some())
            .then_some(PartiteStructure { parts, part_size })
    }

    /// Number of parts `k`.
    #[inline]
    pub fn parts(&self) -> u32 {
        self.parts
    }

    /// Size `n` of each part.
    #[inline]
    pub fn part_size(&self) -> u32 {
        self.part_size
    }

    #[inline]
    pub fn universe(&self) -> u32 {
        self.parts * self.part_size
    }

    /// Part of `v`, in `1..=k`.
    #[inline]
    pub fn part_of(&self, v: VertexId) -> u32 {
        (v.0 - 1) % self.parts + 1
    }

    /// Position of `v` inside its part, in `1..=n`.
    #[inline]
    pub fn position(&self, v: VertexId) -> u32 {
        (v.0 - 1) / self.parts + 1
    }

    /// The `position`-th vertex of `part`, both 1-based.
    #[inline]
    pub fn vertex(&self, part: u32, position: u32) -> VertexId {
        debug_assert!((1..=self.parts).contains(&part) && (1..=self.part_size).contains(&position));
        VertexId((position - 1) * self.parts + part)
    }

    /// Vertices of `part` in increasing order.
    pub fn part_vertices(&self, part: u32) -> impl Iterator<Item = VertexId> + '_ {
        (1..=self.part_size).map(move |q| self.vertex(part, q))
    }

    /// At most one vertex per part.
    pub fn is_legal(&self, vertices: &[VertexId]) -> bool {
        let mut seen = 0u128;
        let small = self.parts <= 128;
        if small {
            for v in vertices {
                let bit = 1u128 << (self.part_of(*v) - 1);
                if seen & bit != 0 {
                    return false;
                }
                seen |= bit;
            }
            true
        } else {
            let mut parts: Vec<u32> = vertices.iter().map(|&v| self.part_of(v)).collect();
            parts.sort_unstable();
            parts.windows(2).all(|w| w[0] != w[1])
        }
    }

    /// Sorted list of the parts an edge meets.
    pub fn parts_of(&self, vertices: &[VertexId]) -> Vec<u32> {
        let mut ps: Vec<u32> = vertices.iter().map(|&v| self.part_of(v)).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }
}

/// Why a [`Hypergraph`] could not be built or queried. Edge indices refer to
/// the input order, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HypergraphError {
    #[error("edge {edge}: {source}")]
    Edge { edge: usize, source: EdgeError },
    #[error("edge {edge}: expected {expected} vertices, found {found}")]
    WrongSize { edge: usize, expected: usize, found: usize },
    #[error("edge {edge}: vertex {vertex} outside the universe [1, {universe}]")]
    EdgeVertexOutOfRange { edge: usize, vertex: u32, universe: u32 },
    #[error("edge {edge} duplicates edge {first}")]
    DuplicateEdge { edge: usize, first: usize },
    #[error("edge {edge} meets some part of the partite structure twice")]
    IllegalEdge { edge: usize },
    #[error("partite structure spans {structure} vertices but the universe has {universe}")]
    PartiteUniverse { structure: u32, universe: u32 },
    #[error("uniformity {uniformity} exceeds the {parts} parts of the partite structure")]
    PartiteUniformity { uniformity: usize, parts: u32 },
    #[error("vertex {vertex} outside the universe [1, {universe}]")]
    VertexOutOfRange { vertex: u32, universe: u32 },
    #[error("degree order {l} outside 0..={uniformity}")]
    DegreeOrder { l: usize, uniformity: usize },
}

/// A `k`-uniform hypergraph on `[N]`, optionally carrying a partite structure
/// that every edge respects.
///
/// Edges are stored in lexicographic order and are unique. An inverted index
/// (vertex → incident edge ids) backs degree queries. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    universe: u32,
    uniformity: usize,
    edges: Vec<Edge>,
    partite: Option<PartiteStructure>,
    incidence: Vec<Vec<u32>>,
}

impl Hypergraph {
    /// Validates and indexes `edges`. Duplicates are rejected, not merged.
    pub fn new(
        universe: u32,
        uniformity: usize,
        edges: Vec<Edge>,
        partite: Option<PartiteStructure>,
    ) -> Result<Self, HypergraphError> {
        if let Some(p) = partite {
            if p.universe() != universe {
                return Err(HypergraphError::PartiteUniverse { structure: p.universe(), universe });
            }
            if uniformity > p.parts() as usize {
                return Err(HypergraphError::PartiteUniformity { uniformity, parts: p.parts() });
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if e.len() != uniformity {
                return Err(HypergraphError::WrongSize { edge: i, expected: uniformity, found: e.len() });
            }
            if let Some(v) = e.vertices().last() {
                if v.0 > universe {
                    return Err(HypergraphError::EdgeVertexOutOfRange { edge: i, vertex: v.0, universe });
                }
            }
            if let Some(p) = partite {
                if !p.is_legal(e.vertices()) {
                    return Err(HypergraphError::IllegalEdge { edge: i });
                }
            }
        }
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by(|&a, &b| edges[a].cmp(&edges[b]).then(a.cmp(&b)));
        for w in order.windows(2) {
            if edges[w[0]] == edges[w[1]] {
                return Err(HypergraphError::DuplicateEdge { edge: w[1], first: w[0] });
            }
        }
        let mut sorted = edges;
        sorted.sort_unstable();
        Ok(Self::from_sorted_unique(universe, uniformity, sorted, partite))
    }

    /// Builds from raw vertex lists, canonicalizing each one.
    pub fn from_lists<I, E>(
        universe: u32,
        uniformity: usize,
        lists: I,
        partite: Option<PartiteStructure>,
    ) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = u32>,
    {
        let edges = lists
            .into_iter()
            .enumerate()
            .map(|(i, l)| Edge::new(l).map_err(|source| HypergraphError::Edge { edge: i, source }))
            .collect::<Result<Vec<_>, _>>()?;
        Hypergraph::new(universe, uniformity, edges, partite)
    }

    /// Trusted constructor for internal derivations of an already valid graph.
    pub(crate) fn from_sorted_unique(
        universe: u32,
        uniformity: usize,
        edges: Vec<Edge>,
        partite: Option<PartiteStructure>,
    ) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut incidence = vec![Vec::new(); universe as usize];
        for (id, e) in edges.iter().enumerate() {
            for v in e.vertices() {
                incidence[v.index()].push(id as u32);
            }
        }
        Hypergraph { universe, uniformity, edges, partite, incidence }
    }

    /// The empty `k`-graph on `[N]`.
    pub fn empty(universe: u32, uniformity: usize, partite: Option<PartiteStructure>) -> Self {
        Self::from_sorted_unique(universe, uniformity, Vec::new(), partite)
    }

    #[inline]
    pub fn universe(&self) -> u32 {
        self.universe
    }

    #[inline]
    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Number of edges `e(H)`.
    #[inline]
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    #[inline]
    pub fn partite(&self) -> Option<&PartiteStructure> {
        self.partite.as_ref()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// Ids of the edges through `v` (ascending). `v` must lie in the universe.
    #[inline]
    pub fn incident(&self, v: VertexId) -> &[u32] {
        &self.incidence[v.index()]
    }

    /// Single-vertex degree. `v` must lie in the universe.
    #[inline]
    pub fn vertex_degree(&self, v: VertexId) -> usize {
        self.incidence[v.index()].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (1..=self.universe).map(VertexId)
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), HypergraphError> {
        if v.0 == 0 || v.0 > self.universe {
            Err(HypergraphError::VertexOutOfRange { vertex: v.0, universe: self.universe })
        } else {
            Ok(())
        }
    }

    /// `d_H(T)`: the number of edges containing every vertex of `T`.
    pub fn degree(&self, set: &[VertexId]) -> Result<usize, HypergraphError> {
        for &v in set {
            self.check_vertex(v)?;
        }
        let mut t: Vec<VertexId> = set.to_vec();
        t.sort_unstable();
        t.dedup();
        if t.is_empty() {
            return Ok(self.len());
        }
        if let Some(p) = &self.partite {
            if !p.is_legal(&t) {
                return Ok(0);
            }
        }
        let pivot = *t.iter().min_by_key(|&&v| self.vertex_degree(v)).expect("nonempty");
        Ok(self
            .incident(pivot)
            .iter()
            .filter(|&&id| self.edges[id as usize].contains_all(&t))
            .count())
    }

    /// `δ_l(H)`: minimum of `d_H(T)` over the `l`-sets `T` of the universe,
    /// restricted to legal sets when the graph is partite. Returns 0 when no
    /// such set exists.
    pub fn min_degree(&self, l: usize) -> Result<usize, HypergraphError> {
        if l > self.uniformity {
            return Err(HypergraphError::DegreeOrder { l, uniformity: self.uniformity });
        }
        if l == 0 {
            return Ok(self.len());
        }
        let mut best: Option<usize> = None;
        for raw in Combinations::new(self.universe, l) {
            let t: Vec<VertexId> = raw.into_iter().map(VertexId).collect();
            if let Some(p) = &self.partite {
                if !p.is_legal(&t) {
                    continue;
                }
            }
            let d = self.degree(&t)?;
            best = Some(best.map_or(d, |b| b.min(d)));
            if d == 0 {
                break;
            }
        }
        Ok(best.unwrap_or(0))
    }

    /// Vertex of maximum degree among those not in `excluded`, counting only
    /// edges that avoid `excluded`. Lowest id wins ties. `None` when no edge
    /// avoids `excluded`.
    pub fn max_residual_degree(&self, excluded: &[VertexId]) -> Option<(VertexId, usize)> {
        let mut deg = vec![0usize; self.universe as usize];
        for e in self.edges.iter().filter(|e| excluded.iter().all(|x| !e.contains(*x))) {
            for v in e.vertices() {
                deg[v.index()] += 1;
            }
        }
        let mut best: Option<(VertexId, usize)> = None;
        for (i, &d) in deg.iter().enumerate() {
            if d > 0 && best.is_none_or(|(_, b)| d > b) {
                best = Some((VertexId(i as u32 + 1), d));
            }
        }
        best
    }

    /// Edges that avoid every vertex of `removed` (the graph `H − X`).
    pub fn avoiding(&self, removed: &[VertexId]) -> Hypergraph {
        let edges = self
            .edges
            .iter()
            .filter(|e| removed.iter().all(|x| !e.contains(*x)))
            .cloned()
            .collect();
        Self::from_sorted_unique(self.universe, self.uniformity, edges, self.partite)
    }

    /// Link of `x` restricted to edges avoiding `removed`:
    /// `{e − x : x ∈ e ∈ H, e ∩ removed = ∅}`. Uniformity drops by one.
    pub fn link(&self, x: VertexId, removed: &[VertexId]) -> Hypergraph {
        let edges = self
            .incident(x)
            .iter()
            .map(|&id| &self.edges[id as usize])
            .filter(|e| removed.iter().all(|y| !e.contains(*y)))
            .map(|e| e.without(x))
            .collect::<Vec<_>>();
        // removing a common vertex preserves lexicographic order
        Self::from_sorted_unique(self.universe, self.uniformity - 1, edges, self.partite)
    }

    /// Copy with one more edge, or `None` if the edge is already present or
    /// has the wrong size/range/legality.
    pub fn with_edge(&self, e: Edge) -> Option<Hypergraph> {
        if e.len() != self.uniformity
            || e.vertices().last().is_some_and(|v| v.0 > self.universe)
            || self.partite.is_some_and(|p| !p.is_legal(e.vertices()))
        {
            return None;
        }
        let pos = self.edges.binary_search(&e).err()?;
        let mut edges = self.edges.clone();
        edges.insert(pos, e);
        Some(Self::from_sorted_unique(self.universe, self.uniformity, edges, self.partite))
    }

    /// Copy without the edge, or `None` if it is absent.
    pub fn without_edge(&self, e: &Edge) -> Option<Hypergraph> {
        let pos = self.edges.binary_search(e).ok()?;
        let mut edges = self.edges.clone();
        edges.remove(pos);
        Some(Self::from_sorted_unique(self.universe, self.uniformity, edges, self.partite))
    }
}

/// Why a [`Family`] could not be built.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("a family needs at least one member")]
    Empty,
    #[error("member {member} lives on [1, {found}] but member 0 on [1, {expected}]")]
    UniverseMismatch { member: usize, expected: u32, found: u32 },
    #[error("member {member} has a different partite structure than member 0")]
    PartiteMismatch { member: usize },
    #[error("member {member}: {source}")]
    Member { member: usize, source: HypergraphError },
}

/// An ordered family `F_1, ..., F_t` over one universe. Uniformities may
/// differ; partite structures may not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    members: Vec<Hypergraph>,
}

impl Family {
    pub fn new(members: Vec<Hypergraph>) -> Result<Self, FamilyError> {
        let first = members.first().ok_or(FamilyError::Empty)?;
        for (i, m) in members.iter().enumerate().skip(1) {
            if m.universe() != first.universe() {
                return Err(FamilyError::UniverseMismatch {
                    member: i,
                    expected: first.universe(),
                    found: m.universe(),
                });
            }
            if m.partite() != first.partite() {
                return Err(FamilyError::PartiteMismatch { member: i });
            }
        }
        Ok(Family { members })
    }

    /// `t` copies of `h`.
    pub fn repeated(h: Hypergraph, t: usize) -> Result<Self, FamilyError> {
        Family::new(vec![h; t])
    }

    /// Number of members `t`.
    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Always `false`; present for API symmetry.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn members(&self) -> &[Hypergraph] {
        &self.members
    }

    #[inline]
    pub fn member(&self, i: usize) -> &Hypergraph {
        &self.members[i]
    }

    #[inline]
    pub fn universe(&self) -> u32 {
        self.members[0].universe()
    }

    #[inline]
    pub fn partite(&self) -> Option<&PartiteStructure> {
        self.members[0].partite()
    }

    /// Member sizes `|F_1|, ..., |F_t|`.
    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Hypergraph::len).collect()
    }

    pub fn into_members(self) -> Vec<Hypergraph> {
        self.members
    }

    /// Copy with member `i` replaced.
    pub fn with_member(&self, i: usize, h: Hypergraph) -> Result<Family, FamilyError> {
        let mut members = self.members.clone();
        members[i] = h;
        Family::new(members)
    }
}
