//! Directed, separated, bipartite separated and weighted graphs.
//!
//! Every graph type is an immutable value. Vertices and edges are stored in
//! lexicographic order of their names and addressed by dense indices
//! ([`VertexId`], [`EdgeId`]) that follow the same order, so every
//! enumeration in the crate is deterministic.
//!
//! Unvalidated input lives in [`RawGraph`]; [`validate`] lists every broken
//! invariant and [`RawGraph::build`] turns a clean description into a typed
//! graph.

mod raw;
pub mod text;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

pub use raw::{validate, GraphDoc, GraphKind, RawEdge, RawGraph, ValidationReport, Violation};

pub type VertexId = u32;
pub type EdgeId = u32;
/// Index of a C-set in [`SeparatedGraph::csets`].
pub type CSetId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: VertexId,
    pub range: VertexId,
}

/// A finite directed graph `(E⁰, E¹, r, s)`.
#[derive(Clone, Debug)]
pub struct DirectedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}
impl Eq for DirectedGraph {}

impl DirectedGraph {
    /// Builds a graph from names. Duplicate names and dangling endpoints are
    /// rejected with a full report.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, ValidationReport>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let raw = RawGraph {
            kind: GraphKind::Separated,
            vertices: vertices.into_iter().map(Into::into).collect(),
            edges: edges
                .into_iter()
                .map(|(name, source, range)| RawEdge { name, source, range })
                .collect(),
            ..RawGraph::default()
        };
        let report = raw::validate_directed(&raw);
        if !report.is_valid() {
            return Err(report);
        }
        Ok(Self::from_checked(&raw))
    }

    pub(crate) fn from_checked(raw: &RawGraph) -> Self {
        let mut vertices = raw.vertices.clone();
        vertices.sort();
        let vertex_index: HashMap<String, VertexId> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as VertexId))
            .collect();
        let mut raw_edges: Vec<&RawEdge> = raw.edges.iter().collect();
        raw_edges.sort_by(|a, b| a.name.cmp(&b.name));
        let edges: Vec<Edge> = raw_edges
            .iter()
            .map(|e| Edge {
                name: e.name.clone(),
                source: vertex_index[&e.source],
                range: vertex_index[&e.range],
            })
            .collect();
        let edge_index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.name.clone(), i as EdgeId))
            .collect();
        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.source as usize].push(i as EdgeId);
            in_edges[e.range as usize].push(i as EdgeId);
        }
        DirectedGraph {
            vertices,
            edges,
            vertex_index,
            edge_index,
            out_edges,
            in_edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v as usize]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e as usize]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e as usize].name
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e as usize].source
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edges[e as usize].range
    }

    /// `s⁻¹(v)` in edge order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v as usize]
    }

    /// `r⁻¹(v)` in edge order.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v as usize]
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out_edges[v as usize].is_empty()
    }

    pub fn is_isolated(&self, v: VertexId) -> bool {
        self.out_edges[v as usize].is_empty() && self.in_edges[v as usize].is_empty()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        0..self.vertices.len() as VertexId
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        0..self.edges.len() as EdgeId
    }

    /// Vertices reachable from `v` by a path of length ≥ 0, i.e. every `u ≤ v`.
    pub fn descendants(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::from([v]);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &e in self.out_edges(u) {
                let r = self.range(e);
                if seen.insert(r) {
                    stack.push(r);
                }
            }
        }
        seen
    }

    pub(crate) fn to_raw(&self, kind: GraphKind) -> RawGraph {
        RawGraph {
            kind,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    name: e.name.clone(),
                    source: self.vertices[e.source as usize].clone(),
                    range: self.vertices[e.range as usize].clone(),
                })
                .collect(),
            ..RawGraph::default()
        }
    }
}

/// Structural flags of a directed graph, computed from the `s` and `r` fibers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphClass {
    pub row_finite: bool,
    pub locally_finite: bool,
    pub bipartite_able: bool,
    pub regular: Vec<String>,
    pub sinks: Vec<String>,
    pub isolated: Vec<String>,
}

pub fn classify(g: &DirectedGraph) -> GraphClass {
    let names = |pred: &dyn Fn(VertexId) -> bool| {
        g.vertex_ids()
            .filter(|&v| pred(v))
            .map(|v| g.vertex_name(v).to_string())
            .collect::<Vec<_>>()
    };
    let sources: BTreeSet<VertexId> = g.edges().iter().map(|e| e.source).collect();
    let bipartite_able = g.edges().iter().all(|e| !sources.contains(&e.range));
    GraphClass {
        // Every graph representable here is finite.
        row_finite: true,
        locally_finite: true,
        bipartite_able,
        regular: names(&|v| !g.is_sink(v)),
        sinks: names(&|v| g.is_sink(v)),
        isolated: names(&|v| g.is_isolated(v)),
    }
}

/// One member `X ∈ C_v` of a separation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSet {
    pub vertex: VertexId,
    /// Sorted edge ids.
    pub edges: Vec<EdgeId>,
}

/// A directed graph together with a partition `C_v` of every `s⁻¹(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatedGraph {
    graph: DirectedGraph,
    csets: Vec<CSet>,
    /// `C_v` as indices into `csets`, in the order they were given.
    by_vertex: Vec<Vec<CSetId>>,
    set_of: Vec<CSetId>,
}

impl SeparatedGraph {
    /// `separation` lists, per vertex name, the sets of `C_v` by edge name.
    pub fn new(
        graph: DirectedGraph,
        separation: Vec<(String, Vec<Vec<String>>)>,
    ) -> Result<Self, ValidationReport> {
        let mut raw = graph.to_raw(GraphKind::Separated);
        raw.separation = separation;
        let report = validate(&raw);
        if !report.is_valid() {
            return Err(report);
        }
        Ok(Self::from_checked(graph, &raw.separation))
    }

    pub(crate) fn from_checked(graph: DirectedGraph, separation: &[(String, Vec<Vec<String>>)]) -> Self {
        let mut csets = Vec::new();
        let mut by_vertex = vec![Vec::new(); graph.vertex_count()];
        let mut set_of = vec![0; graph.edge_count()];
        for (vname, sets) in separation {
            let v = graph.vertex_id(vname).expect("validated vertex");
            for set in sets {
                let mut edges: Vec<EdgeId> =
                    set.iter().map(|n| graph.edge_id(n).expect("validated edge")).collect();
                edges.sort_unstable();
                let id = csets.len() as CSetId;
                for &e in &edges {
                    set_of[e as usize] = id;
                }
                by_vertex[v as usize].push(id);
                csets.push(CSet { vertex: v, edges });
            }
        }
        SeparatedGraph {
            graph,
            csets,
            by_vertex,
            set_of,
        }
    }

    /// The trivially separated graph: `C_v = {s⁻¹(v)}` for every regular `v`.
    pub fn trivial(graph: DirectedGraph) -> Self {
        let separation = graph
            .vertex_ids()
            .filter(|&v| !graph.is_sink(v))
            .map(|v| {
                let set = graph.out_edges(v).iter().map(|&e| graph.edge_name(e).to_string()).collect();
                (graph.vertex_name(v).to_string(), vec![set])
            })
            .collect::<Vec<_>>();
        Self::from_checked(graph, &separation)
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn csets(&self) -> &[CSet] {
        &self.csets
    }

    pub fn cset(&self, x: CSetId) -> &CSet {
        &self.csets[x as usize]
    }

    /// `C_v` in its stored order.
    pub fn csets_at(&self, v: VertexId) -> &[CSetId] {
        &self.by_vertex[v as usize]
    }

    /// `X_e`, the unique C-set containing `e`.
    pub fn set_of(&self, e: EdgeId) -> CSetId {
        self.set_of[e as usize]
    }

    /// The distinguished edge `e_X`: the lexicographically greatest name in `X`.
    pub fn distinguished(&self, x: CSetId) -> EdgeId {
        *self.csets[x as usize].edges.last().expect("C-sets are nonempty")
    }

    pub fn cset_names(&self, x: CSetId) -> Vec<String> {
        self.csets[x as usize]
            .edges
            .iter()
            .map(|&e| self.graph.edge_name(e).to_string())
            .collect()
    }

    pub fn separation_names(&self) -> Vec<(String, Vec<Vec<String>>)> {
        self.graph
            .vertex_ids()
            .filter(|&v| !self.by_vertex[v as usize].is_empty())
            .map(|v| {
                let sets = self.by_vertex[v as usize].iter().map(|&x| self.cset_names(x)).collect();
                (self.graph.vertex_name(v).to_string(), sets)
            })
            .collect()
    }

    /// The chosen `e_X` per C-set, keyed `vertex#index`.
    pub fn distinguished_choices(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for v in self.graph.vertex_ids() {
            for (i, &x) in self.by_vertex[v as usize].iter().enumerate() {
                out.push((
                    format!("{}#{}", self.graph.vertex_name(v), i),
                    self.graph.edge_name(self.distinguished(x)).to_string(),
                ));
            }
        }
        out
    }

    /// Compares graphs up to the order in which each `C_v` is listed.
    pub fn same_structure(&self, other: &SeparatedGraph) -> bool {
        if self.graph != other.graph {
            return false;
        }
        let canon = |g: &SeparatedGraph| {
            g.separation_names()
                .into_iter()
                .map(|(v, sets)| {
                    let sets = sets
                        .into_iter()
                        .map(|mut s| {
                            s.sort();
                            s
                        })
                        .collect::<BTreeSet<_>>();
                    (v, sets)
                })
                .collect::<Vec<_>>()
        };
        canon(self) == canon(other)
    }

    pub fn to_raw(&self) -> RawGraph {
        let mut raw = self.graph.to_raw(GraphKind::Separated);
        raw.separation = self.separation_names();
        raw
    }

    /// Renames vertices and edges; names not covered by the maps are kept.
    pub fn renamed(
        &self,
        vertex: impl Fn(&str) -> String,
        edge: impl Fn(&str) -> String,
    ) -> Result<SeparatedGraph, ValidationReport> {
        let raw = self.to_raw();
        let renamed = RawGraph {
            kind: GraphKind::Separated,
            vertices: raw.vertices.iter().map(|v| vertex(v)).collect(),
            edges: raw
                .edges
                .iter()
                .map(|e| RawEdge {
                    name: edge(&e.name),
                    source: vertex(&e.source),
                    range: vertex(&e.range),
                })
                .collect(),
            separation: raw
                .separation
                .iter()
                .map(|(v, sets)| {
                    (
                        vertex(v),
                        sets.iter().map(|s| s.iter().map(|e| edge(e)).collect()).collect(),
                    )
                })
                .collect(),
            ..RawGraph::default()
        };
        match renamed.build()? {
            GraphDoc::Separated(g) => Ok(g),
            GraphDoc::Bipartite(b) => Ok(b.into_separated()),
            GraphDoc::Weighted(_) => unreachable!("kind is separated"),
        }
    }
}

/// A separated graph with a splitting `E⁰ = E^{0,0} ⊔ E^{0,1}` such that every
/// edge goes from the upper level to the lower level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteSeparatedGraph {
    base: SeparatedGraph,
    upper: Vec<bool>,
}

impl BipartiteSeparatedGraph {
    pub fn new(base: SeparatedGraph, upper: &[String], lower: &[String]) -> Result<Self, ValidationReport> {
        let mut raw = base.to_raw();
        raw.bipartite = Some((upper.to_vec(), lower.to_vec()));
        let report = validate(&raw);
        if !report.is_valid() {
            return Err(report);
        }
        let flags = base
            .graph()
            .vertex_names()
            .iter()
            .map(|v| upper.contains(v))
            .collect();
        Ok(BipartiteSeparatedGraph { base, upper: flags })
    }

    pub(crate) fn from_flags(base: SeparatedGraph, upper: Vec<bool>) -> Self {
        debug_assert_eq!(upper.len(), base.graph().vertex_count());
        BipartiteSeparatedGraph { base, upper }
    }

    /// Sources go up, everything else goes down. Fails when some vertex is
    /// both a source and a range.
    pub fn infer(base: SeparatedGraph) -> Result<Self, SeparatedGraph> {
        let g = base.graph();
        let upper: Vec<bool> = g.vertex_ids().map(|v| !g.is_sink(v)).collect();
        if g.edges().iter().any(|e| upper[e.range as usize]) {
            return Err(base);
        }
        Ok(BipartiteSeparatedGraph { base, upper })
    }

    pub fn separated(&self) -> &SeparatedGraph {
        &self.base
    }

    pub fn into_separated(self) -> SeparatedGraph {
        self.base
    }

    pub fn graph(&self) -> &DirectedGraph {
        self.base.graph()
    }

    pub fn is_upper(&self, v: VertexId) -> bool {
        self.upper[v as usize]
    }

    pub fn upper(&self) -> Vec<VertexId> {
        self.graph().vertex_ids().filter(|&v| self.upper[v as usize]).collect()
    }

    pub fn lower(&self) -> Vec<VertexId> {
        self.graph().vertex_ids().filter(|&v| !self.upper[v as usize]).collect()
    }

    pub fn upper_names(&self) -> Vec<String> {
        self.upper().into_iter().map(|v| self.graph().vertex_name(v).to_string()).collect()
    }

    pub fn lower_names(&self) -> Vec<String> {
        self.lower().into_iter().map(|v| self.graph().vertex_name(v).to_string()).collect()
    }

    /// `s(E¹) = E^{0,0}` and `r(E¹) = E^{0,1}`.
    pub fn is_proper(&self) -> bool {
        let g = self.graph();
        g.vertex_ids().all(|v| {
            if self.upper[v as usize] {
                !g.out_edges(v).is_empty()
            } else {
                !g.in_edges(v).is_empty()
            }
        })
    }

    pub fn to_raw(&self) -> RawGraph {
        let mut raw = self.base.to_raw();
        raw.bipartite = Some((self.upper_names(), self.lower_names()));
        raw
    }

    pub fn same_structure(&self, other: &BipartiteSeparatedGraph) -> bool {
        self.upper == other.upper && self.base.same_structure(&other.base)
    }
}

/// A finite graph with positive integer edge weights and no isolated vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    graph: DirectedGraph,
    weights: Vec<u32>,
}

impl WeightedGraph {
    pub fn new(graph: DirectedGraph, weights: &[(String, u64)]) -> Result<Self, ValidationReport> {
        let mut raw = graph.to_raw(GraphKind::Weighted);
        raw.weights = weights.to_vec();
        match raw.build()? {
            GraphDoc::Weighted(w) => Ok(w),
            _ => unreachable!("kind is weighted"),
        }
    }

    pub(crate) fn from_checked(graph: DirectedGraph, weights: &[(String, u64)]) -> Self {
        let mut w = vec![0; graph.edge_count()];
        for (name, value) in weights {
            w[graph.edge_id(name).expect("validated edge") as usize] = *value as u32;
        }
        WeightedGraph { graph, weights: w }
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn weight(&self, e: EdgeId) -> u32 {
        self.weights[e as usize]
    }

    /// `ω(v)`: the largest weight leaving `v`, `0` at sinks.
    pub fn vertex_weight(&self, v: VertexId) -> u32 {
        self.graph.out_edges(v).iter().map(|&e| self.weight(e)).max().unwrap_or(0)
    }

    /// `ω(v)` by name.
    pub fn vertex_weight_of(&self, name: &str) -> Result<u32, UnknownVertex> {
        self.graph
            .vertex_id(name)
            .map(|v| self.vertex_weight(v))
            .ok_or_else(|| UnknownVertex(name.to_string()))
    }

    /// All edges leaving a vertex carry that vertex's weight.
    pub fn is_vertex_weighted(&self) -> bool {
        self.graph
            .edges()
            .iter()
            .enumerate()
            .all(|(e, edge)| self.weights[e] == self.vertex_weight(edge.source))
    }

    /// `ω^M`: every edge gets the weight of its source.
    pub fn max_completion(&self) -> WeightedGraph {
        let weights = self
            .graph
            .edges()
            .iter()
            .map(|e| self.vertex_weight(e.source))
            .collect();
        WeightedGraph {
            graph: self.graph.clone(),
            weights,
        }
    }

    pub fn weight_names(&self) -> Vec<(String, u64)> {
        self.graph
            .edges()
            .iter()
            .zip(&self.weights)
            .map(|(e, &w)| (e.name.clone(), w as u64))
            .collect()
    }

    pub fn to_raw(&self) -> RawGraph {
        let mut raw = self.graph.to_raw(GraphKind::Weighted);
        raw.weights = self.weight_names();
        raw
    }
}

/// Hex SHA-256 of the canonical text form.
pub fn fingerprint(raw: &RawGraph) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(text::print(raw).as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown vertex `{0}`")]
pub struct UnknownVertex(pub String);

impl fmt::Display for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", text::print(&self.to_raw(GraphKind::Separated)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loops(weights: &[(&str, u64)]) -> WeightedGraph {
        let g = DirectedGraph::new(
            ["v"],
            weights.iter().map(|(e, _)| (e.to_string(), "v".into(), "v".into())),
        )
        .unwrap();
        let w: Vec<_> = weights.iter().map(|(e, w)| (e.to_string(), *w)).collect();
        WeightedGraph::new(g, &w).unwrap()
    }

    #[test]
    fn vertex_weight_is_max_over_source_fiber() {
        let g = loops(&[("e", 2), ("f", 1)]);
        assert_eq!(g.vertex_weight_of("v").unwrap(), 2);
        assert!(!g.is_vertex_weighted());
        assert!(g.max_completion().is_vertex_weighted());
        assert_eq!(g.vertex_weight_of("u"), Err(UnknownVertex("u".into())));
    }

    #[test]
    fn sink_weight_is_zero() {
        let g = DirectedGraph::new(["v", "w"], [("e".into(), "v".into(), "w".into())]).unwrap();
        let g = WeightedGraph::new(g, &[("e".into(), 3)]).unwrap();
        assert_eq!(g.vertex_weight_of("w").unwrap(), 0);
        assert_eq!(g.vertex_weight_of("v").unwrap(), 3);
        assert!(g.is_vertex_weighted());
    }

    #[test]
    fn classify_small_graphs() {
        let g = DirectedGraph::new(["v", "w"], [("e".into(), "v".into(), "w".into())]).unwrap();
        let c = classify(&g);
        assert_eq!(c.regular, vec!["v"]);
        assert_eq!(c.sinks, vec!["w"]);
        assert!(c.isolated.is_empty());
        assert!(c.bipartite_able && c.row_finite && c.locally_finite);

        let l = DirectedGraph::new(["v"], [("e".into(), "v".into(), "v".into())]).unwrap();
        let c = classify(&l);
        assert_eq!(c.regular, vec!["v"]);
        assert!(c.sinks.is_empty());
        assert!(!c.bipartite_able);
        assert_eq!(classify(&l), c);

        let iso = DirectedGraph::new(["u", "v"], [("e".into(), "v".into(), "v".into())]).unwrap();
        assert_eq!(classify(&iso).isolated, vec!["u"]);
    }

    #[test]
    fn ids_follow_lexicographic_order() {
        let g = DirectedGraph::new(
            ["w", "v"],
            [
                ("f".into(), "v".into(), "w".into()),
                ("e".into(), "v".into(), "w".into()),
            ],
        )
        .unwrap();
        assert_eq!(g.vertex_names(), ["v", "w"]);
        assert_eq!(g.edge_name(0), "e");
        assert_eq!(g.out_edges(0), &[0, 1]);
        assert_eq!(g.descendants(0).len(), 2);
    }
}
