//! Graph-to-graph constructions: `E(m,n)`, the separated graphs attached to
//! weighted graphs, 1-step resolutions and their Bratteli towers, and the
//! hereditary C-saturated subset machinery.
//!
//! Generated names are canonical strings so that graphs built on different
//! runs compare equal:
//!
//! | object | name |
//! |---|---|
//! | `v₀`, `v₁` in `E(ω)` | `v_0`, `v_1` |
//! | `ẽ`, `h(v,i)` in `E(ω)` | `~e`, `h(v,i)` |
//! | resolution vertex `v(x₁,…,x_k)` | `v(x1,...,xk)` |
//! | resolution edge `α^{x_i}(…x̂_i…)` | `a^xi(x1,...,xk)` without `xi` |
//! | `v(e,i)`, `α^i(e)`, `α^e(i)` in `E(ω)₁` | `v(e,i)`, `a^i(e)`, `a^e(i)` |

mod hsat;
mod resolution;
mod sweep;

use std::collections::HashMap;

use crate::graphs::{
    BipartiteSeparatedGraph, GraphDoc, GraphKind, RawEdge, RawGraph, ValidationReport, WeightedGraph,
};

pub use hsat::{
    enumerate_hsat, enumerate_hsat_closure, enumerate_hsat_scan, hsat_closure, ids_of, is_hsat, quotient_graph,
    HSatSet, HsatCheck, SaturationWitness,
};
pub use resolution::{
    bratteli, bratteli_capped, layers_chain, one_step_resolution, one_step_resolution_capped, one_step_resolution_indexed,
    predicted_resolution_size, BratteliTower, ResolutionIndex, DEFAULT_EDGE_CAP,
};
pub use sweep::{emn_sweep, small_weighted_graphs, standard_sweep};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("graph is not vertex weighted: edge `{edge}` has weight {weight} but its source has weight {vertex_weight}")]
    NotVertexWeighted { edge: String, weight: u32, vertex_weight: u32 },
    #[error("graph is not proper bipartite: vertex `{0}` has no edges on its level")]
    NotProper(String),
    #[error("layer {layer} would have {edges} edges, over the cap of {cap}")]
    ResourceLimit { layer: usize, edges: u128, cap: u128 },
    #[error("generated name `{0}` collides with an existing name")]
    NameCollision(String),
    #[error("vertex set is not hereditary and C-saturated: {0}")]
    NotHereditarySaturated(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("constructed graph failed validation:\n{0}")]
    Invalid(#[from] ValidationReport),
}

fn build_bipartite(raw: RawGraph) -> Result<BipartiteSeparatedGraph, ConstructionError> {
    let mut seen = std::collections::HashSet::new();
    for v in &raw.vertices {
        if !seen.insert(v.as_str()) {
            return Err(ConstructionError::NameCollision(v.clone()));
        }
    }
    match raw.build()? {
        GraphDoc::Bipartite(b) => Ok(b),
        _ => unreachable!("levels are always given"),
    }
}

fn edge(name: String, source: &str, range: &str) -> RawEdge {
    RawEdge {
        name,
        source: source.to_string(),
        range: range.to_string(),
    }
}

/// The separated graph `E(m,n)`: vertices `v`, `w`; edges `e1..en` and
/// `f1..fm` from `v` to `w`; `C_v = {X, Y}` with `X = {e_i}`, `Y = {f_j}`.
pub fn build_emn(m: usize, n: usize) -> Result<BipartiteSeparatedGraph, ConstructionError> {
    if m < 1 || n < m {
        return Err(ConstructionError::InvalidParameters(format!(
            "E(m,n) needs 1 ≤ m ≤ n, got m={m}, n={n}"
        )));
    }
    let xs: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
    let ys: Vec<String> = (1..=m).map(|j| format!("f{j}")).collect();
    let raw = RawGraph {
        kind: GraphKind::Separated,
        vertices: vec!["v".into(), "w".into()],
        edges: xs.iter().chain(&ys).map(|e| edge(e.clone(), "v", "w")).collect(),
        separation: vec![("v".into(), vec![xs, ys])],
        bipartite: Some((vec!["v".into()], vec!["w".into()])),
        ..RawGraph::default()
    };
    build_bipartite(raw)
}

pub fn upper_name(v: &str) -> String {
    format!("{v}_0")
}

pub fn lower_name(v: &str) -> String {
    format!("{v}_1")
}

pub fn tilde_name(e: &str) -> String {
    format!("~{e}")
}

pub fn h_name(v: &str, i: u32) -> String {
    format!("h({v},{i})")
}

pub fn resolution_vertex_name(tuple: &[&str]) -> String {
    format!("v({})", tuple.join(","))
}

pub fn resolution_edge_name(slot: &str, rest: &[&str]) -> String {
    format!("a^{slot}({})", rest.join(","))
}

pub fn weighted_vertex_name(e: &str, i: u32) -> String {
    format!("v({e},{i})")
}

/// `α^i(e)`, an edge of `X(s(e), i)`.
pub fn alpha_level_name(i: u32, e: &str) -> String {
    format!("a^{i}({e})")
}

/// `α^e(i)`, an edge of `X(e)`.
pub fn alpha_edge_name(e: &str, i: u32) -> String {
    format!("a^{e}({i})")
}

fn require_vertex_weighted(g: &WeightedGraph) -> Result<(), ConstructionError> {
    let d = g.graph();
    for (id, e) in d.edges().iter().enumerate() {
        let w = g.weight(id as u32);
        let vw = g.vertex_weight(e.source);
        if w != vw {
            return Err(ConstructionError::NotVertexWeighted {
                edge: e.name.clone(),
                weight: w,
                vertex_weight: vw,
            });
        }
    }
    Ok(())
}

/// `(E(ω), C(ω))` of a vertex weighted graph: upper `v_0` for regular `v`,
/// lower `v_1` for every `v`, edges `~e: s(e)_0 → r(e)_1` and
/// `h(v,i): v_0 → v_1`, and `C_{v_0} = {X_v, Y_v}`.
pub fn separated_of_vertex_weighted(g: &WeightedGraph) -> Result<BipartiteSeparatedGraph, ConstructionError> {
    require_vertex_weighted(g)?;
    let d = g.graph();
    let mut raw = RawGraph {
        kind: GraphKind::Separated,
        ..RawGraph::default()
    };
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for v in d.vertex_ids() {
        let name = d.vertex_name(v);
        if !d.is_sink(v) {
            upper.push(upper_name(name));
        }
        lower.push(lower_name(name));
    }
    raw.vertices = upper.iter().chain(&lower).cloned().collect();
    for e in d.edges() {
        raw.edges.push(edge(
            tilde_name(&e.name),
            &upper_name(d.vertex_name(e.source)),
            &lower_name(d.vertex_name(e.range)),
        ));
    }
    for v in d.vertex_ids().filter(|&v| !d.is_sink(v)) {
        let name = d.vertex_name(v);
        let xs: Vec<String> = d.out_edges(v).iter().map(|&e| tilde_name(d.edge_name(e))).collect();
        let ys: Vec<String> = (1..=g.vertex_weight(v)).map(|i| h_name(name, i)).collect();
        for h in &ys {
            raw.edges.push(edge(h.clone(), &upper_name(name), &lower_name(name)));
        }
        raw.separation.push((upper_name(name), vec![xs, ys]));
    }
    raw.bipartite = Some((upper, lower));
    build_bipartite(raw)
}

/// `(E(ω)₁, C(ω)¹)` of a weighted graph: upper `E⁰`, lower `v(e,i)` for
/// `i ≤ ω(e)`, with `C_v = {X(v,1..ω(v))} ∪ {X(e) : r(e) = v}`.
pub fn separated_of_weighted(g: &WeightedGraph) -> Result<BipartiteSeparatedGraph, ConstructionError> {
    let d = g.graph();
    let mut raw = RawGraph {
        kind: GraphKind::Separated,
        ..RawGraph::default()
    };
    let upper: Vec<String> = d.vertex_names().to_vec();
    let mut lower = Vec::new();
    for (id, e) in d.edges().iter().enumerate() {
        for i in 1..=g.weight(id as u32) {
            let target = weighted_vertex_name(&e.name, i);
            raw.edges.push(edge(alpha_level_name(i, &e.name), d.vertex_name(e.source), &target));
            raw.edges.push(edge(alpha_edge_name(&e.name, i), d.vertex_name(e.range), &target));
            lower.push(target);
        }
    }
    for v in d.vertex_ids() {
        let mut sets = Vec::new();
        for i in 1..=g.vertex_weight(v) {
            sets.push(
                d.out_edges(v)
                    .iter()
                    .filter(|&&e| g.weight(e) >= i)
                    .map(|&e| alpha_level_name(i, d.edge_name(e)))
                    .collect::<Vec<_>>(),
            );
        }
        for &e in d.in_edges(v) {
            sets.push((1..=g.weight(e)).map(|i| alpha_edge_name(d.edge_name(e), i)).collect());
        }
        if !sets.is_empty() {
            raw.separation.push((d.vertex_name(v).to_string(), sets));
        }
    }
    raw.vertices = upper.iter().chain(&lower).cloned().collect();
    raw.bipartite = Some((upper, lower));
    build_bipartite(raw)
}

/// The set `H = {v(ẽ, h(s(e), j)) : ω(e) < j ≤ ω(s(e))}` inside the
/// resolution of `E(ω^M)`, named as [`one_step_resolution`] names it.
pub fn excess_weight_vertices(g: &WeightedGraph) -> Vec<String> {
    let d = g.graph();
    let mut out = Vec::new();
    for (id, e) in d.edges().iter().enumerate() {
        let s = d.vertex_name(e.source);
        for j in g.weight(id as u32) + 1..=g.vertex_weight(e.source) {
            out.push(resolution_vertex_name(&[&tilde_name(&e.name), &h_name(s, j)]));
        }
    }
    out
}

/// Translation tables from the names used in the resolution of `E(ω^M)` to
/// the short names used by [`separated_of_weighted`].
pub fn resolution_to_weighted_names(g: &WeightedGraph) -> (HashMap<String, String>, HashMap<String, String>) {
    let d = g.graph();
    let mut vertices = HashMap::new();
    let mut edges = HashMap::new();
    for v in d.vertex_names() {
        vertices.insert(lower_name(v), v.clone());
    }
    for e in d.edges() {
        let s = d.vertex_name(e.source);
        let te = tilde_name(&e.name);
        for i in 1..=g.vertex_weight(e.source) {
            let h = h_name(s, i);
            vertices.insert(resolution_vertex_name(&[&te, &h]), weighted_vertex_name(&e.name, i));
            edges.insert(resolution_edge_name(&te, &[&h]), alpha_edge_name(&e.name, i));
            edges.insert(resolution_edge_name(&h, &[&te]), alpha_level_name(i, &e.name));
        }
    }
    (vertices, edges)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graphs::DirectedGraph;

    pub(crate) fn loops(weights: &[u64]) -> WeightedGraph {
        let names: Vec<String> = (0..weights.len()).map(|i| format!("e{}", i + 1)).collect();
        let g = DirectedGraph::new(["v"], names.iter().map(|e| (e.clone(), "v".into(), "v".into()))).unwrap();
        let w: Vec<_> = names.into_iter().zip(weights.iter().copied()).collect();
        WeightedGraph::new(g, &w).unwrap()
    }

    #[test]
    fn emn_counts() {
        let g = build_emn(2, 3).unwrap();
        assert_eq!(g.graph().edge_count(), 5);
        let sizes: Vec<usize> = g.separated().csets().iter().map(|x| x.edges.len()).collect();
        assert_eq!(sizes, vec![3, 2]);
        let g = build_emn(1, 1).unwrap();
        assert!(g.separated().csets().iter().all(|x| x.edges.len() == 1));
        assert_eq!(build_emn(3, 5).unwrap().graph().edge_count(), 8);
        assert!(build_emn(0, 2).is_err());
        assert!(build_emn(3, 2).is_err());
        assert!(g.is_proper());
    }

    #[test]
    fn vertex_weighted_loops() {
        let g = separated_of_vertex_weighted(&loops(&[2, 2])).unwrap();
        assert_eq!(g.upper_names(), ["v_0"]);
        assert_eq!(g.lower_names(), ["v_1"]);
        let sep = g.separated();
        let sets: Vec<Vec<String>> = sep.csets_at(0).iter().map(|&x| sep.cset_names(x)).collect();
        assert_eq!(sets, vec![vec!["~e1", "~e2"], vec!["h(v,1)", "h(v,2)"]]);
        assert!(g.is_proper());
    }

    #[test]
    fn lmn_graph_matches_emn() {
        // L(m,n): one vertex, n loops of weight m.
        let (m, n) = (2usize, 3usize);
        let g = separated_of_vertex_weighted(&loops(&vec![m as u64; n])).unwrap();
        let emn = build_emn(m, n).unwrap();
        let renamed = g
            .separated()
            .renamed(
                |v| if v == "v_0" { "v".into() } else { "w".into() },
                |e| {
                    if let Some(rest) = e.strip_prefix("~e") {
                        format!("e{rest}")
                    } else {
                        let i = e.trim_start_matches("h(v,").trim_end_matches(')');
                        format!("f{i}")
                    }
                },
            )
            .unwrap();
        assert!(renamed.same_structure(emn.separated()));
    }

    #[test]
    fn sinks_have_no_upper_copy() {
        let d = DirectedGraph::new(["v", "w"], [("e".into(), "v".into(), "w".into())]).unwrap();
        let g = WeightedGraph::new(d, &[("e".into(), 1)]).unwrap();
        let s = separated_of_vertex_weighted(&g).unwrap();
        assert_eq!(s.upper_names(), ["v_0"]);
        assert_eq!(s.lower_names(), ["v_1", "w_1"]);
    }

    #[test]
    fn not_vertex_weighted_is_rejected() {
        assert!(matches!(
            separated_of_vertex_weighted(&loops(&[2, 1])),
            Err(ConstructionError::NotVertexWeighted { .. })
        ));
    }

    #[test]
    fn weighted_full_lmn_counts() {
        let (m, n) = (3u32, 2usize);
        let g = separated_of_weighted(&loops(&vec![m as u64; n])).unwrap();
        assert_eq!(g.lower().len(), (m as usize) * n);
        let sep = g.separated();
        let v = g.graph().vertex_id("v").unwrap();
        assert_eq!(sep.csets_at(v).len(), m as usize + n);
        let sizes: Vec<usize> = sep.csets_at(v).iter().map(|&x| sep.cset(x).edges.len()).collect();
        assert_eq!(sizes, vec![n, n, n, m as usize, m as usize]);
    }

    #[test]
    fn weighted_minimal_partition_counts() {
        // (n, 1^{m-1}) with m = 3, n = 4: weights (3,1,1,1).
        let g = separated_of_weighted(&loops(&[3, 1, 1, 1])).unwrap();
        assert_eq!(g.lower().len(), 3 + 4 - 1);
        assert!(g.is_proper());
    }
}
