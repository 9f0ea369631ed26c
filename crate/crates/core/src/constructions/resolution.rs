use std::collections::HashSet;

use super::{resolution_edge_name, resolution_vertex_name, ConstructionError};
use crate::graphs::{
    BipartiteSeparatedGraph, EdgeId, GraphDoc, GraphKind, RawEdge, RawGraph, SeparatedGraph,
};

/// Default cap on the number of edges of a single resolution layer.
pub const DEFAULT_EDGE_CAP: u128 = 1_000_000;

/// `(|E₁^{0,1}|, |E₁¹|)` of the 1-step resolution, without building it.
pub fn predicted_resolution_size(g: &BipartiteSeparatedGraph) -> (u128, u128) {
    let sep = g.separated();
    let mut vertices = 0u128;
    let mut edges = 0u128;
    for u in g.upper() {
        let sets = sep.csets_at(u);
        let tuples = sets
            .iter()
            .fold(1u128, |acc, &x| acc.saturating_mul(sep.cset(x).edges.len() as u128));
        vertices = vertices.saturating_add(tuples);
        edges = edges.saturating_add(tuples.saturating_mul(sets.len() as u128));
    }
    (vertices, edges)
}

/// Calls `visit` on every tuple of `Π_j X_j`, first component slowest.
fn for_each_tuple(sets: &[&[EdgeId]], mut visit: impl FnMut(&[EdgeId])) {
    if sets.iter().any(|s| s.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; sets.len()];
    let mut tuple: Vec<EdgeId> = sets.iter().map(|s| s[0]).collect();
    loop {
        visit(&tuple);
        let mut j = sets.len();
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < sets[j].len() {
                tuple[j] = sets[j][idx[j]];
                break;
            }
            idx[j] = 0;
            tuple[j] = sets[j][0];
        }
    }
}

fn check_proper(g: &BipartiteSeparatedGraph) -> Result<(), ConstructionError> {
    let d = g.graph();
    for v in d.vertex_ids() {
        let empty = if g.is_upper(v) {
            d.out_edges(v).is_empty()
        } else {
            d.in_edges(v).is_empty()
        };
        if empty {
            return Err(ConstructionError::NotProper(d.vertex_name(v).to_string()));
        }
    }
    Ok(())
}

/// The 1-step resolution `(E₁, C¹)` with the default edge cap.
pub fn one_step_resolution(g: &BipartiteSeparatedGraph) -> Result<BipartiteSeparatedGraph, ConstructionError> {
    one_step_resolution_capped(g, DEFAULT_EDGE_CAP)
}

/// The 1-step resolution `(E₁, C¹)`. Lower vertices are `v(x₁,…,x_k)` over
/// `Π_j X_j^u` with the `X_j^u` in their stored order, and
/// `C¹_w = {X(x) : x ∈ r⁻¹(w)}` in edge order.
pub fn one_step_resolution_capped(
    g: &BipartiteSeparatedGraph,
    cap: u128,
) -> Result<BipartiteSeparatedGraph, ConstructionError> {
    resolve(g, cap).map(|(r, _)| r)
}

/// Names in the resolution attached to the vertices and edges of `E`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResolutionIndex {
    /// Per vertex of `E`: the lower vertices `v(x₁,…,x_k)` it splits into
    /// (empty for lower vertices).
    pub tuples: Vec<Vec<String>>,
    /// Per edge `x` of `E`: the edges of `X(x)`.
    pub alphas: Vec<Vec<String>>,
}

/// The resolution together with its [`ResolutionIndex`].
pub fn one_step_resolution_indexed(
    g: &BipartiteSeparatedGraph,
) -> Result<(BipartiteSeparatedGraph, ResolutionIndex), ConstructionError> {
    resolve(g, DEFAULT_EDGE_CAP)
}

fn resolve(
    g: &BipartiteSeparatedGraph,
    cap: u128,
) -> Result<(BipartiteSeparatedGraph, ResolutionIndex), ConstructionError> {
    check_proper(g)?;
    let (_, edge_total) = predicted_resolution_size(g);
    if edge_total > cap {
        return Err(ConstructionError::ResourceLimit {
            layer: 1,
            edges: edge_total,
            cap,
        });
    }
    let sep = g.separated();
    let d = g.graph();
    let upper1 = g.lower_names();
    let mut lower1 = Vec::new();
    let mut edges = Vec::new();
    // X(x) for every edge x of E, filled in tuple order.
    let mut x_sets: Vec<Vec<String>> = vec![Vec::new(); d.edge_count()];
    let mut tuples: Vec<Vec<String>> = vec![Vec::new(); d.vertex_count()];
    for u in g.upper() {
        let sets: Vec<&[EdgeId]> = sep.csets_at(u).iter().map(|&x| sep.cset(x).edges.as_slice()).collect();
        for_each_tuple(&sets, |tuple| {
            let names: Vec<&str> = tuple.iter().map(|&e| d.edge_name(e)).collect();
            let target = resolution_vertex_name(&names);
            for (i, &x) in tuple.iter().enumerate() {
                let rest: Vec<&str> = names.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, n)| *n).collect();
                let name = resolution_edge_name(names[i], &rest);
                x_sets[x as usize].push(name.clone());
                edges.push(RawEdge {
                    name,
                    source: d.vertex_name(d.range(x)).to_string(),
                    range: target.clone(),
                });
            }
            tuples[u as usize].push(target.clone());
            lower1.push(target);
        });
    }
    let mut separation = Vec::new();
    for w in g.lower() {
        let sets: Vec<Vec<String>> = d.in_edges(w).iter().map(|&x| x_sets[x as usize].clone()).collect();
        separation.push((d.vertex_name(w).to_string(), sets));
    }
    let mut seen = HashSet::new();
    for name in upper1.iter().chain(&lower1) {
        if !seen.insert(name.as_str()) {
            return Err(ConstructionError::NameCollision(name.clone()));
        }
    }
    let raw = RawGraph {
        kind: GraphKind::Separated,
        vertices: upper1.iter().chain(&lower1).cloned().collect(),
        edges,
        separation,
        bipartite: Some((upper1, lower1)),
        ..RawGraph::default()
    };
    let index = ResolutionIndex {
        tuples,
        alphas: x_sets,
    };
    Ok((super::build_bipartite(raw)?, index))
}

/// Layers `(E_n, Cⁿ)` and unions `(F_n, Dⁿ)` of a separated Bratteli diagram.
#[derive(Clone, Debug)]
pub struct BratteliTower {
    pub layers: Vec<BipartiteSeparatedGraph>,
    pub unions: Vec<SeparatedGraph>,
}

impl BratteliTower {
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }
}

pub fn bratteli(g: &BipartiteSeparatedGraph, depth: usize) -> Result<BratteliTower, ConstructionError> {
    bratteli_capped(g, depth, DEFAULT_EDGE_CAP)
}

pub fn bratteli_capped(
    g: &BipartiteSeparatedGraph,
    depth: usize,
    cap: u128,
) -> Result<BratteliTower, ConstructionError> {
    check_proper(g)?;
    let mut layers = vec![g.clone()];
    for n in 1..=depth {
        let prev = layers.last().expect("nonempty");
        let next = one_step_resolution_capped(prev, cap).map_err(|e| match e {
            ConstructionError::ResourceLimit { edges, cap, .. } => {
                ConstructionError::ResourceLimit { layer: n, edges, cap }
            }
            other => other,
        })?;
        layers.push(next);
    }
    let mut unions = Vec::with_capacity(layers.len());
    let mut acc = RawGraph {
        kind: GraphKind::Separated,
        ..RawGraph::default()
    };
    for (n, layer) in layers.iter().enumerate() {
        let raw = layer.to_raw();
        let (upper, lower) = raw.bipartite.expect("bipartite layer");
        if n == 0 {
            acc.vertices.extend(upper);
        }
        acc.vertices.extend(lower);
        acc.edges.extend(raw.edges);
        acc.separation.extend(raw.separation);
        unions.push(union_graph(&acc)?);
    }
    Ok(BratteliTower { layers, unions })
}

fn union_graph(raw: &RawGraph) -> Result<SeparatedGraph, ConstructionError> {
    let mut seen = HashSet::new();
    for name in raw.vertices.iter().chain(raw.edges.iter().map(|e| &e.name)) {
        if !seen.insert(name.as_str()) {
            return Err(ConstructionError::NameCollision(name.clone()));
        }
    }
    Ok(match raw.build()? {
        GraphDoc::Separated(s) => s,
        GraphDoc::Bipartite(b) => b.into_separated(),
        GraphDoc::Weighted(_) => unreachable!("kind is separated"),
    })
}

/// Upper vertices of layer `n + 1` are the lower vertices of layer `n`.
pub fn layers_chain(tower: &BratteliTower) -> bool {
    tower
        .layers
        .windows(2)
        .all(|w| w[0].lower_names() == w[1].upper_names())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::build_emn;

    #[test]
    fn e23_resolution() {
        let g = build_emn(2, 3).unwrap();
        let r = one_step_resolution(&g).unwrap();
        assert_eq!(r.upper_names(), ["w"]);
        assert_eq!(r.lower().len(), 6);
        assert_eq!(r.graph().edge_count(), 12);
        let sep = r.separated();
        let w = r.graph().vertex_id("w").unwrap();
        let mut sizes: Vec<usize> = sep.csets_at(w).iter().map(|&x| sep.cset(x).edges.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 2, 3, 3]);
        assert!(r.is_proper());
        assert!(r.graph().vertex_id("v(e2,f1)").is_some());
        assert!(r.graph().edge_id("a^f1(e2)").is_some());
        assert_eq!(predicted_resolution_size(&g), (6, 12));
    }

    #[test]
    fn singleton_separation_degenerates() {
        let d = crate::graphs::DirectedGraph::new(
            ["u", "a", "b"],
            [("x".into(), "u".into(), "a".into()), ("y".into(), "u".into(), "b".into())],
        )
        .unwrap();
        let g = BipartiteSeparatedGraph::infer(SeparatedGraph::trivial(d)).unwrap();
        let r = one_step_resolution(&g).unwrap();
        assert_eq!(r.lower_names(), ["v(x)", "v(y)"]);
        for v in r.lower() {
            assert_eq!(r.graph().in_edges(v).len(), 1);
        }
    }

    #[test]
    fn tower_depths() {
        let g = build_emn(1, 2).unwrap();
        let t = bratteli(&g, 0).unwrap();
        assert_eq!(t.layers.len(), 1);
        assert_eq!(t.unions[0], g.separated().clone());
        let t = bratteli(&g, 2).unwrap();
        assert!(layers_chain(&t));
        assert_eq!(t.layers[1].lower().len(), 2);
        let f2 = &t.unions[2];
        let total: usize = t.layers.iter().map(|l| l.graph().edge_count()).sum();
        assert_eq!(f2.graph().edge_count(), total);
    }

    #[test]
    fn cap_is_reported() {
        let g = build_emn(2, 3).unwrap();
        let err = bratteli_capped(&g, 3, 100).unwrap_err();
        assert!(matches!(err, ConstructionError::ResourceLimit { .. }));
    }
}
