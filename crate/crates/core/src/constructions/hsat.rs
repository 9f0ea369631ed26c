use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::ConstructionError;
use crate::graphs::{SeparatedGraph, VertexId};

/// A hereditary C-saturated vertex set, stored as sorted ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HSatSet {
    vertices: Vec<VertexId>,
}

impl HSatSet {
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn names(&self, g: &SeparatedGraph) -> Vec<String> {
        self.vertices.iter().map(|&v| g.graph().vertex_name(v).to_string()).collect()
    }

    /// Builds the set after checking it, by vertex names.
    pub fn from_names<S: AsRef<str>>(g: &SeparatedGraph, names: &[S]) -> Result<Self, ConstructionError> {
        let set = ids_of(g, names)?;
        let check = is_hsat(g, &set);
        if !check.is_hsat() {
            return Err(ConstructionError::NotHereditarySaturated(check.describe()));
        }
        Ok(HSatSet {
            vertices: set.into_iter().collect(),
        })
    }
}

impl PartialOrd for HSatSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by size, then by sorted ids.
impl Ord for HSatSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.vertices.len(), &self.vertices).cmp(&(other.vertices.len(), &other.vertices))
    }
}

pub fn ids_of<S: AsRef<str>>(g: &SeparatedGraph, names: &[S]) -> Result<BTreeSet<VertexId>, ConstructionError> {
    names
        .iter()
        .map(|n| {
            g.graph()
                .vertex_id(n.as_ref())
                .ok_or_else(|| ConstructionError::UnknownVertex(n.as_ref().to_string()))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationWitness {
    pub vertex: String,
    pub set: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HsatCheck {
    pub hereditary: bool,
    pub saturated: bool,
    /// An edge leaving `H` whose range is outside `H`.
    pub hereditary_witness: Option<String>,
    /// A vertex outside `H` with a C-set ranging inside `H`.
    pub saturation_witness: Option<SaturationWitness>,
}

impl HsatCheck {
    pub fn is_hsat(&self) -> bool {
        self.hereditary && self.saturated
    }

    fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(e) = &self.hereditary_witness {
            parts.push(format!("edge `{e}` leaves the set"));
        }
        if let Some(w) = &self.saturation_witness {
            parts.push(format!("`{}` has [{}] ranging inside the set", w.vertex, w.set.join(" ")));
        }
        parts.join("; ")
    }
}

/// Checks both conditions; a path leaving `H` always contains an edge
/// leaving `H`, so one edge suffices as a hereditary witness.
pub fn is_hsat(g: &SeparatedGraph, h: &BTreeSet<VertexId>) -> HsatCheck {
    let d = g.graph();
    let hereditary_witness = d
        .edges()
        .iter()
        .find(|e| h.contains(&e.source) && !h.contains(&e.range))
        .map(|e| e.name.clone());
    let saturation_witness = saturating_set(g, h).map(|(v, x)| SaturationWitness {
        vertex: d.vertex_name(v).to_string(),
        set: g.cset_names(x),
    });
    HsatCheck {
        hereditary: hereditary_witness.is_none(),
        saturated: saturation_witness.is_none(),
        hereditary_witness,
        saturation_witness,
    }
}

fn saturating_set(g: &SeparatedGraph, h: &BTreeSet<VertexId>) -> Option<(VertexId, u32)> {
    let d = g.graph();
    for v in d.vertex_ids().filter(|v| !h.contains(v)) {
        for &x in g.csets_at(v) {
            if g.cset(x).edges.iter().all(|&e| h.contains(&d.range(e))) {
                return Some((v, x));
            }
        }
    }
    None
}

fn closure_ids(g: &SeparatedGraph, h: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    let d = g.graph();
    let mut set = h.clone();
    loop {
        let mut queue: VecDeque<VertexId> = set.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            for &e in d.out_edges(v) {
                if set.insert(d.range(e)) {
                    queue.push_back(d.range(e));
                }
            }
        }
        let mut grew = false;
        while let Some((v, _)) = saturating_set(g, &set) {
            set.insert(v);
            grew = true;
        }
        if !grew {
            return set;
        }
    }
}

/// The least hereditary C-saturated superset of `h`.
pub fn hsat_closure(g: &SeparatedGraph, h: &BTreeSet<VertexId>) -> HSatSet {
    HSatSet {
        vertices: closure_ids(g, h).into_iter().collect(),
    }
}

/// All hereditary C-saturated sets in canonical order. Uses the raw scan up
/// to 20 vertices and closure search above that.
pub fn enumerate_hsat(g: &SeparatedGraph) -> Vec<HSatSet> {
    if g.graph().vertex_count() <= 20 {
        enumerate_hsat_scan(g)
    } else {
        enumerate_hsat_closure(g)
    }
}

/// Checks all `2^|E⁰|` subsets.
pub fn enumerate_hsat_scan(g: &SeparatedGraph) -> Vec<HSatSet> {
    let n = g.graph().vertex_count();
    assert!(n < 64, "raw scan is limited to fewer than 64 vertices");
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let set: BTreeSet<VertexId> = (0..n as u32).filter(|&v| mask >> v & 1 == 1).collect();
        if is_hsat(g, &set).is_hsat() {
            out.push(HSatSet {
                vertices: set.into_iter().collect(),
            });
        }
    }
    out.sort();
    out
}

/// Breadth-first search from `closure(∅)` adding one vertex at a time.
/// Every hereditary C-saturated `T ⊋ S` contains `closure(S ∪ {v})` for any
/// `v ∈ T ∖ S`, so every such set is reached.
pub fn enumerate_hsat_closure(g: &SeparatedGraph) -> Vec<HSatSet> {
    let start = closure_ids(g, &BTreeSet::new());
    let mut seen: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.iter().copied().collect());
    queue.push_back(start);
    while let Some(s) = queue.pop_front() {
        for v in g.graph().vertex_ids().filter(|v| !s.contains(v)) {
            let mut t = s.clone();
            t.insert(v);
            let t = closure_ids(g, &t);
            if seen.insert(t.iter().copied().collect()) {
                queue.push_back(t);
            }
        }
    }
    let mut out: Vec<HSatSet> = seen.into_iter().map(|vertices| HSatSet { vertices }).collect();
    out.sort();
    out
}

/// `(E/H, C/H)`: drop `H` and every edge into `H`.
pub fn quotient_graph(g: &SeparatedGraph, h: &HSatSet) -> Result<SeparatedGraph, ConstructionError> {
    let set: BTreeSet<VertexId> = h.vertices.iter().copied().collect();
    let check = is_hsat(g, &set);
    if !check.is_hsat() {
        return Err(ConstructionError::NotHereditarySaturated(check.describe()));
    }
    let d = g.graph();
    let mut raw = g.to_raw();
    raw.vertices.retain(|v| !set.contains(&d.vertex_id(v).expect("own vertex")));
    raw.edges.retain(|e| !set.contains(&d.vertex_id(&e.range).expect("own vertex")));
    let edge_kept = |e: &String| !set.contains(&d.range(d.edge_id(e).expect("own edge")));
    raw.separation = raw
        .separation
        .into_iter()
        .filter(|(v, _)| !set.contains(&d.vertex_id(v).expect("own vertex")))
        .map(|(v, sets)| {
            let sets = sets
                .into_iter()
                .map(|s| s.into_iter().filter(edge_kept).collect::<Vec<_>>())
                .collect();
            (v, sets)
        })
        .collect();
    Ok(match raw.build()? {
        crate::graphs::GraphDoc::Separated(s) => s,
        crate::graphs::GraphDoc::Bipartite(b) => b.into_separated(),
        crate::graphs::GraphDoc::Weighted(_) => unreachable!("kind is separated"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_emn, separated_of_weighted, tests::loops};

    fn ids(g: &SeparatedGraph, names: &[&str]) -> BTreeSet<VertexId> {
        ids_of(g, names).unwrap()
    }

    #[test]
    fn e23_sets() {
        let g = build_emn(2, 3).unwrap().into_separated();
        let c = is_hsat(&g, &ids(&g, &["w"]));
        assert!(c.hereditary && !c.saturated);
        assert_eq!(c.saturation_witness.unwrap().vertex, "v");
        assert!(is_hsat(&g, &BTreeSet::new()).is_hsat());
        assert!(is_hsat(&g, &ids(&g, &["v", "w"])).is_hsat());
        let c = is_hsat(&g, &ids(&g, &["v"]));
        assert!(!c.hereditary);
        assert_eq!(hsat_closure(&g, &ids(&g, &["w"])).len(), 2);
        assert_eq!(enumerate_hsat(&g).len(), 2);
    }

    #[test]
    fn l22_sets() {
        let g = separated_of_weighted(&loops(&[2, 2])).unwrap().into_separated();
        assert!(is_hsat(&g, &ids(&g, &["v(e1,1)"])).is_hsat());
        let scan = enumerate_hsat_scan(&g);
        assert_eq!(scan.len(), 8);
        assert_eq!(scan, enumerate_hsat_closure(&g));
        assert!(scan[0].is_empty());
        assert_eq!(scan[7].len(), 5);
    }

    #[test]
    fn quotient_by_empty_is_identity() {
        let g = build_emn(2, 3).unwrap().into_separated();
        let q = quotient_graph(&g, &hsat_closure(&g, &BTreeSet::new())).unwrap();
        assert_eq!(q, g);
    }

    #[test]
    fn quotient_rejects_bad_sets() {
        let g = build_emn(2, 3).unwrap().into_separated();
        assert!(HSatSet::from_names(&g, &["w"]).is_err());
        assert!(HSatSet::from_names(&g, &["zz"]).is_err());
    }
}
