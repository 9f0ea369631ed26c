use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{BipartiteSeparatedGraph, DirectedGraph, SeparatedGraph, WeightedGraph};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    #[default]
    Separated,
    Weighted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RawEdge {
    pub name: String,
    pub source: String,
    pub range: String,
}

/// A graph description as written by a user, before any checking.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RawGraph {
    pub kind: GraphKind,
    pub vertices: Vec<String>,
    pub edges: Vec<RawEdge>,
    pub separation: Vec<(String, Vec<Vec<String>>)>,
    pub weights: Vec<(String, u64)>,
    pub bipartite: Option<(Vec<String>, Vec<String>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    DuplicateVertex { vertex: String },
    DuplicateEdge { edge: String },
    DanglingEndpoint { edge: String, vertex: String },
    UnknownSeparationVertex { vertex: String },
    DuplicateSeparation { vertex: String },
    EmptySeparationSet { vertex: String },
    ForeignSeparationEdge { vertex: String, edge: String },
    SeparationOverlap { vertex: String, edge: String },
    SeparationDoesNotCover { vertex: String, missing: Vec<String> },
    SeparationOnWeightedGraph { vertex: String },
    WeightOnSeparatedGraph { edge: String },
    UnknownWeightedEdge { edge: String },
    DuplicateWeight { edge: String },
    MissingWeight { edge: String },
    NonPositiveWeight { edge: String },
    IsolatedVertex { vertex: String },
    UnknownLevelVertex { vertex: String },
    LevelOverlap { vertex: String },
    LevelMissing { vertex: String },
    EdgeAgainstLevels { edge: String },
    BipartiteOnWeightedGraph,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            DuplicateVertex { vertex } => write!(f, "duplicate vertex `{vertex}`"),
            DuplicateEdge { edge } => write!(f, "duplicate edge `{edge}`"),
            DanglingEndpoint { edge, vertex } => {
                write!(f, "edge `{edge}` names unknown vertex `{vertex}`")
            }
            UnknownSeparationVertex { vertex } => {
                write!(f, "separation given for unknown vertex `{vertex}`")
            }
            DuplicateSeparation { vertex } => write!(f, "separation of `{vertex}` given twice"),
            EmptySeparationSet { vertex } => write!(f, "empty set in separation of `{vertex}`"),
            ForeignSeparationEdge { vertex, edge } => {
                write!(f, "separation of `{vertex}` lists `{edge}`, which does not start at `{vertex}`")
            }
            SeparationOverlap { vertex, edge } => {
                write!(f, "edge `{edge}` appears in more than one set of `{vertex}`")
            }
            SeparationDoesNotCover { vertex, missing } => write!(
                f,
                "separation does not cover s⁻¹({vertex}): missing {}",
                missing.join(", ")
            ),
            SeparationOnWeightedGraph { vertex } => {
                write!(f, "separation line for `{vertex}` in a weighted graph")
            }
            WeightOnSeparatedGraph { edge } => write!(f, "weight for `{edge}` in a separated graph"),
            UnknownWeightedEdge { edge } => write!(f, "weight given for unknown edge `{edge}`"),
            DuplicateWeight { edge } => write!(f, "weight of `{edge}` given twice"),
            MissingWeight { edge } => write!(f, "edge `{edge}` has no weight"),
            NonPositiveWeight { edge } => write!(f, "weight of `{edge}` is not a positive integer"),
            IsolatedVertex { vertex } => write!(f, "isolated vertex `{vertex}`"),
            UnknownLevelVertex { vertex } => write!(f, "bipartite level names unknown vertex `{vertex}`"),
            LevelOverlap { vertex } => write!(f, "vertex `{vertex}` is in both levels"),
            LevelMissing { vertex } => write!(f, "vertex `{vertex}` is in neither level"),
            EdgeAgainstLevels { edge } => {
                write!(f, "edge `{edge}` does not go from the upper to the lower level")
            }
            BipartiteOnWeightedGraph => write!(f, "bipartite line in a weighted graph"),
        }
    }
}

/// Every invariant violated by a graph description; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

pub(crate) fn validate_directed(g: &RawGraph) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut seen = BTreeSet::new();
    for v in &g.vertices {
        if !seen.insert(v.as_str()) {
            report.push(Violation::DuplicateVertex { vertex: v.clone() });
        }
    }
    let mut edges = BTreeSet::new();
    for e in &g.edges {
        if !edges.insert(e.name.as_str()) {
            report.push(Violation::DuplicateEdge { edge: e.name.clone() });
        }
        for end in [&e.source, &e.range] {
            if !seen.contains(end.as_str()) {
                report.push(Violation::DanglingEndpoint {
                    edge: e.name.clone(),
                    vertex: end.clone(),
                });
            }
        }
    }
    report
}

/// Lists every violated invariant of `g`, with the offending names.
pub fn validate(g: &RawGraph) -> ValidationReport {
    let mut report = validate_directed(g);
    let vertices: BTreeSet<&str> = g.vertices.iter().map(String::as_str).collect();
    let mut out: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut has_in: BTreeSet<&str> = BTreeSet::new();
    let edge_source: BTreeMap<&str, &str> =
        g.edges.iter().map(|e| (e.name.as_str(), e.source.as_str())).collect();
    for e in &g.edges {
        out.entry(e.source.as_str()).or_default().insert(e.name.as_str());
        has_in.insert(e.range.as_str());
    }

    match g.kind {
        GraphKind::Separated => {
            for (e, _) in &g.weights {
                report.push(Violation::WeightOnSeparatedGraph { edge: e.clone() });
            }
            let mut given = BTreeSet::new();
            for (v, sets) in &g.separation {
                if !vertices.contains(v.as_str()) {
                    report.push(Violation::UnknownSeparationVertex { vertex: v.clone() });
                    continue;
                }
                if !given.insert(v.as_str()) {
                    report.push(Violation::DuplicateSeparation { vertex: v.clone() });
                    continue;
                }
                let mut covered = BTreeSet::new();
                for set in sets {
                    if set.is_empty() {
                        report.push(Violation::EmptySeparationSet { vertex: v.clone() });
                    }
                    for e in set {
                        if edge_source.get(e.as_str()) != Some(&v.as_str()) {
                            report.push(Violation::ForeignSeparationEdge {
                                vertex: v.clone(),
                                edge: e.clone(),
                            });
                        } else if !covered.insert(e.as_str()) {
                            report.push(Violation::SeparationOverlap {
                                vertex: v.clone(),
                                edge: e.clone(),
                            });
                        }
                    }
                }
                let missing: Vec<String> = out
                    .get(v.as_str())
                    .into_iter()
                    .flatten()
                    .filter(|e| !covered.contains(*e))
                    .map(|e| e.to_string())
                    .collect();
                if !missing.is_empty() {
                    report.push(Violation::SeparationDoesNotCover {
                        vertex: v.clone(),
                        missing,
                    });
                }
            }
            for (v, edges) in &out {
                if vertices.contains(v) && !given.contains(v) {
                    report.push(Violation::SeparationDoesNotCover {
                        vertex: v.to_string(),
                        missing: edges.iter().map(|e| e.to_string()).collect(),
                    });
                }
            }
            if let Some((upper, lower)) = &g.bipartite {
                check_levels(g, upper, lower, &vertices, &mut report);
            }
        }
        GraphKind::Weighted => {
            for (v, _) in &g.separation {
                report.push(Violation::SeparationOnWeightedGraph { vertex: v.clone() });
            }
            if g.bipartite.is_some() {
                report.push(Violation::BipartiteOnWeightedGraph);
            }
            let mut weighted = BTreeSet::new();
            for (e, w) in &g.weights {
                if !edge_source.contains_key(e.as_str()) {
                    report.push(Violation::UnknownWeightedEdge { edge: e.clone() });
                } else if !weighted.insert(e.as_str()) {
                    report.push(Violation::DuplicateWeight { edge: e.clone() });
                }
                if *w == 0 || *w > u32::MAX as u64 {
                    report.push(Violation::NonPositiveWeight { edge: e.clone() });
                }
            }
            for e in &g.edges {
                if !weighted.contains(e.name.as_str()) {
                    report.push(Violation::MissingWeight { edge: e.name.clone() });
                }
            }
            for v in &vertices {
                if !out.contains_key(v) && !has_in.contains(v) {
                    report.push(Violation::IsolatedVertex { vertex: v.to_string() });
                }
            }
        }
    }
    report
}

fn check_levels(
    g: &RawGraph,
    upper: &[String],
    lower: &[String],
    vertices: &BTreeSet<&str>,
    report: &mut ValidationReport,
) {
    let up: BTreeSet<&str> = upper.iter().map(String::as_str).collect();
    let down: BTreeSet<&str> = lower.iter().map(String::as_str).collect();
    for v in up.iter().chain(down.iter()) {
        if !vertices.contains(v) {
            report.push(Violation::UnknownLevelVertex { vertex: v.to_string() });
        }
    }
    for v in up.intersection(&down) {
        report.push(Violation::LevelOverlap { vertex: v.to_string() });
    }
    for v in vertices {
        if !up.contains(v) && !down.contains(v) {
            report.push(Violation::LevelMissing { vertex: v.to_string() });
        }
    }
    for e in &g.edges {
        if !up.contains(e.source.as_str()) || !down.contains(e.range.as_str()) {
            report.push(Violation::EdgeAgainstLevels { edge: e.name.clone() });
        }
    }
}

/// A validated graph of any kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphDoc {
    Separated(SeparatedGraph),
    Bipartite(BipartiteSeparatedGraph),
    Weighted(WeightedGraph),
}

impl GraphDoc {
    pub fn to_raw(&self) -> RawGraph {
        match self {
            GraphDoc::Separated(g) => g.to_raw(),
            GraphDoc::Bipartite(g) => g.to_raw(),
            GraphDoc::Weighted(g) => g.to_raw(),
        }
    }

    pub fn directed(&self) -> &DirectedGraph {
        match self {
            GraphDoc::Separated(g) => g.graph(),
            GraphDoc::Bipartite(g) => g.graph(),
            GraphDoc::Weighted(g) => g.graph(),
        }
    }

    pub fn separated(&self) -> Option<&SeparatedGraph> {
        match self {
            GraphDoc::Separated(g) => Some(g),
            GraphDoc::Bipartite(g) => Some(g.separated()),
            GraphDoc::Weighted(_) => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GraphDoc::Separated(_) => "separated",
            GraphDoc::Bipartite(_) => "bipartite separated",
            GraphDoc::Weighted(_) => "weighted",
        }
    }
}

impl RawGraph {
    /// Validates and builds the typed graph. Separated graphs without an
    /// explicit bipartite line become bipartite when the levels can be
    /// inferred.
    pub fn build(&self) -> Result<GraphDoc, ValidationReport> {
        let report = validate(self);
        if !report.is_valid() {
            return Err(report);
        }
        let graph = DirectedGraph::from_checked(self);
        Ok(match self.kind {
            GraphKind::Weighted => GraphDoc::Weighted(WeightedGraph::from_checked(graph, &self.weights)),
            GraphKind::Separated => {
                let sep = SeparatedGraph::from_checked(graph, &self.separation);
                match &self.bipartite {
                    Some((upper, _)) => {
                        let flags = sep
                            .graph()
                            .vertex_names()
                            .iter()
                            .map(|v| upper.contains(v))
                            .collect();
                        GraphDoc::Bipartite(BipartiteSeparatedGraph::from_flags(sep, flags))
                    }
                    None => match BipartiteSeparatedGraph::infer(sep) {
                        Ok(b) => GraphDoc::Bipartite(b),
                        Err(sep) => GraphDoc::Separated(sep),
                    },
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(name: &str, s: &str, r: &str) -> RawEdge {
        RawEdge {
            name: name.into(),
            source: s.into(),
            range: r.into(),
        }
    }

    fn e23() -> RawGraph {
        let mut edges = Vec::new();
        for n in ["e1", "e2", "e3", "f1", "f2"] {
            edges.push(e(n, "v", "w"));
        }
        RawGraph {
            kind: GraphKind::Separated,
            vertices: vec!["v".into(), "w".into()],
            edges,
            separation: vec![(
                "v".into(),
                vec![
                    vec!["e1".into(), "e2".into(), "e3".into()],
                    vec!["f1".into(), "f2".into()],
                ],
            )],
            ..RawGraph::default()
        }
    }

    #[test]
    fn e23_is_valid() {
        assert!(validate(&e23()).is_valid());
        assert!(matches!(e23().build().unwrap(), GraphDoc::Bipartite(_)));
    }

    #[test]
    fn omitted_separation_is_reported() {
        let mut g = e23();
        g.separation.clear();
        let report = validate(&g);
        assert_eq!(report.violations.len(), 1);
        assert!(report.to_string().starts_with("separation does not cover s⁻¹(v)"));
    }

    #[test]
    fn partial_separation_is_reported() {
        let mut g = e23();
        g.separation[0].1.pop();
        let report = validate(&g);
        assert_eq!(
            report.violations,
            vec![Violation::SeparationDoesNotCover {
                vertex: "v".into(),
                missing: vec!["f1".into(), "f2".into()]
            }]
        );
    }

    #[test]
    fn malformed_input_lists_everything() {
        let g = RawGraph {
            vertices: vec!["v".into(), "v".into()],
            edges: vec![e("a", "v", "x"), e("a", "v", "v")],
            ..RawGraph::default()
        };
        let report = validate(&g);
        assert!(report.violations.contains(&Violation::DuplicateVertex { vertex: "v".into() }));
        assert!(report.violations.contains(&Violation::DuplicateEdge { edge: "a".into() }));
        assert!(report.violations.contains(&Violation::DanglingEndpoint {
            edge: "a".into(),
            vertex: "x".into()
        }));
    }

    #[test]
    fn overlap_and_foreign_edges() {
        let mut g = e23();
        g.separation[0].1[1].push("e1".into());
        g.separation[0].1.push(vec![]);
        let report = validate(&g);
        assert!(report.violations.contains(&Violation::SeparationOverlap {
            vertex: "v".into(),
            edge: "e1".into()
        }));
        assert!(report.violations.contains(&Violation::EmptySeparationSet { vertex: "v".into() }));
        let mut g = e23();
        g.separation.push(("w".into(), vec![vec!["e1".into()]]));
        assert!(validate(&g).violations.contains(&Violation::ForeignSeparationEdge {
            vertex: "w".into(),
            edge: "e1".into()
        }));
    }

    #[test]
    fn isolated_vertex_in_weighted_graph() {
        let g = RawGraph {
            kind: GraphKind::Weighted,
            vertices: vec!["u".into(), "v".into()],
            edges: vec![e("e", "v", "v")],
            weights: vec![("e".into(), 1)],
            ..RawGraph::default()
        };
        let report = validate(&g);
        assert_eq!(report.violations, vec![Violation::IsolatedVertex { vertex: "u".into() }]);
        assert_eq!(report.to_string(), "isolated vertex `u`");
    }

    #[test]
    fn weights_must_be_complete_and_positive() {
        let g = RawGraph {
            kind: GraphKind::Weighted,
            vertices: vec!["v".into()],
            edges: vec![e("e", "v", "v"), e("f", "v", "v")],
            weights: vec![("e".into(), 0)],
            ..RawGraph::default()
        };
        let report = validate(&g);
        assert!(report.violations.contains(&Violation::NonPositiveWeight { edge: "e".into() }));
        assert!(report.violations.contains(&Violation::MissingWeight { edge: "f".into() }));
    }

    #[test]
    fn explicit_levels_are_checked() {
        let mut g = e23();
        g.bipartite = Some((vec!["w".into()], vec!["v".into()]));
        let report = validate(&g);
        assert_eq!(report.violations.len(), 5);
        let mut g = e23();
        g.bipartite = Some((vec!["v".into()], vec![]));
        assert!(validate(&g).violations.contains(&Violation::LevelMissing { vertex: "w".into() }));
    }
}
