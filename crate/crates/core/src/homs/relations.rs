use serde::Serialize;

use super::HomError;
use crate::graphs::{BipartiteSeparatedGraph, GraphDoc, SeparatedGraph, WeightedGraph};
use crate::staralg::{FreeExpr, Generator};

/// Which presentation a relation list belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    /// `L(E,C)`: (V), (E), (SCK1), (SCK2).
    Separated,
    /// `L(E,ω)`.
    Weighted,
    /// `L₁(E,ω)`.
    L1,
    /// The upper algebra `LV(E,C)`.
    Lv,
    /// The lower algebra `LW(E,C)`.
    Lw,
}

impl RelationKind {
    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Separated => "separated",
            RelationKind::Weighted => "weighted",
            RelationKind::L1 => "l1",
            RelationKind::Lv => "lv",
            RelationKind::Lw => "lw",
        }
    }
}

/// One relation, stored as `left − right`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Relation {
    pub family: &'static str,
    pub label: String,
    pub expr: FreeExpr,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationSet {
    pub kind: RelationKind,
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn family(&self, family: &str) -> impl Iterator<Item = &Relation> {
        let family = family.to_string();
        self.relations.iter().filter(move |r| r.family == family)
    }

    /// Separated relations of `g`.
    pub fn separated(g: &SeparatedGraph) -> Self {
        let mut rels = Vec::new();
        vertex_relations(&mut rels, "V", g.graph().vertex_names(), vx);
        let d = g.graph();
        for e in d.edges() {
            let x = ed(&e.name);
            rels.push(rel("E", format!("s({0}) {0} = {0}", e.name), mul(vec![vx(d.vertex_name(e.source)), x.clone()]), x.clone()));
            rels.push(rel("E", format!("{0} r({0}) = {0}", e.name), mul(vec![x.clone(), vx(d.vertex_name(e.range))]), x));
        }
        for (xid, set) in g.csets().iter().enumerate() {
            let names = g.cset_names(xid as u32);
            for e in &names {
                for f in &names {
                    let lhs = mul(vec![ed(e).star(), ed(f)]);
                    let r = d.vertex_name(d.range(d.edge_id(e).expect("own edge")));
                    let rhs = if e == f { vx(r) } else { FreeExpr::Zero };
                    rels.push(rel("SCK1", format!("{e}* {f}"), lhs, rhs));
                }
            }
            let sum = FreeExpr::sum(names.iter().map(|e| mul(vec![ed(e), ed(e).star()])).collect());
            rels.push(rel(
                "SCK2",
                format!("{} = sum over [{}]", d.vertex_name(set.vertex), names.join(" ")),
                vx(d.vertex_name(set.vertex)),
                sum,
            ));
        }
        RelationSet {
            kind: RelationKind::Separated,
            relations: rels,
        }
    }

    /// Relations of `L(E,ω)`; `e_i` with `i > ω(e)` is dropped from the sums.
    pub fn weighted(g: &WeightedGraph) -> Self {
        let mut rels = Vec::new();
        weighted_common(&mut rels, g);
        let d = g.graph();
        for v in d.vertex_ids().filter(|&v| !d.is_sink(v)) {
            let vn = d.vertex_name(v);
            let out = d.out_edges(v);
            let wv = g.vertex_weight(v);
            for i in 1..=wv {
                for j in 1..=wv {
                    let sum = FreeExpr::sum(
                        out.iter()
                            .filter(|&&e| g.weight(e) >= i.max(j))
                            .map(|&e| mul(vec![wt(d.edge_name(e), i), wt(d.edge_name(e), j).star()]))
                            .collect(),
                    );
                    let rhs = if i == j { vx(vn) } else { FreeExpr::Zero };
                    rels.push(rel("3", format!("{vn}: sum e.{i} e.{j}*"), sum, rhs));
                }
            }
            for &e in out {
                for &f in out {
                    let (en, fname) = (d.edge_name(e), d.edge_name(f));
                    let top = g.weight(e).min(g.weight(f));
                    let sum = FreeExpr::sum((1..=top).map(|i| mul(vec![wt(en, i).star(), wt(fname, i)])).collect());
                    let rhs = if e == f { vx(d.vertex_name(d.range(e))) } else { FreeExpr::Zero };
                    rels.push(rel("4", format!("sum {en}.i* {fname}.i"), sum, rhs));
                }
            }
        }
        RelationSet {
            kind: RelationKind::Weighted,
            relations: rels,
        }
    }

    /// Relations of `L₁(E,ω)`.
    pub fn l1(g: &WeightedGraph) -> Self {
        let mut rels = Vec::new();
        weighted_common(&mut rels, g);
        let d = g.graph();
        for e in d.edge_ids() {
            let en = d.edge_name(e);
            for i in 1..=g.weight(e) {
                for j in (1..=g.weight(e)).filter(|&j| j != i) {
                    rels.push(rel("3", format!("{en}.{i} {en}.{j}*"), mul(vec![wt(en, i), wt(en, j).star()]), FreeExpr::Zero));
                }
            }
        }
        for v in d.vertex_ids() {
            let out = d.out_edges(v);
            for &e in out {
                for &f in out.iter().filter(|&&f| f != e) {
                    let (en, fname) = (d.edge_name(e), d.edge_name(f));
                    for i in 1..=g.weight(e).min(g.weight(f)) {
                        rels.push(rel("4", format!("{en}.{i}* {fname}.{i}"), mul(vec![wt(en, i).star(), wt(fname, i)]), FreeExpr::Zero));
                    }
                }
            }
        }
        for v in d.vertex_ids().filter(|&v| !d.is_sink(v)) {
            let vn = d.vertex_name(v);
            for i in 1..=g.vertex_weight(v) {
                let sum = FreeExpr::sum(
                    d.out_edges(v)
                        .iter()
                        .filter(|&&e| g.weight(e) >= i)
                        .map(|&e| mul(vec![wt(d.edge_name(e), i), wt(d.edge_name(e), i).star()]))
                        .collect(),
                );
                rels.push(rel("5", format!("{vn}: sum e.{i} e.{i}*"), sum, vx(vn)));
            }
        }
        for e in d.edge_ids() {
            let en = d.edge_name(e);
            let sum = FreeExpr::sum((1..=g.weight(e)).map(|i| mul(vec![wt(en, i).star(), wt(en, i)])).collect());
            rels.push(rel("6", format!("sum {en}.i* {en}.i"), sum, vx(d.vertex_name(d.range(e)))));
        }
        RelationSet {
            kind: RelationKind::L1,
            relations: rels,
        }
    }

    /// Relations of the upper algebra `LV(E,C)`.
    pub fn lv(g: &BipartiteSeparatedGraph) -> Self {
        let sep = g.separated();
        let d = g.graph();
        let mut rels = Vec::new();
        vertex_relations(&mut rels, "V'", &g.upper_names(), pv);
        let taus: Vec<(u32, u32)> = d
            .edge_ids()
            .flat_map(|e| d.in_edges(d.range(e)).iter().map(move |&f| (e, f)))
            .collect();
        let name = |e: u32| d.edge_name(e);
        for &(e, f) in &taus {
            let t = tau(name(e), name(f));
            rels.push(rel("T", format!("tau[{},{}]*", name(e), name(f)), t.clone().star(), tau(name(f), name(e))));
            rels.push(rel(
                "E'",
                format!("tau[{},{}] p", name(e), name(f)),
                mul(vec![t.clone(), pv(d.vertex_name(d.source(f)))]),
                t.clone(),
            ));
            rels.push(rel(
                "E'",
                format!("p tau[{},{}]", name(e), name(f)),
                mul(vec![pv(d.vertex_name(d.source(e))), t.clone()]),
                t,
            ));
        }
        for x in sep.csets() {
            for &f in &x.edges {
                for &gg in &x.edges {
                    for &e in d.in_edges(d.range(f)) {
                        for &h in d.in_edges(d.range(gg)) {
                            let lhs = mul(vec![tau(name(e), name(f)), tau(name(gg), name(h))]);
                            let rhs = if f == gg { tau(name(e), name(h)) } else { FreeExpr::Zero };
                            rels.push(rel(
                                "SCK1'",
                                format!("tau[{},{}] tau[{},{}]", name(e), name(f), name(gg), name(h)),
                                lhs,
                                rhs,
                            ));
                        }
                    }
                }
            }
        }
        for (xid, x) in sep.csets().iter().enumerate() {
            let vn = d.vertex_name(x.vertex);
            let sum = FreeExpr::sum(x.edges.iter().map(|&e| tau(name(e), name(e))).collect());
            rels.push(rel(
                "SCK2'",
                format!("p[{vn}] = sum over [{}]", sep.cset_names(xid as u32).join(" ")),
                pv(vn),
                sum,
            ));
        }
        RelationSet {
            kind: RelationKind::Lv,
            relations: rels,
        }
    }

    /// Relations of the lower algebra `LW(E,C)`.
    pub fn lw(g: &BipartiteSeparatedGraph) -> Self {
        let sep = g.separated();
        let d = g.graph();
        let name = |e: u32| d.edge_name(e);
        let mut rels = Vec::new();
        vertex_relations(&mut rels, "V''", &g.lower_names(), pv);
        for e in d.edge_ids() {
            for &f in d.out_edges(d.source(e)).iter().filter(|&&f| sep.set_of(f) != sep.set_of(e)) {
                let r = rho(name(e), name(f));
                rels.push(rel("R", format!("rho[{},{}]*", name(e), name(f)), r.clone().star(), rho(name(f), name(e))));
                rels.push(rel(
                    "E''",
                    format!("rho[{},{}] p", name(e), name(f)),
                    mul(vec![r.clone(), pv(d.vertex_name(d.range(f)))]),
                    r.clone(),
                ));
                rels.push(rel(
                    "E''",
                    format!("p rho[{},{}]", name(e), name(f)),
                    mul(vec![pv(d.vertex_name(d.range(e))), r.clone()]),
                    r,
                ));
            }
        }
        for v in d.vertex_ids() {
            let out = d.out_edges(v);
            for &e in out {
                for &h in out {
                    for &x in sep.csets_at(v) {
                        if x == sep.set_of(e) || x == sep.set_of(h) {
                            continue;
                        }
                        let sum = FreeExpr::sum(
                            sep.cset(x)
                                .edges
                                .iter()
                                .map(|&f| mul(vec![rho(name(e), name(f)), rho(name(f), name(h))]))
                                .collect(),
                        );
                        let rhs = if sep.set_of(e) != sep.set_of(h) {
                            rho(name(e), name(h))
                        } else if e == h {
                            pv(d.vertex_name(d.range(e)))
                        } else {
                            FreeExpr::Zero
                        };
                        rels.push(rel(
                            "SCK1''",
                            format!("{},{} over [{}]", name(e), name(h), sep.cset_names(x).join(" ")),
                            sum,
                            rhs,
                        ));
                    }
                }
            }
        }
        RelationSet {
            kind: RelationKind::Lw,
            relations: rels,
        }
    }
}

/// The relation list of `kind` for a parsed graph.
pub fn relations(kind: RelationKind, g: &GraphDoc) -> Result<RelationSet, HomError> {
    let mismatch = |needs| HomError::KindMismatch {
        kind: kind.name(),
        needs,
        got: g.kind_name(),
    };
    match (kind, g) {
        (RelationKind::Separated, GraphDoc::Separated(s)) => Ok(RelationSet::separated(s)),
        (RelationKind::Separated, GraphDoc::Bipartite(b)) => Ok(RelationSet::separated(b.separated())),
        (RelationKind::Weighted, GraphDoc::Weighted(w)) => Ok(RelationSet::weighted(w)),
        (RelationKind::L1, GraphDoc::Weighted(w)) => Ok(RelationSet::l1(w)),
        (RelationKind::Lv, GraphDoc::Bipartite(b)) => Ok(RelationSet::lv(b)),
        (RelationKind::Lw, GraphDoc::Bipartite(b)) => Ok(RelationSet::lw(b)),
        (RelationKind::Separated, _) => Err(mismatch("separated")),
        (RelationKind::Weighted | RelationKind::L1, _) => Err(mismatch("weighted")),
        (RelationKind::Lv | RelationKind::Lw, _) => Err(mismatch("bipartite separated")),
    }
}

fn rel(family: &'static str, label: String, lhs: FreeExpr, rhs: FreeExpr) -> Relation {
    let expr = match rhs {
        FreeExpr::Zero => lhs,
        rhs => lhs.minus(rhs),
    };
    Relation {
        family,
        label: format!("({family}) {label}"),
        expr,
    }
}

fn vertex_relations(rels: &mut Vec<Relation>, family: &'static str, names: &[String], gen: fn(&str) -> FreeExpr) {
    for u in names {
        for v in names {
            let rhs = if u == v { gen(u) } else { FreeExpr::Zero };
            rels.push(rel(family, format!("{u} {v}"), mul(vec![gen(u), gen(v)]), rhs));
        }
        rels.push(rel(family, format!("{u}*"), gen(u).star(), gen(u)));
    }
}

fn weighted_common(rels: &mut Vec<Relation>, g: &WeightedGraph) {
    let d = g.graph();
    vertex_relations(rels, "1", d.vertex_names(), vx);
    for e in d.edge_ids() {
        let en = d.edge_name(e);
        for i in 1..=g.weight(e) {
            let x = wt(en, i);
            rels.push(rel("2", format!("s({en}) {en}.{i}"), mul(vec![vx(d.vertex_name(d.source(e))), x.clone()]), x.clone()));
            rels.push(rel("2", format!("{en}.{i} r({en})"), mul(vec![x.clone(), vx(d.vertex_name(d.range(e)))]), x));
        }
    }
}

fn mul(xs: Vec<FreeExpr>) -> FreeExpr {
    FreeExpr::mul(xs)
}

fn vx(v: &str) -> FreeExpr {
    FreeExpr::gen(Generator::Vertex(v.to_string()))
}

fn ed(e: &str) -> FreeExpr {
    FreeExpr::gen(Generator::Edge(e.to_string()))
}

fn wt(e: &str, i: u32) -> FreeExpr {
    FreeExpr::gen(Generator::Weighted(e.to_string(), i))
}

fn pv(v: &str) -> FreeExpr {
    FreeExpr::gen(Generator::P(v.to_string()))
}

fn tau(e: &str, f: &str) -> FreeExpr {
    FreeExpr::gen(Generator::Tau(e.to_string(), f.to_string()))
}

fn rho(e: &str, f: &str) -> FreeExpr {
    FreeExpr::gen(Generator::Rho(e.to_string(), f.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_emn, tests::loops};

    #[test]
    fn emn_counts() {
        let g = build_emn(2, 3).unwrap();
        let r = RelationSet::separated(g.separated());
        assert_eq!(r.family("SCK2").count(), 2);
        assert_eq!(r.family("SCK1").count(), 9 + 4);
        assert_eq!(r.family("V").count(), 4 + 2);
        assert_eq!(r.family("E").count(), 10);
    }

    #[test]
    fn l1_loops() {
        let r = RelationSet::l1(&loops(&[2, 2]));
        assert_eq!(r.family("3").count(), 4);
        assert_eq!(r.family("4").count(), 4);
        assert_eq!(r.family("5").count(), 2);
        assert_eq!(r.family("6").count(), 2);
        assert!(r.relations.iter().any(|x| x.label == "(4) e1.1* e2.1"));
    }

    #[test]
    fn lw_case_split() {
        let g = build_emn(2, 3).unwrap();
        let r = RelationSet::lw(&g);
        // Pairs inside X sum over Y and vice versa; mixed pairs have no third set.
        assert_eq!(r.family("SCK1''").count(), 9 + 4);
        let same = r.relations.iter().find(|x| x.label.starts_with("(SCK1'') f1,f1")).unwrap();
        assert_eq!(same.expr.generators().len(), 7);
    }

    #[test]
    fn kind_mismatch() {
        let g = GraphDoc::Weighted(loops(&[1]));
        assert!(matches!(relations(RelationKind::Lv, &g), Err(HomError::KindMismatch { .. })));
        assert!(relations(RelationKind::L1, &g).is_ok());
    }
}
