//! Finitely presented commutative monoids: graph monoids `M(E,C)` and
//! `M₁(E,ω)`, congruence search, Grothendieck groups, Leavitt types and
//! order-ideal lattices.

mod congruence;
mod gamma;
mod ideals;
mod smith;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::constructions::weighted_vertex_name;
use crate::graphs::{SeparatedGraph, WeightedGraph};

pub use congruence::{congruent, leavitt_type, replay, Budget, Congruence, LeavittType, Step};
pub use gamma::{gamma_images, DecompositionCheck, GammaCheck, GammaImages};
pub use ideals::{order_ideal_oracle, order_ideals, order_ideals_weighted, OrderIdeal, OrderIdealLattice};
pub use smith::{grothendieck, in_relation_lattice, smith_normal_form, AbelianGroupShape, SmithForm};

/// Vectors over `ℕ`, indexed by generator position.
pub type NVec = Vec<u64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonoidError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("relation vector has length {got}, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
}

/// `⟨generators | lhs = rhs, …⟩` over a commutative monoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidPresentation {
    generators: Vec<String>,
    relations: Vec<(NVec, NVec)>,
}

impl MonoidPresentation {
    pub fn new(generators: Vec<String>, relations: Vec<(NVec, NVec)>) -> Result<Self, MonoidError> {
        let mut seen = std::collections::HashSet::new();
        for g in &generators {
            if !seen.insert(g.as_str()) {
                return Err(MonoidError::DuplicateGenerator(g.clone()));
            }
        }
        let n = generators.len();
        for (l, r) in &relations {
            for v in [l, r] {
                if v.len() != n {
                    return Err(MonoidError::Length {
                        got: v.len(),
                        expected: n,
                    });
                }
            }
        }
        Ok(MonoidPresentation { generators, relations })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[(NVec, NVec)] {
        &self.relations
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn index(&self, name: &str) -> Result<usize, MonoidError> {
        self.generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| MonoidError::UnknownGenerator(name.to_string()))
    }

    /// `c · a_name`.
    pub fn multiple(&self, name: &str, c: u64) -> Result<NVec, MonoidError> {
        let mut v = vec![0; self.rank()];
        v[self.index(name)?] = c;
        Ok(v)
    }

    /// A vector from `(name, coefficient)` pairs.
    pub fn vector(&self, terms: &[(&str, u64)]) -> Result<NVec, MonoidError> {
        let mut v = vec![0; self.rank()];
        for (name, c) in terms {
            v[self.index(name)?] += c;
        }
        Ok(v)
    }

    pub fn format_vector(&self, v: &[u64]) -> String {
        let parts: Vec<String> = v
            .iter()
            .zip(&self.generators)
            .filter(|(c, _)| **c > 0)
            .map(|(c, g)| if *c == 1 { g.clone() } else { format!("{c}{g}") })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Same generators and the same relations as unordered pairs, up to
    /// relation order, multiplicity and generator order.
    pub fn same_presentation(&self, other: &MonoidPresentation) -> bool {
        let mut a = self.generators.clone();
        let mut b = other.generators.clone();
        a.sort();
        b.sort();
        if a != b {
            return false;
        }
        let key = |p: &MonoidPresentation| {
            let mut out: Vec<(Vec<(String, u64)>, Vec<(String, u64)>)> = p
                .relations
                .iter()
                .map(|(l, r)| {
                    let named = |v: &NVec| {
                        let mut t: Vec<(String, u64)> =
                            v.iter().zip(&p.generators).filter(|(c, _)| **c > 0).map(|(c, g)| (g.clone(), *c)).collect();
                        t.sort();
                        t
                    };
                    let (l, r) = (named(l), named(r));
                    if l <= r {
                        (l, r)
                    } else {
                        (r, l)
                    }
                })
                .collect();
            out.sort();
            out.dedup();
            out
        };
        key(self) == key(other)
    }

    /// Tietze elimination: while some relation reads `g = w` with `g` a single
    /// generator not occurring in `w`, substitute `w` for `g` and drop `g`.
    /// Later generators are eliminated first. Returns the eliminated
    /// generators with their values in the remaining ones.
    pub fn simplify(&self) -> (MonoidPresentation, Vec<(String, String)>) {
        let mut gens = self.generators.clone();
        let mut rels: Vec<(NVec, NVec)> = self.relations.clone();
        let mut eliminated = Vec::new();
        loop {
            let mut pick: Option<(usize, usize, NVec)> = None;
            for (k, (l, r)) in rels.iter().enumerate() {
                for (a, b) in [(l, r), (r, l)] {
                    if let Some(g) = single(a) {
                        if b[g] == 0 && pick.as_ref().map_or(true, |(pg, _, _)| g > *pg) {
                            pick = Some((g, k, b.clone()));
                        }
                    }
                }
            }
            let Some((g, k, value)) = pick else { break };
            rels.remove(k);
            let substitute = |v: &NVec| -> NVec {
                let c = v[g];
                let mut out: NVec = v.iter().zip(&value).map(|(x, y)| x + c * y).collect();
                out[g] = 0;
                out
            };
            rels = rels.iter().map(|(l, r)| (substitute(l), substitute(r))).collect();
            let tmp = MonoidPresentation {
                generators: gens.clone(),
                relations: vec![],
            };
            eliminated.push((gens[g].clone(), tmp.format_vector(&value)));
            for (l, r) in rels.iter_mut() {
                l.remove(g);
                r.remove(g);
            }
            gens.remove(g);
            let mut kept: Vec<(NVec, NVec)> = Vec::new();
            for (l, r) in rels {
                let dup = kept.iter().any(|(a, b)| (a == &l && b == &r) || (a == &r && b == &l));
                if l != r && !dup {
                    kept.push((l, r));
                }
            }
            rels = kept;
        }
        (
            MonoidPresentation {
                generators: gens,
                relations: rels,
            },
            eliminated,
        )
    }

    /// The quotient by the order ideal generated by `zero`: those generators
    /// are set to 0 and removed.
    pub fn quotient_by<S: AsRef<str>>(&self, zero: &[S]) -> Result<MonoidPresentation, MonoidError> {
        let mut drop = Vec::new();
        for z in zero {
            drop.push(self.index(z.as_ref())?);
        }
        let keep: Vec<usize> = (0..self.rank()).filter(|i| !drop.contains(i)).collect();
        let project = |v: &NVec| -> NVec { keep.iter().map(|&i| v[i]).collect() };
        let mut rels: Vec<(NVec, NVec)> = Vec::new();
        for (l, r) in &self.relations {
            let (l, r) = (project(l), project(r));
            if l != r && !rels.iter().any(|(a, b)| (a == &l && b == &r) || (a == &r && b == &l)) {
                rels.push((l, r));
            }
        }
        Ok(MonoidPresentation {
            generators: keep.iter().map(|&i| self.generators[i].clone()).collect(),
            relations: rels,
        })
    }

    /// Same monoid with generators renamed position by position.
    pub fn renamed(&self, names: Vec<String>) -> Result<MonoidPresentation, MonoidError> {
        if names.len() != self.rank() {
            return Err(MonoidError::Length {
                got: names.len(),
                expected: self.rank(),
            });
        }
        MonoidPresentation::new(names, self.relations.clone())
    }
}

fn single(v: &[u64]) -> Option<usize> {
    let mut found = None;
    for (i, &c) in v.iter().enumerate() {
        match c {
            0 => {}
            1 if found.is_none() => found = Some(i),
            _ => return None,
        }
    }
    found
}

impl fmt::Display for MonoidPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|(l, r)| format!("{} = {}", self.format_vector(l), self.format_vector(r)))
            .collect();
        write!(f, "⟨{} | {}⟩", self.generators.join(", "), rels.join("; "))
    }
}

/// `M(E,C)`: one generator per vertex and `a_v = Σ_{e∈X} a_{r(e)}` for every
/// `X ∈ C_v`.
pub fn monoid_of(g: &SeparatedGraph) -> MonoidPresentation {
    let d = g.graph();
    let n = d.vertex_count();
    let mut rels = Vec::new();
    for x in g.csets() {
        let mut lhs = vec![0; n];
        lhs[x.vertex as usize] = 1;
        let mut rhs = vec![0; n];
        for &e in &x.edges {
            rhs[d.range(e) as usize] += 1;
        }
        rels.push((lhs, rhs));
    }
    MonoidPresentation {
        generators: d.vertex_names().to_vec(),
        relations: rels,
    }
}

/// `M₁(E,ω)`: generators `a_v` then `a_{v(e,i)}`, with the level relations
/// `a_v = Σ_{ω(e)≥i} a_{v(e,i)}` for regular `v` and the edge relations
/// `a_{r(e)} = Σ_i a_{v(e,i)}`.
pub fn m1_of(g: &WeightedGraph) -> MonoidPresentation {
    let d = g.graph();
    let mut gens: Vec<String> = d.vertex_names().to_vec();
    let mut slot = vec![Vec::new(); d.edge_count()];
    for e in d.edge_ids() {
        for i in 1..=g.weight(e) {
            slot[e as usize].push(gens.len());
            gens.push(weighted_vertex_name(d.edge_name(e), i));
        }
    }
    let n = gens.len();
    let mut rels = Vec::new();
    for v in d.vertex_ids().filter(|&v| !d.is_sink(v)) {
        for i in 1..=g.vertex_weight(v) {
            let mut lhs = vec![0; n];
            lhs[v as usize] = 1;
            let mut rhs = vec![0; n];
            for &e in d.out_edges(v).iter().filter(|&&e| g.weight(e) >= i) {
                rhs[slot[e as usize][i as usize - 1]] += 1;
            }
            rels.push((lhs, rhs));
        }
    }
    for e in d.edge_ids() {
        let mut lhs = vec![0; n];
        lhs[d.range(e) as usize] = 1;
        let mut rhs = vec![0; n];
        for &s in &slot[e as usize] {
            rhs[s] += 1;
        }
        rels.push((lhs, rhs));
    }
    MonoidPresentation {
        generators: gens,
        relations: rels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_emn, separated_of_weighted, tests::loops};

    #[test]
    fn emn_monoid() {
        let g = build_emn(2, 3).unwrap();
        let p = monoid_of(g.separated());
        assert_eq!(p.to_string(), "⟨v, w | v = 3w; v = 2w⟩");
    }

    #[test]
    fn m1_counts_and_graph_monoid() {
        let g = loops(&[2, 2]);
        let p = m1_of(&g);
        assert_eq!(p.rank(), 5);
        assert_eq!(p.relations().len(), 4);
        let q = monoid_of(separated_of_weighted(&g).unwrap().separated());
        assert!(p.same_presentation(&q));
    }

    #[test]
    fn minimal_partition_simplifies() {
        // ω₀ for (m,n) = (3,5): e1 has weight 3, the others weight 1.
        let p = m1_of(&loops(&[3, 1, 1, 1, 1]));
        let (s, elim) = p.simplify();
        assert_eq!(s.generators(), ["v", "v(e1,1)"]);
        assert_eq!(elim.len(), 6);
        let x = "v(e1,1)";
        let expect = MonoidPresentation::new(
            vec!["v".into(), x.into()],
            vec![(vec![1, 0], vec![4, 1]), (vec![1, 0], vec![2, 1])],
        )
        .unwrap();
        assert!(s.same_presentation(&expect), "{s}");
    }

    #[test]
    fn quotient_sets_generators_to_zero() {
        let p = MonoidPresentation::new(
            vec!["a".into(), "x".into()],
            vec![(vec![1, 0], vec![2, 1]), (vec![1, 0], vec![4, 1])],
        )
        .unwrap();
        let q = p.quotient_by(&["x"]).unwrap();
        assert_eq!(q.to_string(), "⟨a | a = 2a; a = 4a⟩");
        assert!(p.quotient_by(&["zz"]).is_err());
    }
}
