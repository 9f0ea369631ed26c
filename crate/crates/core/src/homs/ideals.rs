use std::collections::HashSet;

use serde::Serialize;

use super::maps::corner_image;
use super::{phi0, phi1, phi_vw, GeneratorMap, HomError};
use crate::constructions::{ids_of, is_hsat, separated_of_weighted, ConstructionError};
use crate::graphs::{BipartiteSeparatedGraph, GraphDoc, SeparatedGraph, WeightedGraph};
use crate::staralg::{AlgElement, Algebra, Generator, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdealKind {
    I0,
    Kernel,
    Commutator,
    Hsat,
}

#[derive(Clone, Debug)]
pub struct IdealGenerator {
    pub label: String,
    pub element: AlgElement,
}

/// A generating list together with the algebra it lives in.
#[derive(Clone, Debug)]
pub struct IdealSource {
    pub kind: IdealKind,
    pub algebra: Algebra,
    pub generators: Vec<IdealGenerator>,
}

impl IdealSource {
    fn new(kind: IdealKind, algebra: Algebra) -> Self {
        IdealSource {
            kind,
            algebra,
            generators: Vec::new(),
        }
    }

    fn push(&mut self, label: String, element: AlgElement) {
        self.generators.push(IdealGenerator { label, element });
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `(label, normal form)` pairs.
    pub fn formatted(&self) -> Vec<(String, String)> {
        self.generators
            .iter()
            .map(|g| (g.label.clone(), self.algebra.format(&g.element)))
            .collect()
    }
}

/// Images under `Φ` of `e_i e_j*` (`i ≠ j`) and `e_i* f_i` (`e ≠ f`,
/// same source).
pub fn i0_generators(g: &WeightedGraph) -> Result<IdealSource, HomError> {
    let map = phi_vw(g)?;
    let alg = map.target().clone();
    let mut out = IdealSource::new(IdealKind::I0, alg.clone());
    let d = g.graph();
    let img = |e: &str, i: u32| map.image(&Generator::Weighted(e.to_string(), i)).cloned();
    for e in d.edge_ids() {
        let en = d.edge_name(e);
        for i in 1..=g.weight(e) {
            for j in (1..=g.weight(e)).filter(|&j| j != i) {
                let x = alg.mul(&img(en, i)?, &alg.star(&img(en, j)?))?;
                out.push(format!("{en}.{i} {en}.{j}*"), x);
            }
        }
    }
    for v in d.vertex_ids() {
        for &e in d.out_edges(v) {
            for &f in d.out_edges(v).iter().filter(|&&f| f != e) {
                let (en, fname) = (d.edge_name(e), d.edge_name(f));
                for i in 1..=g.weight(e).min(g.weight(f)) {
                    let x = alg.mul(&alg.star(&img(en, i)?), &img(fname, i)?)?;
                    out.push(format!("{en}.{i}* {fname}.{i}"), x);
                }
            }
        }
    }
    Ok(out)
}

/// `γ(e,f,g,h) = ρ(e,f)ρ(f,g)ρ(g,h) − ρ(e,g)ρ(g,f)ρ(f,h)` with extended `ρ`.
pub fn gamma(alg: &Algebra, e: &str, f: &str, g: &str, h: &str) -> Result<AlgElement, HomError> {
    let r = |a: &str, b: &str| corner_image(alg, &Generator::Rho(a.to_string(), b.to_string()));
    let left = alg.product(&[r(e, f)?, r(f, g)?, r(g, h)?])?;
    let right = alg.product(&[r(e, g)?, r(g, f)?, r(f, h)?])?;
    Ok(alg.normal_form(&alg.sub(&left, &right)?))
}

/// `e*[ff*, gg*]h`.
pub fn gamma_commutator_form(alg: &Algebra, e: &str, f: &str, g: &str, h: &str) -> Result<AlgElement, HomError> {
    let x = |n: &str| alg.edge_named(n);
    let (e, f, g, h) = (x(e)?, x(f)?, x(g)?, x(h)?);
    let ff = alg.mul(&f, &alg.star(&f))?;
    let gg = alg.mul(&g, &alg.star(&g))?;
    let comm = alg.sub(&alg.mul(&ff, &gg)?, &alg.mul(&gg, &ff)?)?;
    Ok(alg.product(&[alg.star(&e), comm, h])?)
}

/// The nonzero, pairwise distinct `γ(e,f,g,h)` over edges with one source.
pub fn kernel_generators(g: &BipartiteSeparatedGraph) -> Result<IdealSource, HomError> {
    let alg = Algebra::bipartite(g);
    let mut out = IdealSource::new(IdealKind::Kernel, alg.clone());
    let d = g.graph();
    let mut seen = HashSet::new();
    for v in g.upper() {
        let names: Vec<&str> = d.out_edges(v).iter().map(|&e| d.edge_name(e)).collect();
        for e in &names {
            for f in &names {
                for gg in &names {
                    for h in &names {
                        let x = gamma(&alg, e, f, gg, h)?;
                        if !x.is_zero() && seen.insert(alg.format(&x)) {
                            out.push(format!("gamma({e},{f},{gg},{h})"), x);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Nonzero products of at most `bound` letters, each paired with its label.
pub fn semigroup_words(
    alg: &Algebra,
    letters: &[(String, AlgElement)],
    bound: usize,
) -> Result<Vec<(String, AlgElement)>, HomError> {
    let mut out: Vec<(String, AlgElement)> = Vec::new();
    let mut layer: Vec<(String, AlgElement)> = letters.iter().filter(|(_, x)| !x.is_zero()).cloned().collect();
    for _ in 0..bound {
        out.extend(layer.iter().cloned());
        let mut next = Vec::new();
        for (lu, u) in &layer {
            for (ll, l) in letters {
                let x = alg.mul(u, l)?;
                if !x.is_zero() {
                    next.push((format!("{lu} {ll}"), x));
                }
            }
        }
        layer = next;
    }
    Ok(out)
}

/// The nonzero, pairwise distinct `[e(u), e(u')]` with `e(u) = uu*`.
fn commutators(alg: &Algebra, letters: &[(String, AlgElement)], bound: usize) -> Result<Vec<IdealGenerator>, HomError> {
    let mut projections: Vec<(String, AlgElement)> = Vec::new();
    let mut seen = HashSet::new();
    for (label, u) in semigroup_words(alg, letters, bound)? {
        let p = alg.mul(&u, &alg.star(&u))?;
        if !p.is_zero() && seen.insert(alg.format(&p)) {
            projections.push((label, p));
        }
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, (la, a)) in projections.iter().enumerate() {
        for (lb, b) in &projections[i + 1..] {
            let c = alg.sub(&alg.mul(a, b)?, &alg.mul(b, a)?)?;
            let c = alg.normal_form(&c);
            if !c.is_zero() && seen.insert(alg.format(&c)) {
                out.push(IdealGenerator {
                    label: format!("[e({la}), e({lb})]"),
                    element: c,
                });
            }
        }
    }
    Ok(out)
}

/// Commutators in `L(E,C)` over words of at most `bound` edges and ghosts.
pub fn commutator_generators(g: &SeparatedGraph, bound: usize) -> Result<IdealSource, HomError> {
    let alg = match BipartiteSeparatedGraph::infer(g.clone()) {
        Ok(b) => Algebra::bipartite(&b),
        Err(s) => Algebra::new(s),
    };
    commutators_in(alg, bound)
}

fn commutators_in(alg: Algebra, bound: usize) -> Result<IdealSource, HomError> {
    let d = alg.graph().graph();
    let mut letters = Vec::new();
    for e in d.edge_ids() {
        letters.push((d.edge_name(e).to_string(), alg.edge(e)));
        letters.push((format!("{}*", d.edge_name(e)), alg.ghost(e)));
    }
    let mut out = IdealSource::new(IdealKind::Commutator, alg.clone());
    out.generators = commutators(&alg, &letters, bound)?;
    Ok(out)
}

/// Commutators of `L₁(E,ω)` as images under `Φ₁`, over words of at most
/// `bound` letters `e_i`, `e_i*`.
pub fn commutator_generators_weighted(g: &WeightedGraph, bound: usize) -> Result<IdealSource, HomError> {
    let map = phi1(g)?;
    let alg = map.target().clone();
    let mut letters = Vec::new();
    for (gen, x) in map.images() {
        if let Generator::Weighted(..) = gen {
            letters.push((gen.to_string(), x.clone()));
            letters.push((format!("{gen}*"), alg.star(x)));
        }
    }
    let mut out = IdealSource::new(IdealKind::Commutator, alg.clone());
    out.generators = commutators(&alg, &letters, bound)?;
    Ok(out)
}

/// The vertices of a hereditary C-saturated set.
pub fn hsat_generators<S: AsRef<str>>(g: &SeparatedGraph, h: &[S]) -> Result<IdealSource, HomError> {
    let set = ids_of(g, h)?;
    let check = is_hsat(g, &set);
    if !check.is_hsat() {
        let names: Vec<&str> = h.iter().map(|s| s.as_ref()).collect();
        return Err(ConstructionError::NotHereditarySaturated(names.join(" ")).into());
    }
    let alg = Algebra::new(g.clone());
    let mut out = IdealSource::new(IdealKind::Hsat, alg.clone());
    for v in set {
        out.push(g.graph().vertex_name(v).to_string(), alg.vertex(v));
    }
    Ok(out)
}

/// Dispatches on the kind. Weighted inputs go through `Φ` (I₀), or through
/// `(E(ω)₁, C(ω)¹)` for the other kinds.
pub fn ideal_generators(
    kind: IdealKind,
    g: &GraphDoc,
    bound: Option<usize>,
    h: &[String],
) -> Result<IdealSource, HomError> {
    let mismatch = |needs| HomError::KindMismatch {
        kind: match kind {
            IdealKind::I0 => "i0",
            IdealKind::Kernel => "kernel",
            IdealKind::Commutator => "commutator",
            IdealKind::Hsat => "hsat",
        },
        needs,
        got: g.kind_name(),
    };
    match (kind, g) {
        (IdealKind::I0, GraphDoc::Weighted(w)) => i0_generators(w),
        (IdealKind::I0, _) => Err(mismatch("weighted")),
        (IdealKind::Kernel, GraphDoc::Bipartite(b)) => kernel_generators(b),
        (IdealKind::Kernel, GraphDoc::Weighted(w)) => kernel_generators(&separated_of_weighted(w)?),
        (IdealKind::Kernel, GraphDoc::Separated(_)) => Err(mismatch("bipartite separated")),
        (IdealKind::Commutator, _) => {
            let bound = bound.ok_or(HomError::MissingBound)?;
            match g {
                GraphDoc::Weighted(w) => commutator_generators_weighted(w, bound),
                GraphDoc::Bipartite(b) => commutators_in(Algebra::bipartite(b), bound),
                GraphDoc::Separated(s) => commutator_generators(s, bound),
            }
        }
        (IdealKind::Hsat, GraphDoc::Weighted(w)) => hsat_generators(separated_of_weighted(w)?.separated(), h),
        (IdealKind::Hsat, GraphDoc::Bipartite(b)) => hsat_generators(b.separated(), h),
        (IdealKind::Hsat, GraphDoc::Separated(s)) => hsat_generators(s, h),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CornerCommutatorReport {
    pub bound: usize,
    pub depth: usize,
    /// V-corner commutators that were checked.
    pub checked: usize,
    /// Labels and images of those not sent to zero.
    pub surviving: Vec<(String, String)>,
}

/// Pushes the V-corners of the commutators of `L(E,C)` up to `bound` through
/// `depth` resolution maps and reports those that do not vanish.
pub fn corner_commutator_check(g: &BipartiteSeparatedGraph, bound: usize, depth: usize) -> Result<CornerCommutatorReport, HomError> {
    let gens = commutators_in(Algebra::bipartite(g), bound)?;
    let alg = &gens.algebra;
    let mut maps: Vec<GeneratorMap> = Vec::new();
    let mut layer = g.clone();
    for _ in 0..depth {
        let m = phi0(&layer)?;
        layer = BipartiteSeparatedGraph::infer(m.target().graph().clone())
            .map_err(|_| HomError::Algebra(crate::staralg::AlgebraError::NotBipartite))?;
        maps.push(m);
    }
    let mut checked = 0;
    let mut surviving = Vec::new();
    for gen in &gens.generators {
        let corner = alg.corner(&gen.element, Side::V)?;
        if corner.is_zero() {
            continue;
        }
        checked += 1;
        let mut x = corner;
        for m in &maps {
            x = m.apply_element(&x)?;
        }
        if !x.is_zero() {
            let last = maps.last().map(|m| m.target()).unwrap_or(alg);
            surviving.push((gen.label.clone(), last.format(&x)));
        }
    }
    Ok(CornerCommutatorReport {
        bound,
        depth,
        checked,
        surviving,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_emn, tests::loops};

    #[test]
    fn i0_loops() {
        let s = i0_generators(&loops(&[2, 2])).unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.generators.iter().all(|g| !g.element.is_zero()));
    }

    #[test]
    fn kernel_matches_commutator_form() {
        let g = build_emn(2, 3).unwrap();
        let alg = Algebra::bipartite(&g);
        let x = gamma(&alg, "e1", "f1", "e2", "f2").unwrap();
        let y = gamma_commutator_form(&alg, "e1", "f1", "e2", "f2").unwrap();
        assert!(alg.equals(&x, &y).unwrap());
        assert!(!kernel_generators(&g).unwrap().is_empty());
    }

    #[test]
    fn commutators_include_projection_pair() {
        let g = build_emn(2, 3).unwrap();
        let s = commutator_generators(g.separated(), 2).unwrap();
        let alg = &s.algebra;
        let ee = alg.mul(&alg.edge_named("e1").unwrap(), &alg.star(&alg.edge_named("e1").unwrap())).unwrap();
        let ff = alg.mul(&alg.edge_named("f1").unwrap(), &alg.star(&alg.edge_named("f1").unwrap())).unwrap();
        let c = alg.sub(&alg.mul(&ee, &ff).unwrap(), &alg.mul(&ff, &ee).unwrap()).unwrap();
        let c = alg.normal_form(&c);
        assert!(s
            .generators
            .iter()
            .any(|x| alg.equals(&x.element, &c).unwrap() || alg.equals(&x.element, &alg.scale(&c, &crate::staralg::Scalar::from_int(-1))).unwrap()));
    }

    #[test]
    fn empty_hsat_has_no_generators() {
        let g = build_emn(2, 3).unwrap();
        let none: [&str; 0] = [];
        assert!(hsat_generators(g.separated(), &none).unwrap().is_empty());
        assert!(matches!(
            ideal_generators(IdealKind::Commutator, &GraphDoc::Bipartite(g), None, &[]),
            Err(HomError::MissingBound)
        ));
    }

    #[test]
    fn corner_commutators_die_at_bound_two() {
        for (m, n) in [(2, 2), (2, 3)] {
            let g = build_emn(m, n).unwrap();
            let r = corner_commutator_check(&g, 2, 2).unwrap();
            assert!(r.checked > 0);
            assert!(r.surviving.is_empty(), "{:?}", r.surviving);
        }
    }
}
