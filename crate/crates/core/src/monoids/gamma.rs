use serde::Serialize;

use crate::constructions::weighted_vertex_name;
use crate::graphs::WeightedGraph;
use crate::homs::{phi1, HomError};
use crate::staralg::{AlgElement, Algebra, Generator};

/// One monoid relation checked as an orthogonal decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionCheck {
    pub relation: String,
    pub orthogonal: bool,
    pub sums: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaCheck {
    pub idempotent: bool,
    pub partial_isometries: bool,
    pub relations: Vec<DecompositionCheck>,
}

impl GammaCheck {
    pub fn ok(&self) -> bool {
        self.idempotent && self.partial_isometries && self.relations.iter().all(|r| r.orthogonal && r.sums)
    }
}

/// `γ(a_v) = v` and `γ(a_{v(e,i)}) = Φ₁(e_i)Φ₁(e_i)*`, in the order of
/// [`m1_of`](super::m1_of) generators.
#[derive(Clone, Debug)]
pub struct GammaImages {
    pub algebra: Algebra,
    pub images: Vec<(String, AlgElement)>,
    pub check: GammaCheck,
}

impl GammaImages {
    pub fn formatted(&self) -> Vec<(String, String)> {
        self.images.iter().map(|(g, x)| (g.clone(), self.algebra.format(x))).collect()
    }
}

pub fn gamma_images(g: &WeightedGraph) -> Result<GammaImages, HomError> {
    let map = phi1(g)?;
    let alg = map.target().clone();
    let d = g.graph();
    let mut images = Vec::new();
    for v in d.vertex_names() {
        images.push((v.clone(), map.image(&Generator::Vertex(v.clone()))?.clone()));
    }
    let mut iso = Vec::new();
    for e in d.edge_ids() {
        let mut row = Vec::new();
        for i in 1..=g.weight(e) {
            let x = map.image(&Generator::Weighted(d.edge_name(e).to_string(), i))?.clone();
            images.push((weighted_vertex_name(d.edge_name(e), i), alg.mul(&x, &alg.star(&x))?));
            row.push(x);
        }
        iso.push(row);
    }
    let mut idempotent = true;
    for (_, p) in &images {
        idempotent &= alg.mul(p, p)? == *p;
    }
    let mut partial_isometries = true;
    for x in iso.iter().flatten() {
        partial_isometries &= alg.product(&[x.clone(), alg.star(x), x.clone()])? == *x;
    }
    let mut relations = Vec::new();
    for v in d.vertex_ids().filter(|&v| !d.is_sink(v)) {
        for i in 1..=g.vertex_weight(v) {
            let parts: Vec<(String, AlgElement)> = d
                .out_edges(v)
                .iter()
                .filter(|&&e| g.weight(e) >= i)
                .map(|&e| {
                    let x = &iso[e as usize][i as usize - 1];
                    Ok((weighted_vertex_name(d.edge_name(e), i), alg.mul(x, &alg.star(x))?))
                })
                .collect::<Result<_, HomError>>()?;
            relations.push(decomposition(&alg, d.vertex_name(v), &alg.vertex(v), &parts)?);
        }
    }
    for e in d.edge_ids() {
        let parts: Vec<(String, AlgElement)> = iso[e as usize]
            .iter()
            .enumerate()
            .map(|(k, x)| Ok((weighted_vertex_name(d.edge_name(e), k as u32 + 1), alg.mul(&alg.star(x), x)?)))
            .collect::<Result<_, HomError>>()?;
        let r = d.range(e);
        relations.push(decomposition(&alg, d.vertex_name(r), &alg.vertex(r), &parts)?);
    }
    Ok(GammaImages {
        algebra: alg,
        images,
        check: GammaCheck {
            idempotent,
            partial_isometries,
            relations,
        },
    })
}

fn decomposition(
    alg: &Algebra,
    lhs: &str,
    whole: &AlgElement,
    parts: &[(String, AlgElement)],
) -> Result<DecompositionCheck, HomError> {
    let mut orthogonal = true;
    let mut sum = alg.zero();
    for (a, (_, p)) in parts.iter().enumerate() {
        sum = alg.add(&sum, p)?;
        for (b, (_, q)) in parts.iter().enumerate() {
            if a != b {
                orthogonal &= alg.mul(p, q)?.is_zero();
            }
        }
    }
    let names: Vec<&str> = parts.iter().map(|(n, _)| n.as_str()).collect();
    Ok(DecompositionCheck {
        relation: format!("{lhs} = {}", names.join(" + ")),
        orthogonal,
        sums: alg.normal_form(&sum) == *whole,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::tests::loops;
    use crate::monoids::m1_of;

    #[test]
    fn two_loops_weight_two() {
        let g = loops(&[2, 2]);
        let gi = gamma_images(&g).unwrap();
        assert!(gi.check.ok(), "{:?}", gi.check);
        let gens: Vec<&str> = gi.images.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(gens, m1_of(&g).generators());
        assert_eq!(gi.check.relations.len(), 4);
        assert_eq!(gi.check.relations[0].relation, "v = v(e1,1) + v(e2,1)");
    }

    #[test]
    fn cross_terms_vanish() {
        let g = loops(&[1, 1]);
        let gi = gamma_images(&g).unwrap();
        let alg = &gi.algebra;
        let (e, f) = (&gi.images[1].1, &gi.images[2].1);
        assert!(alg.mul(e, f).unwrap().is_zero());
        assert!(!e.is_zero());
    }
}
