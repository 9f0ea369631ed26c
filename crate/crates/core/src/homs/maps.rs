use super::{GeneratorMap, HomError};
use crate::constructions::{
    alpha_edge_name, alpha_level_name, h_name, lower_name, one_step_resolution_indexed, separated_of_vertex_weighted,
    separated_of_weighted, tilde_name,
};
use crate::graphs::{BipartiteSeparatedGraph, WeightedGraph};
use crate::staralg::{AlgElement, Algebra, Generator};

/// `Φ: L(E,ω) → LW(E(ω),C(ω))` with `Φ(v) = v_1` and
/// `Φ(e_i) = h(s(e),i)* ẽ`.
pub fn phi_vw(g: &WeightedGraph) -> Result<GeneratorMap, HomError> {
    let target = separated_of_vertex_weighted(g)?;
    let alg = Algebra::bipartite(&target);
    let mut map = GeneratorMap::new("phi", None, alg.clone());
    let d = g.graph();
    for v in d.vertex_names() {
        map.set_image(Generator::Vertex(v.clone()), alg.vertex_named(&lower_name(v))?);
    }
    for e in d.edge_ids() {
        let name = d.edge_name(e);
        let s = d.vertex_name(d.source(e));
        let tilde = alg.edge_named(&tilde_name(name))?;
        for i in 1..=g.weight(e) {
            let h = alg.edge_named(&h_name(s, i))?;
            map.set_image(Generator::Weighted(name.to_string(), i), alg.mul(&alg.star(&h), &tilde)?);
        }
    }
    Ok(map)
}

/// `Φ₁: L₁(E,ω) → LV(E(ω)₁,C(ω)¹)` with `Φ₁(v) = v` and
/// `Φ₁(e_i) = α^i(e) α^e(i)*`.
pub fn phi1(g: &WeightedGraph) -> Result<GeneratorMap, HomError> {
    let target = separated_of_weighted(g)?;
    let alg = Algebra::bipartite(&target);
    let mut map = GeneratorMap::new("phi1", None, alg.clone());
    let d = g.graph();
    for v in d.vertex_names() {
        map.set_image(Generator::Vertex(v.clone()), alg.vertex_named(v)?);
    }
    for e in d.edge_ids() {
        let name = d.edge_name(e);
        for i in 1..=g.weight(e) {
            let level = alg.edge_named(&alpha_level_name(i, name))?;
            let back = alg.edge_named(&alpha_edge_name(name, i))?;
            map.set_image(Generator::Weighted(name.to_string(), i), alg.mul(&level, &alg.star(&back))?);
        }
    }
    Ok(map)
}

/// The canonical map `L(E,C) → L(E₁,C¹)`: an upper vertex goes to the sum of
/// its tuple vertices, a lower vertex to itself, and an edge `x` to the sum
/// of the adjoints of the edges in `X(x)`.
pub fn phi0(g: &BipartiteSeparatedGraph) -> Result<GeneratorMap, HomError> {
    let (res, index) = one_step_resolution_indexed(g)?;
    let alg = Algebra::bipartite(&res);
    let mut map = GeneratorMap::new("phi0", Some(Algebra::bipartite(g)), alg.clone());
    let d = g.graph();
    let sum = |parts: Vec<AlgElement>| -> Result<AlgElement, HomError> {
        let mut acc = alg.zero();
        for p in parts {
            acc = alg.add(&acc, &p)?;
        }
        Ok(acc)
    };
    for v in d.vertex_ids() {
        let name = d.vertex_name(v).to_string();
        let image = if g.is_upper(v) {
            sum(index.tuples[v as usize].iter().map(|t| alg.vertex_named(t)).collect::<Result<_, _>>()?)?
        } else {
            alg.vertex_named(&name)?
        };
        map.set_image(Generator::Vertex(name), image);
    }
    for x in d.edge_ids() {
        let parts = index.alphas[x as usize]
            .iter()
            .map(|a| alg.edge_named(a).map(|e| alg.star(&e)))
            .collect::<Result<_, _>>()?;
        map.set_image(Generator::Edge(d.edge_name(x).to_string()), sum(parts)?);
    }
    Ok(map)
}

/// The corner generators `p_v ↦ v`, `τ(e,f) ↦ ef*` for `r(e) = r(f)` and
/// `ρ(e,f) ↦ e*f` for `s(e) = s(f)`. Pairs in one C-set give the extended
/// `ρ(e,f) = δ_{e,f} r(e)`.
pub fn rho_tau(g: &BipartiteSeparatedGraph) -> Result<GeneratorMap, HomError> {
    let alg = Algebra::bipartite(g);
    let mut map = GeneratorMap::new("rho-tau", Some(alg.clone()), alg.clone());
    let d = g.graph();
    for v in d.vertex_names() {
        map.set_image(Generator::P(v.clone()), alg.vertex_named(v)?);
    }
    for e in d.edge_ids() {
        for &f in d.in_edges(d.range(e)) {
            let gen = Generator::Tau(d.edge_name(e).to_string(), d.edge_name(f).to_string());
            let img = corner_image(&alg, &gen)?;
            map.set_image(gen, img);
        }
        for &f in d.out_edges(d.source(e)) {
            let gen = Generator::Rho(d.edge_name(e).to_string(), d.edge_name(f).to_string());
            let img = corner_image(&alg, &gen)?;
            map.set_image(gen, img);
        }
    }
    Ok(map)
}

/// The image of one corner generator, checking its side condition.
pub fn corner_image(alg: &Algebra, gen: &Generator) -> Result<AlgElement, HomError> {
    let d = alg.graph().graph();
    let ids = |e: &str, f: &str| -> Result<(u32, u32), HomError> {
        match (d.edge_id(e), d.edge_id(f)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(HomError::Unmapped(gen.clone())),
        }
    };
    match gen {
        Generator::P(v) => Ok(alg.vertex_named(v)?),
        Generator::Tau(e, f) => {
            let (a, b) = ids(e, f)?;
            if d.range(a) != d.range(b) {
                return Err(HomError::SideCondition(gen.clone()));
            }
            Ok(alg.mul(&alg.edge(a), &alg.ghost(b))?)
        }
        Generator::Rho(e, f) => {
            let (a, b) = ids(e, f)?;
            if d.source(a) != d.source(b) {
                return Err(HomError::SideCondition(gen.clone()));
            }
            Ok(alg.mul(&alg.ghost(a), &alg.edge(b))?)
        }
        other => Err(HomError::Unmapped(other.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_emn, tests::loops};

    #[test]
    fn phi_vw_images() {
        let map = phi_vw(&loops(&[2, 2])).unwrap();
        let alg = map.target();
        let img = map.image(&Generator::Weighted("e1".into(), 1)).unwrap();
        assert_eq!(alg.format(img), "h(v,1)* ~e1");
        assert!(phi_vw(&loops(&[2, 1])).is_err());
    }

    #[test]
    fn phi0_upper_vertex() {
        let g = build_emn(2, 3).unwrap();
        let map = phi0(&g).unwrap();
        let img = map.image(&Generator::Vertex("v".into())).unwrap();
        assert_eq!(img.len(), 6);
        assert!(img.terms().keys().all(|w| w.is_empty()));
    }

    #[test]
    fn phi1_partial_isometry() {
        let map = phi1(&loops(&[2, 1])).unwrap();
        let alg = map.target();
        for (_, x) in map.images().iter().filter(|(g, _)| matches!(g, Generator::Weighted(..))) {
            let y = alg.product(&[x.clone(), alg.star(x), x.clone()]).unwrap();
            assert!(alg.equals(&y, x).unwrap());
        }
    }

    #[test]
    fn extended_rho_and_side_conditions() {
        let g = build_emn(2, 3).unwrap();
        let map = rho_tau(&g).unwrap();
        let alg = map.target();
        let r = map.image(&Generator::Rho("e1".into(), "e1".into())).unwrap();
        assert!(alg.equals(r, &alg.vertex_named("w").unwrap()).unwrap());
        assert!(map.image(&Generator::Rho("e1".into(), "e2".into())).unwrap().is_zero());
        let d = crate::graphs::DirectedGraph::new(["u", "w"], [("e".into(), "u".into(), "w".into())]).unwrap();
        let wg = WeightedGraph::new(d, &[("e".into(), 1)]).unwrap();
        let alg = Algebra::bipartite(&crate::constructions::separated_of_weighted(&wg).unwrap());
        let bad = Generator::Tau("a^1(e)".into(), "a^e(1)".into());
        assert!(corner_image(&alg, &bad).is_ok());
        let bad = Generator::Rho("a^1(e)".into(), "a^e(1)".into());
        assert!(matches!(corner_image(&alg, &bad), Err(HomError::SideCondition(_))));
    }
}
