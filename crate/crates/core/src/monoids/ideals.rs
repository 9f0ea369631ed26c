use serde::Serialize;

use super::MonoidPresentation;
use crate::constructions::{enumerate_hsat, separated_of_weighted, ConstructionError};
use crate::graphs::{SeparatedGraph, WeightedGraph};

/// A hereditary C-saturated set together with the generators `{a_u : u ∈ H}`
/// of the matching order ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderIdeal {
    pub hsat: Vec<String>,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderIdealLattice {
    pub ideals: Vec<OrderIdeal>,
    /// Hasse diagram: `(i, j)` when `ideals[i] ⊂ ideals[j]` with nothing between.
    pub covers: Vec<(usize, usize)>,
}

impl OrderIdealLattice {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// Generator sets, each sorted, in sorted order.
    pub fn generator_sets(&self) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .ideals
            .iter()
            .map(|i| {
                let mut g = i.generators.clone();
                g.sort();
                g
            })
            .collect();
        out.sort();
        out
    }

    /// Ideals other than 0 and the whole monoid.
    pub fn proper_nontrivial(&self) -> Vec<&OrderIdeal> {
        let full = self.ideals.iter().map(|i| i.generators.len()).max().unwrap_or(0);
        self.ideals
            .iter()
            .filter(|i| !i.generators.is_empty() && i.generators.len() < full)
            .collect()
    }
}

/// Order ideals of `M(E,C)` read off the hereditary C-saturated sets.
pub fn order_ideals(g: &SeparatedGraph) -> OrderIdealLattice {
    let sets = enumerate_hsat(g);
    let ideals: Vec<OrderIdeal> = sets
        .iter()
        .map(|h| {
            let names = h.names(g);
            OrderIdeal {
                hsat: names.clone(),
                generators: names,
            }
        })
        .collect();
    let subset = |a: usize, b: usize| sets[a].vertices().iter().all(|v| sets[b].contains(*v));
    let mut covers = Vec::new();
    for i in 0..sets.len() {
        for j in 0..sets.len() {
            if i == j || sets[i].len() >= sets[j].len() || !subset(i, j) {
                continue;
            }
            let between = (0..sets.len()).any(|k| {
                k != i && k != j && sets[i].len() < sets[k].len() && sets[k].len() < sets[j].len() && subset(i, k) && subset(k, j)
            });
            if !between {
                covers.push((i, j));
            }
        }
    }
    OrderIdealLattice { ideals, covers }
}

/// Order ideals of `M₁(E,ω)`, through `(E(ω)₁, C(ω)¹)`.
pub fn order_ideals_weighted(g: &WeightedGraph) -> Result<OrderIdealLattice, ConstructionError> {
    Ok(order_ideals(separated_of_weighted(g)?.separated()))
}

/// Brute force: subsets `S` of generators whose `ℕ`-span is closed under
/// every relation move, in both directions, among vectors of coordinate
/// sum at most `cap`. Sorted like [`OrderIdealLattice::generator_sets`].
pub fn order_ideal_oracle(p: &MonoidPresentation, cap: u64) -> Vec<Vec<String>> {
    let n = p.rank();
    assert!(n < 32, "oracle is limited to fewer than 32 generators");
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if span_closed(p, &support, mask, cap) {
            let mut names: Vec<String> = support.iter().map(|&i| p.generators()[i].clone()).collect();
            names.sort();
            out.push(names);
        }
    }
    out.sort();
    out
}

fn span_closed(p: &MonoidPresentation, support: &[usize], mask: u32, cap: u64) -> bool {
    let n = p.rank();
    let mut z = vec![0u64; n];
    let inside = |v: &[u64]| v.iter().enumerate().all(|(i, c)| *c == 0 || mask >> i & 1 == 1);
    // Walk all vectors on `support` with coordinate sum ≤ cap.
    fn walk(
        k: usize,
        left: u64,
        support: &[usize],
        z: &mut Vec<u64>,
        check: &mut dyn FnMut(&[u64]) -> bool,
    ) -> bool {
        if k == support.len() {
            return check(z);
        }
        for c in 0..=left {
            z[support[k]] = c;
            if !walk(k + 1, left - c, support, z, check) {
                z[support[k]] = 0;
                return false;
            }
        }
        z[support[k]] = 0;
        true
    }
    let mut check = |z: &[u64]| {
        p.relations().iter().all(|(l, r)| {
            [(l, r), (r, l)].iter().all(|(from, to)| {
                if z.iter().zip(from.iter()).any(|(a, b)| a < b) {
                    return true;
                }
                let next: Vec<u64> = z.iter().zip(from.iter()).zip(to.iter()).map(|((a, b), c)| a - b + c).collect();
                next.iter().sum::<u64>() > cap || inside(&next)
            })
        })
    };
    walk(0, cap, support, &mut z, &mut check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_emn, tests::loops};
    use crate::monoids::{m1_of, monoid_of};

    #[test]
    fn emn_has_trivial_ideals() {
        let g = build_emn(2, 3).unwrap();
        let lat = order_ideals(g.separated());
        assert_eq!(lat.len(), 2);
        assert_eq!(lat.covers, vec![(0, 1)]);
        let oracle = order_ideal_oracle(&monoid_of(g.separated()), 5);
        assert_eq!(oracle, vec![Vec::<String>::new(), vec!["v".to_string(), "w".to_string()]]);
        assert_eq!(oracle, lat.generator_sets());
    }

    #[test]
    fn full_weights_two_two() {
        let g = loops(&[2, 2]);
        let lat = order_ideals_weighted(&g).unwrap();
        assert_eq!(lat.len(), 8);
        assert_eq!(order_ideal_oracle(&m1_of(&g), 4), lat.generator_sets());
    }

    #[test]
    fn minimal_partition_has_one_nontrivial_ideal() {
        let g = loops(&[3, 1, 1, 1, 1]);
        let lat = order_ideals_weighted(&g).unwrap();
        assert_eq!(lat.proper_nontrivial().len(), 1);
        assert_eq!(order_ideal_oracle(&m1_of(&g), 5), lat.generator_sets());
    }
}
