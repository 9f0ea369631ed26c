//! The `(m,n)` laboratory: partitions and their shapes, refinement
//! matrices, ideal-lattice matrices of `L₁(E,ω^M)`, minimal configurations,
//! and the worked quotients of `L(m,n)`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::constructions::{enumerate_hsat, separated_of_weighted, weighted_vertex_name, ConstructionError};
use crate::graphs::{DirectedGraph, SeparatedGraph, WeightedGraph};
use crate::homs::{verify, GeneratorMap, HomError, RelationSet, VerifyReport};
use crate::monoids::{
    grothendieck, leavitt_type, m1_of, order_ideals_weighted, AbelianGroupShape, Budget, LeavittType, MonoidError,
    MonoidPresentation,
};
use crate::staralg::{Algebra, Generator};

#[derive(Debug, Error)]
pub enum MnError {
    #[error("invalid ({m},{n})-partition {parts:?}: {reason}")]
    InvalidPartition {
        m: usize,
        n: u32,
        parts: Vec<u32>,
        reason: &'static str,
    },
    #[error("need {0}")]
    Range(String),
    #[error("graph is not a one-vertex graph of loops")]
    NotLoops,
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

/// `λ = (λ₁,…,λ_m)` with `n = λ₁ ≥ λ₂ ≥ … ≥ λ_m ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MnPartition {
    m: usize,
    n: u32,
    parts: Vec<u32>,
}

impl MnPartition {
    pub fn new(m: usize, n: u32, parts: Vec<u32>) -> Result<Self, MnError> {
        let bad = |reason| MnError::InvalidPartition {
            m,
            n,
            parts: parts.clone(),
            reason,
        };
        if parts.len() != m {
            return Err(bad("needs exactly m parts"));
        }
        if parts.first() != Some(&n) {
            return Err(bad("the first part must equal n"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(bad("parts must be weakly decreasing"));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(bad("parts must be positive"));
        }
        Ok(MnPartition { m, n, parts })
    }

    /// `(n^m)`.
    pub fn largest(m: usize, n: u32) -> Result<Self, MnError> {
        Self::new(m, n, vec![n; m])
    }

    /// `(n,1^{m−1})`.
    pub fn smallest(m: usize, n: u32) -> Result<Self, MnError> {
        let mut parts = vec![1; m];
        if let Some(p) = parts.first_mut() {
            *p = n;
        }
        Self::new(m, n, parts)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn shape(&self) -> ShapeMatrix {
        ShapeMatrix {
            rows: self.parts.iter().map(|&l| (0..self.n).map(|j| u8::from(j < l)).collect()).collect(),
        }
    }

    /// Column lengths of the shape: `ω(e⁽ʲ⁾) = |{i : λ_i ≥ j}|`.
    pub fn weights(&self) -> Vec<u32> {
        (1..=self.n).map(|j| self.parts.iter().filter(|&&l| l >= j).count() as u32).collect()
    }

    pub fn le(&self, other: &MnPartition) -> bool {
        self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for MnPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", p.join(","))
    }
}

/// An `m × n` matrix over `{0,1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ShapeMatrix {
    pub rows: Vec<Vec<u8>>,
}

impl ShapeMatrix {
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j] == 1
    }

    pub fn ones(&self) -> usize {
        self.rows.iter().flatten().filter(|&&x| x == 1).count()
    }

    /// Entrywise `≤`.
    pub fn le(&self, other: &ShapeMatrix) -> bool {
        self.rows.iter().flatten().zip(other.rows.iter().flatten()).all(|(a, b)| a <= b)
    }

    pub fn has_zero_line(&self) -> bool {
        self.rows.iter().any(|r| r.iter().all(|&x| x == 0)) || (0..self.n()).any(|j| self.rows.iter().all(|r| r[j] == 0))
    }

    /// Every 1 is alone in its row or alone in its column.
    pub fn lone_ones(&self) -> bool {
        let row_count: Vec<usize> = self.rows.iter().map(|r| r.iter().filter(|&&x| x == 1).count()).collect();
        let col_count: Vec<usize> = (0..self.n()).map(|j| self.rows.iter().filter(|r| r[j] == 1).count()).collect();
        (0..self.m()).all(|i| (0..self.n()).all(|j| !self.get(i, j) || row_count[i] == 1 || col_count[j] == 1))
    }

    /// The partition whose shape this is, when it is one.
    pub fn to_partition(&self) -> Option<MnPartition> {
        let parts: Vec<u32> = self
            .rows
            .iter()
            .map(|r| {
                let l = r.iter().take_while(|&&x| x == 1).count();
                r[l..].iter().all(|&x| x == 0).then_some(l as u32)
            })
            .collect::<Option<_>>()?;
        let p = MnPartition::new(self.m(), self.n() as u32, parts).ok()?;
        (p.shape() == *self).then_some(p)
    }
}

impl fmt::Display for ShapeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, r) in self.rows.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Loop names `e1…en`, zero-padded to a common width so that name order is
/// numeric order.
pub fn loop_names(n: u32) -> Vec<String> {
    let width = n.to_string().len();
    (1..=n).map(|j| format!("e{j:0width$}")).collect()
}

fn one_vertex(names: &[String], weights: &[u32]) -> WeightedGraph {
    let g = DirectedGraph::new(["v"], names.iter().map(|e| (e.clone(), "v".to_string(), "v".to_string())))
        .expect("loop names are distinct");
    let w: Vec<(String, u64)> = names.iter().cloned().zip(weights.iter().map(|&x| u64::from(x))).collect();
    WeightedGraph::new(g, &w).expect("weights are positive")
}

/// One vertex `v` and `n` loops, `ω(e⁽ʲ⁾)` the length of column `j`.
pub fn partition_to_weighted(p: &MnPartition) -> WeightedGraph {
    one_vertex(&loop_names(p.n), &p.weights())
}

/// The graph `ω^M` with all `n` loops of weight `m`.
pub fn full_weighted(m: usize, n: u32) -> Result<WeightedGraph, MnError> {
    Ok(partition_to_weighted(&MnPartition::largest(m, n)?))
}

/// Reads the partition `λ_i = |{e : ω(e) ≥ i}|` back from a one-vertex
/// graph of loops.
pub fn weighted_to_partition(g: &WeightedGraph) -> Result<MnPartition, MnError> {
    let d = g.graph();
    if d.vertex_count() != 1 || d.edge_count() == 0 {
        return Err(MnError::NotLoops);
    }
    let m = g.vertex_weight(0) as usize;
    let n = d.edge_count() as u32;
    let parts = (1..=m as u32).map(|i| d.edge_ids().filter(|&e| g.weight(e) >= i).count() as u32).collect();
    MnPartition::new(m, n, parts)
}

/// `R(i,j) = a_{v(e⁽ʲ⁾,i)}` inside the shape, `None` outside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementMatrix {
    pub partition: MnPartition,
    pub entries: Vec<Vec<Option<String>>>,
}

impl RefinementMatrix {
    /// Row sums (`a_v = Σ_j R(i,j)`) then column sums (`a_v = Σ_i R(i,j)`),
    /// over the generators of `M₁`.
    pub fn relations(&self) -> MonoidPresentation {
        let names = loop_names(self.partition.n);
        let mut gens = vec!["v".to_string()];
        for (j, e) in names.iter().enumerate() {
            for i in 0..self.partition.m {
                if self.entries[i][j].is_some() {
                    gens.push(weighted_vertex_name(e, i as u32 + 1));
                }
            }
        }
        let pos = |s: &str| gens.iter().position(|g| g == s).expect("listed above");
        let k = gens.len();
        let unit = || {
            let mut v = vec![0; k];
            v[0] = 1;
            v
        };
        let mut rels = Vec::new();
        for row in &self.entries {
            let mut rhs = vec![0; k];
            row.iter().flatten().for_each(|s| rhs[pos(s)] += 1);
            rels.push((unit(), rhs));
        }
        for j in 0..names.len() {
            let mut rhs = vec![0; k];
            self.entries.iter().filter_map(|r| r[j].as_ref()).for_each(|s| rhs[pos(s)] += 1);
            rels.push((unit(), rhs));
        }
        MonoidPresentation::new(gens, rels).expect("consistent lengths")
    }
}

impl fmt::Display for RefinementMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, r) in self.entries.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            let cells: Vec<&str> = r.iter().map(|x| x.as_deref().unwrap_or("0")).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn refinement_matrix(p: &MnPartition) -> RefinementMatrix {
    let names = loop_names(p.n);
    let shape = p.shape();
    let entries = (0..p.m)
        .map(|i| {
            (0..p.n as usize)
                .map(|j| shape.get(i, j).then(|| weighted_vertex_name(&names[j], i as u32 + 1)))
                .collect()
        })
        .collect();
    RefinementMatrix {
        partition: p.clone(),
        entries,
    }
}

fn check_mn(m: usize, n: u32) -> Result<(), MnError> {
    if 1 < m && m as u64 <= u64::from(n) {
        Ok(())
    } else {
        Err(MnError::Range(format!("1 < m ≤ n, got m = {m}, n = {n}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionLattice {
    pub m: usize,
    pub n: u32,
    /// In increasing lexicographic order.
    pub partitions: Vec<MnPartition>,
    /// `(i, j)` when `partitions[j]` covers `partitions[i]`.
    pub covers: Vec<(usize, usize)>,
}

impl PartitionLattice {
    pub fn meet(&self, a: &MnPartition, b: &MnPartition) -> MnPartition {
        let parts = a.parts.iter().zip(&b.parts).map(|(x, y)| *x.min(y)).collect();
        MnPartition::new(self.m, self.n, parts).expect("componentwise min of partitions")
    }

    pub fn join(&self, a: &MnPartition, b: &MnPartition) -> MnPartition {
        let parts = a.parts.iter().zip(&b.parts).map(|(x, y)| *x.max(y)).collect();
        MnPartition::new(self.m, self.n, parts).expect("componentwise max of partitions")
    }

    pub fn min(&self) -> &MnPartition {
        &self.partitions[0]
    }

    pub fn max(&self) -> &MnPartition {
        self.partitions.last().expect("nonempty")
    }
}

pub fn partition_lattice(m: usize, n: u32) -> Result<PartitionLattice, MnError> {
    check_mn(m, n)?;
    fn tails(len: usize, cap: u32) -> Vec<Vec<u32>> {
        if len == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=cap {
            for mut t in tails(len - 1, first) {
                t.insert(0, first);
                out.push(t);
            }
        }
        out
    }
    let mut partitions: Vec<MnPartition> = tails(m - 1, n)
        .into_iter()
        .map(|t| {
            let mut parts = vec![n];
            parts.extend(t);
            MnPartition::new(m, n, parts)
        })
        .collect::<Result<_, _>>()?;
    partitions.sort();
    let mut covers = Vec::new();
    for (i, a) in partitions.iter().enumerate() {
        for (j, b) in partitions.iter().enumerate() {
            if i != j && a.le(b) {
                let dist: u32 = a.parts.iter().zip(&b.parts).map(|(x, y)| y - x).sum();
                if dist == 1 {
                    covers.push((i, j));
                }
            }
        }
    }
    Ok(PartitionLattice { m, n, partitions, covers })
}

const MAX_CELLS: usize = 20;

/// All `m × n` 0/1 matrices without zero rows or columns, in lexicographic
/// order of their row-major entries. Limited to `m·n ≤ 20`.
pub fn ideal_matrices(m: usize, n: u32) -> Result<Vec<ShapeMatrix>, MnError> {
    check_mn(m, n)?;
    let n = n as usize;
    if m * n > MAX_CELLS {
        return Err(MnError::Range(format!("m·n ≤ {MAX_CELLS} for enumeration, got {}", m * n)));
    }
    let cells = m * n;
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << cells) {
        let bit = |k: usize| ((mask >> (cells - 1 - k)) & 1) as u8;
        let rows: Vec<Vec<u8>> = (0..m).map(|i| (0..n).map(|j| bit(i * n + j)).collect()).collect();
        let a = ShapeMatrix { rows };
        if !a.has_zero_line() {
            out.push(a);
        }
    }
    Ok(out)
}

/// The same matrices read off the proper hereditary C-saturated sets of
/// `(E(ω^M)₁, C(ω^M)¹)`: entry `(i,j)` is 1 exactly when `v(e⁽ʲ⁾,i)` is not
/// in `H`. Sorted like [`ideal_matrices`].
pub fn ideal_matrices_from_hsat(m: usize, n: u32) -> Result<Vec<ShapeMatrix>, MnError> {
    check_mn(m, n)?;
    let g = separated_of_weighted(&full_weighted(m, n)?)?;
    let sep = g.separated();
    let names = loop_names(n);
    let total = sep.graph().vertex_count();
    let mut out: Vec<ShapeMatrix> = enumerate_hsat(sep)
        .into_iter()
        .filter(|h| h.len() < total)
        .map(|h| {
            let inside = h.names(sep);
            let rows = (0..m)
                .map(|i| {
                    (0..n as usize)
                        .map(|j| u8::from(!inside.contains(&weighted_vertex_name(&names[j], i as u32 + 1))))
                        .collect()
                })
                .collect();
            ShapeMatrix { rows }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Ideal matrices in which every 1 is alone in its row or its column.
pub fn minimal_configurations(m: usize, n: u32) -> Result<Vec<ShapeMatrix>, MnError> {
    Ok(ideal_matrices(m, n)?.into_iter().filter(ShapeMatrix::lone_ones).collect())
}

/// The minimal elements of `ms` under the entrywise order.
pub fn minimal_elements(ms: &[ShapeMatrix]) -> Vec<ShapeMatrix> {
    ms.iter().filter(|a| !ms.iter().any(|b| b != *a && b.le(a))).cloned().collect()
}

/// The map `L(m,n) → L(1,k)`, `k = n−m+1`, with `x_ii ↦ v` for `i < m`,
/// `x_{m,j} ↦ x_{j−m+1}` for `j ≥ m` and every other `x_ij ↦ 0`. Here
/// `x_ij` is the generator `e⁽ʲ⁾_i` of `ω^M`, and `L(1,k)` is one vertex with
/// loops `x1…xk` in a single set.
pub fn diagonal_map(m: usize, n: u32) -> Result<GeneratorMap, MnError> {
    check_mn(m, n)?;
    let k = n as usize - m + 1;
    let loops: Vec<String> = (1..=k).map(|j| format!("x{j}")).collect();
    let target = DirectedGraph::new(["v"], loops.iter().map(|x| (x.clone(), "v".to_string(), "v".to_string())))
        .expect("distinct loop names");
    let alg = Algebra::new(SeparatedGraph::trivial(target));
    let mut map = GeneratorMap::new("diagonal", None, alg.clone());
    map.set_image(Generator::Vertex("v".into()), alg.vertex_named("v").map_err(HomError::from)?);
    let names = loop_names(n);
    for i in 1..=m {
        for j in 1..=n as usize {
            let image = if i < m && i == j {
                alg.vertex_named("v").map_err(HomError::from)?
            } else if i == m && j >= m {
                alg.edge_named(&loops[j - m]).map_err(HomError::from)?
            } else {
                alg.zero()
            };
            map.set_image(Generator::Weighted(names[j - 1].clone(), i as u32), image);
        }
    }
    Ok(map)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub presentation: String,
    pub group: AbelianGroupShape,
    pub leavitt_type: LeavittType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalMapReport {
    pub target: String,
    pub images: Vec<(String, String)>,
    pub verify: VerifyReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Example59Report {
    pub m: usize,
    pub n: u32,
    pub weights: Vec<u32>,
    pub m1: String,
    /// After eliminating generators, renamed `a` (for `a_v`) and `x`.
    pub simplified: String,
    pub eliminated: Vec<(String, String)>,
    pub group: AbelianGroupShape,
    pub leavitt_type: LeavittType,
    /// Vertices of the nontrivial hereditary C-saturated sets.
    pub nontrivial_ideals: Vec<Vec<String>>,
    pub quotient: QuotientReport,
    /// `(x_ij)` with `x₁₁` replaced by 0.
    pub generator_matrix: Vec<Vec<String>>,
    pub diagonal_map: DiagonalMapReport,
}

/// Monoid data for the minimal partition `(n,1^{m−1})`, its quotient by the
/// unique nontrivial ideal, and the diagonal map into `L(1, n−m+1)`.
pub fn example_59_report(m: usize, n: u32, budget: Budget) -> Result<Example59Report, MnError> {
    if m < 3 || m as u64 > u64::from(n) {
        return Err(MnError::Range(format!("3 ≤ m ≤ n, got m = {m}, n = {n}")));
    }
    let p = MnPartition::smallest(m, n)?;
    let g = partition_to_weighted(&p);
    let m1 = m1_of(&g);
    let (small, eliminated) = m1.simplify();
    let small = if small.rank() == 2 {
        small.renamed(vec!["a".into(), "x".into()])?
    } else {
        small
    };
    let lat = order_ideals_weighted(&g)?;
    let nontrivial: Vec<&crate::monoids::OrderIdeal> = lat.proper_nontrivial();
    let quotient = match nontrivial.as_slice() {
        [ideal] => {
            let (q, _) = m1.quotient_by(&ideal.generators)?.simplify();
            let q = if q.rank() == 1 { q.renamed(vec!["a".into()])? } else { q };
            QuotientReport {
                presentation: q.to_string(),
                group: grothendieck(&q),
                leavitt_type: leavitt_type(&q, &q.generators()[0].clone(), budget)?,
            }
        }
        _ => QuotientReport {
            presentation: String::new(),
            group: grothendieck(&m1),
            leavitt_type: LeavittType::Unknown {
                reason: format!("expected one nontrivial ideal, found {}", nontrivial.len()),
            },
        },
    };
    let generator_matrix = (1..=m)
        .map(|i| {
            (1..=n as usize)
                .map(|j| if (i, j) == (1, 1) { "0".to_string() } else { format!("x{i},{j}") })
                .collect()
        })
        .collect();
    let map = diagonal_map(m, n)?;
    let full = full_weighted(m, n)?;
    let report = verify(&map, &RelationSet::weighted(&full))?;
    let images = map
        .images()
        .iter()
        .map(|(gen, x)| (gen.to_string(), map.target().format(x)))
        .collect();
    Ok(Example59Report {
        m,
        n,
        weights: p.weights(),
        m1: m1.to_string(),
        simplified: small.to_string(),
        eliminated,
        group: grothendieck(&m1),
        leavitt_type: leavitt_type(&small, "a", budget).or_else(|_| leavitt_type(&m1, "v", budget))?,
        nontrivial_ideals: nontrivial.iter().map(|i| i.hsat.clone()).collect(),
        quotient,
        generator_matrix,
        diagonal_map: DiagonalMapReport {
            target: format!("L(1,{})", n as usize - m + 1),
            images,
            verify: report,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_weights() {
        let p = MnPartition::new(3, 4, vec![4, 2, 2]).unwrap();
        assert_eq!(p.weights(), [3, 3, 1, 1]);
        assert_eq!(MnPartition::largest(3, 4).unwrap().weights(), [3; 4]);
        assert_eq!(MnPartition::smallest(3, 5).unwrap().weights(), [3, 1, 1, 1, 1]);
        assert!(MnPartition::new(2, 3, vec![2, 1]).is_err());
        assert!(MnPartition::new(2, 3, vec![3, 4]).is_err());
        assert_eq!(weighted_to_partition(&partition_to_weighted(&p)).unwrap(), p);
    }

    #[test]
    fn refinement_zeros() {
        let p = MnPartition::new(3, 4, vec![4, 2, 2]).unwrap();
        let r = refinement_matrix(&p);
        let zeros: Vec<(usize, usize)> = (0..3)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| r.entries[i][j].is_none())
            .map(|(i, j)| (i + 1, j + 1))
            .collect();
        assert_eq!(zeros, [(2, 3), (2, 4), (3, 3), (3, 4)]);
        assert!(r.relations().same_presentation(&m1_of(&partition_to_weighted(&p))));
    }

    #[test]
    fn lattices_and_matrices() {
        let l = partition_lattice(2, 3).unwrap();
        let parts: Vec<String> = l.partitions.iter().map(|p| p.to_string()).collect();
        assert_eq!(parts, ["(3,1)", "(3,2)", "(3,3)"]);
        assert_eq!(l.min(), &MnPartition::smallest(2, 3).unwrap());
        assert_eq!(ideal_matrices(2, 2).unwrap().len(), 7);
        assert_eq!(ideal_matrices_from_hsat(2, 2).unwrap(), ideal_matrices(2, 2).unwrap());
        let mins = minimal_configurations(2, 2).unwrap();
        assert_eq!(mins.iter().map(|a| a.to_string()).collect::<Vec<_>>(), ["0 1\n1 0", "1 0\n0 1"]);
        assert!(partition_lattice(1, 3).is_err());
    }

    #[test]
    fn diagonal_map_kills_relations() {
        for (m, n) in [(2, 2), (2, 3), (3, 5)] {
            let map = diagonal_map(m, n).unwrap();
            let r = verify(&map, &RelationSet::weighted(&full_weighted(m, n).unwrap())).unwrap();
            assert!(r.all_zero, "({m},{n}): {:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn minimal_partition_values() {
        let r = example_59_report(3, 5, Budget::default()).unwrap();
        assert_eq!(r.group.to_string(), "Z/2");
        assert_eq!(r.leavitt_type, LeavittType::Found { p: 1, q: 2 });
        assert_eq!(r.nontrivial_ideals.len(), 1);
        assert_eq!(r.quotient.group.to_string(), "0");
        assert_eq!(r.quotient.leavitt_type, LeavittType::Found { p: 1, q: 1 });
        assert!(r.diagonal_map.verify.all_zero);
        assert!(example_59_report(2, 5, Budget::default()).is_err());
    }
}
