use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::MonoidPresentation;

/// `ℤ^rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with `1 < d₁ | d₂ | … | d_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupShape {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupShape {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// `ℤ/n` (the trivial group when `n = 1`).
    pub fn is_cyclic_of_order(&self, n: u64) -> bool {
        self.rank == 0
            && match n {
                1 => self.torsion.is_empty(),
                _ => self.torsion == [BigInt::from(n)],
            }
    }
}

impl fmt::Display for AbelianGroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

struct Num<'a>(&'a BigInt);

impl Serialize for Num<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(n) => s.serialize_u64(n),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl Serialize for AbelianGroupShape {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AbelianGroupShape", 3)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("torsion", &self.torsion.iter().map(Num).collect::<Vec<_>>())?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

/// `D = U·A·V` with `D` diagonal and `d₁ | d₂ | …`; only `V` is kept.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero diagonal entries, positive, in divisibility order.
    pub diagonal: Vec<BigInt>,
    /// Unimodular column transform, `cols × cols`.
    pub v: Vec<Vec<BigInt>>,
    pub cols: usize,
}

pub fn smith_normal_form(rows: &[Vec<BigInt>], cols: usize) -> SmithForm {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < m.min(cols) {
        // Smallest nonzero entry of the trailing block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..cols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                add_col(&mut a, j, t, &q);
                add_col(&mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    swap_cols(&mut a, t, j);
                    swap_cols(&mut v, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility of the trailing block by the pivot.
            let bad = (t + 1..m).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let x = a[i][j].clone();
                        a[t][j] += x;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for j in t..cols {
                a[t][j] = -a[t][j].clone();
            }
        }
        diagonal.push(a[t][t].clone());
        t += 1;
    }
    SmithForm { diagonal, v, cols }
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// Column `j` minus `q` times column `t`.
fn add_col(a: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let d = q * &row[t];
        row[j] -= d;
    }
}

fn relation_matrix(p: &MonoidPresentation) -> Vec<Vec<BigInt>> {
    p.relations()
        .iter()
        .map(|(l, r)| l.iter().zip(r).map(|(a, b)| BigInt::from(*a) - BigInt::from(*b)).collect())
        .collect()
}

/// Universal group: `ℤ^gens` modulo the rows `lhs − rhs`.
pub fn grothendieck(p: &MonoidPresentation) -> AbelianGroupShape {
    let s = smith_normal_form(&relation_matrix(p), p.rank());
    AbelianGroupShape {
        rank: p.rank() - s.diagonal.len(),
        torsion: s.diagonal.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Whether the integer vector `z` lies in the row lattice of relation
/// differences, i.e. `z` is 0 in the Grothendieck group.
pub fn in_relation_lattice(p: &MonoidPresentation, z: &[i64]) -> bool {
    let s = smith_normal_form(&relation_matrix(p), p.rank());
    (0..s.cols).all(|j| {
        let y: BigInt = z.iter().enumerate().map(|(i, c)| BigInt::from(*c) * &s.v[i][j]).sum();
        match s.diagonal.get(j) {
            Some(d) => y.is_multiple_of(d),
            None => y.is_zero(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|x| BigInt::from(*x)).collect()).collect()
    }

    fn det(m: &[Vec<BigInt>]) -> BigInt {
        if m.len() == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..m.len() {
            let minor: Vec<Vec<BigInt>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n).filter(|b| b.count_ones() as usize == k).map(|b| (0..n).filter(|i| b >> i & 1 == 1).collect()).collect()
    }

    /// gcd of all k×k minors, computed by cofactor expansion.
    fn determinantal_divisor(a: &[Vec<BigInt>], cols: usize, k: usize) -> BigInt {
        let mut g = BigInt::zero();
        for rs in subsets(a.len(), k) {
            for cs in subsets(cols, k) {
                let m: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j].clone()).collect()).collect();
                g = g.gcd(&det(&m));
            }
        }
        g
    }

    fn pres(gens: &[&str], rels: &[(Vec<u64>, Vec<u64>)]) -> MonoidPresentation {
        MonoidPresentation::new(gens.iter().map(|s| s.to_string()).collect(), rels.to_vec()).unwrap()
    }

    #[test]
    fn small_groups() {
        let omega0 = pres(&["a", "x"], &[(vec![1, 0], vec![2, 1]), (vec![1, 0], vec![4, 1])]);
        let g = grothendieck(&omega0);
        assert_eq!(g.to_string(), "Z/2");
        assert!(g.is_cyclic_of_order(2));
        assert_eq!(grothendieck(&pres(&["a"], &[(vec![1], vec![1])])).to_string(), "Z");
        let q = pres(&["a"], &[(vec![1], vec![3]), (vec![1], vec![5])]);
        assert!(grothendieck(&q).is_cyclic_of_order(2));
        assert_eq!(grothendieck(&pres(&["a"], &[(vec![1], vec![2])])).to_string(), "0");
    }

    #[test]
    fn lattice_membership() {
        let p = pres(&["a", "x"], &[(vec![1, 0], vec![2, 1]), (vec![1, 0], vec![4, 1])]);
        assert!(in_relation_lattice(&p, &[2, 0]));
        assert!(!in_relation_lattice(&p, &[1, 0]));
        assert!(in_relation_lattice(&p, &[1, 1]));
    }

    proptest! {
        #[test]
        fn divisors_match_minors(rows in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 3), 1..4)) {
            let a = big(&rows);
            let s = smith_normal_form(&a, 3);
            for w in s.diagonal.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
            let mut prod = BigInt::one();
            for k in 1..=a.len().min(3) {
                let dk = determinantal_divisor(&a, 3, k);
                if k <= s.diagonal.len() {
                    prod *= &s.diagonal[k - 1];
                    prop_assert_eq!(&prod, &dk);
                } else {
                    prop_assert!(dk.is_zero());
                }
            }
        }

        #[test]
        fn membership_of_combinations(rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 1..4),
                                      coef in proptest::collection::vec(-3i64..=3, 3)) {
            let rels: Vec<(Vec<u64>, Vec<u64>)> = rows
                .iter()
                .map(|r| (r.iter().map(|x| (*x).max(0) as u64).collect(), r.iter().map(|x| (-*x).max(0) as u64).collect()))
                .collect();
            let p = MonoidPresentation::new(vec!["a".into(), "b".into(), "c".into()], rels).unwrap();
            let z: Vec<i64> = (0..3).map(|j| rows.iter().zip(&coef).map(|(r, c)| r[j] * c).sum()).collect();
            prop_assert!(in_relation_lattice(&p, &z));
        }

        #[test]
        fn invariant_under_permutation(rows in proptest::collection::vec(proptest::collection::vec(0u64..=4, 4), 1..4)) {
            let rels: Vec<(Vec<u64>, Vec<u64>)> = rows.iter().map(|r| (r[..2].to_vec(), r[2..].to_vec())).collect();
            let p = MonoidPresentation::new(vec!["a".into(), "b".into()], rels.clone()).unwrap();
            let mut rev = rels.clone();
            rev.reverse();
            let swapped: Vec<(Vec<u64>, Vec<u64>)> =
                rev.iter().map(|(l, r)| (vec![l[1], l[0]], vec![r[1], r[0]])).collect();
            let q = MonoidPresentation::new(vec!["b".into(), "a".into()], swapped).unwrap();
            prop_assert_eq!(grothendieck(&p), grothendieck(&q));
        }
    }
}
