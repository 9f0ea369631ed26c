use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::smith::in_relation_lattice;
use super::{MonoidError, MonoidPresentation, NVec};

/// Limits for congruence search: vectors with coordinate sum above
/// `max_sum` are not explored, and at most `max_states` vectors are visited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_sum: u64,
    pub max_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_sum: 32,
            max_states: 1_000_000,
        }
    }
}

impl Budget {
    /// The default budget, with `SEPAL_BUDGET_STATES` overriding the state
    /// limit when it parses.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(n) = std::env::var("SEPAL_BUDGET_STATES").ok().and_then(|s| s.trim().parse().ok()) {
            b.max_states = n;
        }
        b
    }
}

/// One application of relation `relation`, left to right when `forward`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub relation: usize,
    pub forward: bool,
    pub from: NVec,
    pub to: NVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "lowercase")]
pub enum Congruence {
    Yes { trace: Vec<Step> },
    No { reason: String },
    Unknown { states: usize, reason: String },
}

impl Congruence {
    pub fn is_yes(&self) -> bool {
        matches!(self, Congruence::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Congruence::No { .. })
    }
}

type Parent = Option<(NVec, usize, bool)>;

struct Side {
    seen: HashMap<NVec, Parent>,
    queue: VecDeque<NVec>,
    truncated: bool,
}

impl Side {
    fn new(start: &NVec) -> Self {
        let mut seen = HashMap::new();
        seen.insert(start.clone(), None);
        Side {
            seen,
            queue: VecDeque::from([start.clone()]),
            truncated: false,
        }
    }

    /// Steps from the start to `z`.
    fn path_to(&self, z: &NVec, p: &MonoidPresentation) -> Vec<Step> {
        let mut out = Vec::new();
        let mut cur = z.clone();
        while let Some(Some((parent, k, fwd))) = self.seen.get(&cur) {
            out.push(step(p, parent, *k, *fwd));
            cur = parent.clone();
        }
        out.reverse();
        out
    }
}

fn step(p: &MonoidPresentation, from: &NVec, relation: usize, forward: bool) -> Step {
    let to = apply(p, from, relation, forward).expect("recorded step applies");
    Step {
        relation,
        forward,
        from: from.clone(),
        to,
    }
}

fn apply(p: &MonoidPresentation, z: &[u64], k: usize, forward: bool) -> Option<NVec> {
    let (l, r) = &p.relations[k];
    let (from, to) = if forward { (l, r) } else { (r, l) };
    if z.iter().zip(from).any(|(a, b)| a < b) {
        return None;
    }
    Some(z.iter().zip(from).zip(to).map(|((a, b), c)| a - b + c).collect())
}

/// Decides `x ~ y` in the monoid. "No" is returned when `x − y` is not in
/// the relation lattice, or when one side's class is enumerated completely
/// inside the coordinate bound without meeting the other.
pub fn congruent(p: &MonoidPresentation, x: &[u64], y: &[u64], budget: Budget) -> Result<Congruence, MonoidError> {
    for v in [x, y] {
        if v.len() != p.rank() {
            return Err(MonoidError::Length {
                got: v.len(),
                expected: p.rank(),
            });
        }
    }
    if x == y {
        return Ok(Congruence::Yes { trace: Vec::new() });
    }
    let diff: Vec<i64> = x.iter().zip(y).map(|(a, b)| *a as i64 - *b as i64).collect();
    if !in_relation_lattice(p, &diff) {
        return Ok(Congruence::No {
            reason: "different classes in the Grothendieck group".into(),
        });
    }
    let (x, y) = (x.to_vec(), y.to_vec());
    let mut sides = [Side::new(&x), Side::new(&y)];
    let mut states = 2usize;
    let mut turn = 0usize;
    loop {
        let other = 1 - turn;
        if sides[turn].queue.is_empty() && sides[other].queue.is_empty() {
            break;
        }
        if sides[turn].queue.is_empty() {
            turn = other;
            continue;
        }
        let z = sides[turn].queue.pop_front().expect("nonempty");
        for k in 0..p.relations.len() {
            for forward in [true, false] {
                let Some(next) = apply(p, &z, k, forward) else { continue };
                if next.iter().sum::<u64>() > budget.max_sum {
                    sides[turn].truncated = true;
                    continue;
                }
                if sides[turn].seen.contains_key(&next) {
                    continue;
                }
                sides[turn].seen.insert(next.clone(), Some((z.clone(), k, forward)));
                states += 1;
                if sides[other].seen.contains_key(&next) {
                    let mut trace = sides[0].path_to(&next, p);
                    let back = sides[1].path_to(&next, p);
                    for s in back.into_iter().rev() {
                        trace.push(step(p, &s.to, s.relation, !s.forward));
                    }
                    return Ok(Congruence::Yes { trace });
                }
                if states > budget.max_states {
                    return Ok(Congruence::Unknown {
                        states,
                        reason: "state budget exhausted".into(),
                    });
                }
                sides[turn].queue.push_back(next);
            }
        }
        if sides[turn].queue.is_empty() && !sides[turn].truncated {
            return Ok(Congruence::No {
                reason: "congruence class enumerated completely".into(),
            });
        }
        turn = other;
    }
    Ok(Congruence::Unknown {
        states,
        reason: "coordinate bound reached on both sides".into(),
    })
}

/// Checks that `trace` is a valid derivation from `x` to `y`.
pub fn replay(p: &MonoidPresentation, x: &[u64], y: &[u64], trace: &[Step]) -> bool {
    let mut cur = x.to_vec();
    for s in trace {
        if s.from != cur || apply(p, &cur, s.relation, s.forward).as_ref() != Some(&s.to) {
            return false;
        }
        cur = s.to.clone();
    }
    cur == y
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "lowercase")]
pub enum LeavittType {
    Found { p: u64, q: u64 },
    Unknown { reason: String },
}

/// Least `p ≥ 1`, then least `q ≥ 1`, with `p·a ~ (p+q)·a`, searched in
/// lexicographic order over `p + q ≤ max_sum`. A hit is reported only when
/// every earlier pair was decided "no".
pub fn leavitt_type(pres: &MonoidPresentation, a: &str, budget: Budget) -> Result<LeavittType, MonoidError> {
    pres.index(a)?;
    let mut undecided = false;
    for p in 1..budget.max_sum {
        for q in 1..=budget.max_sum - p {
            let x = pres.multiple(a, p)?;
            let y = pres.multiple(a, p + q)?;
            match congruent(pres, &x, &y, budget)? {
                Congruence::Yes { .. } if !undecided => return Ok(LeavittType::Found { p, q }),
                Congruence::Yes { .. } => {
                    return Ok(LeavittType::Unknown {
                        reason: format!("({p},{q}) holds but an earlier pair is undecided"),
                    })
                }
                Congruence::No { .. } => {}
                Congruence::Unknown { .. } => undecided = true,
            }
        }
    }
    Ok(LeavittType::Unknown {
        reason: "no identity within the coordinate bound".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(n: u64) -> MonoidPresentation {
        MonoidPresentation::new(vec!["a".into()], vec![(vec![1], vec![n])]).unwrap()
    }

    fn omega0(m: u64, n: u64) -> MonoidPresentation {
        MonoidPresentation::new(
            vec!["a".into(), "x".into()],
            vec![(vec![1, 0], vec![m - 1, 1]), (vec![1, 0], vec![n - 1, 1])],
        )
        .unwrap()
    }

    #[test]
    fn reflexive_is_empty_trace() {
        let p = one(3);
        assert_eq!(congruent(&p, &[2], &[2], Budget::default()).unwrap(), Congruence::Yes { trace: vec![] });
    }

    #[test]
    fn omega0_identity_has_trace() {
        let p = omega0(3, 5);
        let b = Budget::default();
        let (x, y) = (vec![3, 0], vec![1, 0]);
        match congruent(&p, &x, &y, b).unwrap() {
            Congruence::Yes { trace } => assert!(replay(&p, &x, &y, &trace)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_is_not_idempotent_generator() {
        let p = one(2);
        let b = Budget {
            max_sum: 5,
            max_states: 1000,
        };
        assert!(congruent(&p, &[1], &[0], b).unwrap().is_no());
    }

    #[test]
    fn small_budget_is_unknown() {
        let p = omega0(3, 5);
        let b = Budget {
            max_sum: 32,
            max_states: 3,
        };
        assert!(matches!(congruent(&p, &[3, 0], &[1, 0], b).unwrap(), Congruence::Unknown { .. }));
    }

    #[test]
    fn types() {
        for n in 2..=6 {
            assert_eq!(leavitt_type(&one(n), "a", Budget::default()).unwrap(), LeavittType::Found { p: 1, q: n - 1 });
        }
        assert_eq!(leavitt_type(&omega0(3, 5), "a", Budget::default()).unwrap(), LeavittType::Found { p: 1, q: 2 });
    }
}
