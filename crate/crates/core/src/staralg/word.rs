use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::graphs::{EdgeId, VertexId};

/// A letter of the extended graph: `edge << 1 | ghost`.
pub type Letter = u32;

pub fn letter(edge: EdgeId, ghost: bool) -> Letter {
    edge << 1 | ghost as u32
}

pub fn letter_edge(l: Letter) -> EdgeId {
    l >> 1
}

pub fn is_ghost(l: Letter) -> bool {
    l & 1 == 1
}

/// The involution on letters.
pub fn flip(l: Letter) -> Letter {
    l ^ 1
}

/// A path in the extended graph. Length-zero words are vertices; for longer
/// words `base` is the source of the first letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub(crate) base: VertexId,
    pub(crate) letters: SmallVec<[Letter; 8]>,
}

impl Word {
    pub fn vertex(v: VertexId) -> Self {
        Word {
            base: v,
            letters: SmallVec::new(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The vertex of a length-zero word, or the source of a longer one.
    pub fn base(&self) -> VertexId {
        self.base
    }
}

/// Shorter words first, then the letter sequence, then the base vertex.
/// Every rewrite step yields strictly smaller words in this order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.base.cmp(&other.base))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_packing() {
        let l = letter(7, true);
        assert_eq!(letter_edge(l), 7);
        assert!(is_ghost(l));
        assert!(!is_ghost(flip(l)));
    }

    #[test]
    fn order_is_length_first() {
        let short = Word {
            base: 5,
            letters: SmallVec::from_slice(&[9]),
        };
        let long = Word {
            base: 0,
            letters: SmallVec::from_slice(&[0, 0]),
        };
        assert!(short < long);
        assert!(Word::vertex(3) < short);
        assert!(Word::vertex(1) < Word::vertex(2));
    }
}
