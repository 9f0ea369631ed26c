use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use smallvec::SmallVec;

use super::scalar::Scalar;
use super::word::{flip, is_ghost, letter, letter_edge, Letter, Word};
use crate::graphs::{fingerprint, BipartiteSeparatedGraph, CSetId, EdgeId, SeparatedGraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("operands belong to different graphs")]
    MixedGraphs,
    #[error("corners need a bipartite graph")]
    NotBipartite,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

/// An element of `L(E,C)`: a finite map from words to nonzero rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgElement {
    graph_id: u64,
    terms: BTreeMap<Word, Scalar>,
}

impl AlgElement {
    pub fn graph_id(&self) -> u64 {
        self.graph_id
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Length of the longest word.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }
}

fn accumulate(map: &mut BTreeMap<Word, Scalar>, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    V,
    W,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Redex {
    /// `e* f` with `X_e = X_f`.
    Cancel(usize),
    /// `e_X e_X*`.
    Expand(usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NormalFormStats {
    pub steps: u64,
    /// A bound on `steps`: the number of words no longer than the input.
    pub bound: u128,
}

/// `L(E,C)` over the rationals, with lookup tables for rewriting.
#[derive(Clone, Debug)]
pub struct Algebra {
    graph: Arc<SeparatedGraph>,
    upper: Option<Vec<bool>>,
    id: u64,
    fingerprint: String,
    source: Vec<VertexId>,
    range: Vec<VertexId>,
    set_of: Vec<CSetId>,
    distinguished: Vec<bool>,
}

impl Algebra {
    pub fn new(graph: SeparatedGraph) -> Self {
        Self::build(graph, None)
    }

    pub fn bipartite(graph: &BipartiteSeparatedGraph) -> Self {
        let flags = graph.graph().vertex_ids().map(|v| graph.is_upper(v)).collect();
        Self::build(graph.separated().clone(), Some(flags))
    }

    fn build(graph: SeparatedGraph, upper: Option<Vec<bool>>) -> Self {
        let fp = fingerprint(&graph.to_raw());
        let id = u64::from_str_radix(&fp[..16], 16).expect("hex digest");
        let d = graph.graph();
        let source = d.edges().iter().map(|e| e.source).collect();
        let range = d.edges().iter().map(|e| e.range).collect();
        let set_of = d.edge_ids().map(|e| graph.set_of(e)).collect();
        let distinguished = d.edge_ids().map(|e| graph.distinguished(graph.set_of(e)) == e).collect();
        Algebra {
            graph: Arc::new(graph),
            upper,
            id,
            fingerprint: fp,
            source,
            range,
            set_of,
            distinguished,
        }
    }

    pub fn graph(&self) -> &SeparatedGraph {
        &self.graph
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn is_bipartite(&self) -> bool {
        self.upper.is_some()
    }

    pub fn is_upper(&self, v: VertexId) -> Option<bool> {
        self.upper.as_ref().map(|u| u[v as usize])
    }

    pub fn letter_source(&self, l: Letter) -> VertexId {
        let e = letter_edge(l) as usize;
        if is_ghost(l) {
            self.range[e]
        } else {
            self.source[e]
        }
    }

    pub fn letter_range(&self, l: Letter) -> VertexId {
        let e = letter_edge(l) as usize;
        if is_ghost(l) {
            self.source[e]
        } else {
            self.range[e]
        }
    }

    pub fn word_source(&self, w: &Word) -> VertexId {
        w.base
    }

    pub fn word_range(&self, w: &Word) -> VertexId {
        w.letters.last().map_or(w.base, |&l| self.letter_range(l))
    }

    /// Builds a word from letters, or `None` when they do not compose.
    pub fn word(&self, letters: &[Letter]) -> Option<Word> {
        let first = *letters.first()?;
        for pair in letters.windows(2) {
            if self.letter_range(pair[0]) != self.letter_source(pair[1]) {
                return None;
            }
        }
        Some(Word {
            base: self.letter_source(first),
            letters: SmallVec::from_slice(letters),
        })
    }

    fn check(&self, a: &AlgElement) -> Result<(), AlgebraError> {
        if a.graph_id != self.id {
            return Err(AlgebraError::MixedGraphs);
        }
        Ok(())
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement {
            graph_id: self.id,
            terms: BTreeMap::new(),
        }
    }

    /// `c · w` without normalizing.
    pub fn monomial(&self, w: Word, c: Scalar) -> AlgElement {
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, w, c);
        AlgElement {
            graph_id: self.id,
            terms,
        }
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Word, Scalar)>) -> AlgElement {
        let mut map = BTreeMap::new();
        for (w, c) in terms {
            accumulate(&mut map, w, c);
        }
        AlgElement {
            graph_id: self.id,
            terms: map,
        }
    }

    pub fn vertex(&self, v: VertexId) -> AlgElement {
        self.monomial(Word::vertex(v), Scalar::one())
    }

    pub fn edge(&self, e: EdgeId) -> AlgElement {
        self.monomial(self.word(&[letter(e, false)]).expect("single letter"), Scalar::one())
    }

    pub fn ghost(&self, e: EdgeId) -> AlgElement {
        self.monomial(self.word(&[letter(e, true)]).expect("single letter"), Scalar::one())
    }

    pub fn vertex_named(&self, name: &str) -> Result<AlgElement, AlgebraError> {
        let v = self
            .graph
            .graph()
            .vertex_id(name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
        Ok(self.vertex(v))
    }

    pub fn edge_named(&self, name: &str) -> Result<AlgElement, AlgebraError> {
        let e = self
            .graph
            .graph()
            .edge_id(name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
        Ok(self.edge(e))
    }

    /// The unit `Σ_v v`.
    pub fn one(&self) -> AlgElement {
        self.from_terms(self.graph.graph().vertex_ids().map(|v| (Word::vertex(v), Scalar::one())))
    }

    pub fn add(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        let mut terms = a.terms.clone();
        for (w, c) in &b.terms {
            accumulate(&mut terms, w.clone(), c.clone());
        }
        Ok(AlgElement {
            graph_id: self.id,
            terms,
        })
    }

    pub fn sub(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement, AlgebraError> {
        self.add(a, &self.scale(b, &Scalar::from_int(-1)))
    }

    pub fn scale(&self, a: &AlgElement, c: &Scalar) -> AlgElement {
        if c.is_zero() {
            return AlgElement {
                graph_id: a.graph_id,
                terms: BTreeMap::new(),
            };
        }
        AlgElement {
            graph_id: a.graph_id,
            terms: a.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Concatenation of two words, `None` when they do not compose.
    fn concat(&self, a: &Word, b: &Word) -> Option<Word> {
        if self.word_range(a) != b.base {
            return None;
        }
        if a.letters.is_empty() {
            return Some(b.clone());
        }
        let mut letters = a.letters.clone();
        letters.extend_from_slice(&b.letters);
        Some(Word { base: a.base, letters })
    }

    /// The product without normalizing.
    pub fn mul_raw(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        let mut terms = BTreeMap::new();
        for (wa, ca) in &a.terms {
            for (wb, cb) in &b.terms {
                if let Some(w) = self.concat(wa, wb) {
                    accumulate(&mut terms, w, ca * cb);
                }
            }
        }
        Ok(AlgElement {
            graph_id: self.id,
            terms,
        })
    }

    pub fn mul(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement, AlgebraError> {
        Ok(self.normal_form(&self.mul_raw(a, b)?))
    }

    /// Product of a list, normalized; the empty product is the unit.
    pub fn product(&self, factors: &[AlgElement]) -> Result<AlgElement, AlgebraError> {
        let Some((first, rest)) = factors.split_first() else {
            return Ok(self.one());
        };
        let mut acc = self.normal_form(first);
        for f in rest {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn star_word(&self, w: &Word) -> Word {
        if w.letters.is_empty() {
            return w.clone();
        }
        let letters: SmallVec<[Letter; 8]> = w.letters.iter().rev().map(|&l| flip(l)).collect();
        Word {
            base: self.letter_source(letters[0]),
            letters,
        }
    }

    pub fn star(&self, a: &AlgElement) -> AlgElement {
        AlgElement {
            graph_id: a.graph_id,
            terms: a.terms.iter().map(|(w, c)| (self.star_word(w), c.conj())).collect(),
        }
    }

    /// The redexes of a word, leftmost first.
    pub fn redexes(&self, w: &Word) -> Vec<Redex> {
        let mut out = Vec::new();
        for (i, pair) in w.letters.windows(2).enumerate() {
            if let Some(r) = self.redex_at(pair[0], pair[1], i) {
                out.push(r);
            }
        }
        out
    }

    fn leftmost_redex(&self, w: &Word) -> Option<Redex> {
        w.letters
            .windows(2)
            .enumerate()
            .find_map(|(i, pair)| self.redex_at(pair[0], pair[1], i))
    }

    fn redex_at(&self, a: Letter, b: Letter, i: usize) -> Option<Redex> {
        let (ea, eb) = (letter_edge(a) as usize, letter_edge(b) as usize);
        if is_ghost(a) && !is_ghost(b) && self.set_of[ea] == self.set_of[eb] {
            return Some(Redex::Cancel(i));
        }
        if !is_ghost(a) && b == flip(a) && self.distinguished[ea] {
            return Some(Redex::Expand(i));
        }
        None
    }

    fn splice(&self, w: &Word, i: usize, insert: &[Letter], vertex: VertexId) -> Word {
        let mut letters: SmallVec<[Letter; 8]> = SmallVec::with_capacity(w.letters.len());
        letters.extend_from_slice(&w.letters[..i]);
        letters.extend_from_slice(insert);
        letters.extend_from_slice(&w.letters[i + 2..]);
        let base = letters.first().map_or(vertex, |&l| self.letter_source(l));
        Word { base, letters }
    }

    /// One rewrite step at `redex`, as a list of words with coefficients.
    pub fn rewrite(&self, w: &Word, redex: Redex) -> Vec<(Word, Scalar)> {
        match redex {
            Redex::Cancel(i) => {
                let (a, b) = (w.letters[i], w.letters[i + 1]);
                if letter_edge(a) != letter_edge(b) {
                    return Vec::new();
                }
                let r = self.range[letter_edge(a) as usize];
                vec![(self.splice(w, i, &[], r), Scalar::one())]
            }
            Redex::Expand(i) => {
                let e = letter_edge(w.letters[i]);
                let x = self.set_of[e as usize];
                let s = self.source[e as usize];
                let mut out = vec![(self.splice(w, i, &[], s), Scalar::one())];
                for &g in &self.graph.cset(x).edges {
                    if g != e {
                        out.push((
                            self.splice(w, i, &[letter(g, false), letter(g, true)], s),
                            Scalar::from_int(-1),
                        ));
                    }
                }
                out
            }
        }
    }

    pub fn is_reduced(&self, w: &Word) -> bool {
        self.leftmost_redex(w).is_none()
    }

    /// The normal form: rewrites the largest pending word at its leftmost
    /// redex until only reduced words remain.
    pub fn normal_form(&self, a: &AlgElement) -> AlgElement {
        self.normal_form_with_stats(a).0
    }

    pub fn normal_form_with_stats(&self, a: &AlgElement) -> (AlgElement, NormalFormStats) {
        let mut pending = a.terms.clone();
        let mut done = BTreeMap::new();
        let mut steps = 0u64;
        while let Some((w, c)) = pending.pop_last() {
            match self.leftmost_redex(&w) {
                None => accumulate(&mut done, w, c),
                Some(r) => {
                    steps += 1;
                    for (w2, c2) in self.rewrite(&w, r) {
                        accumulate(&mut pending, w2, &c * &c2);
                    }
                }
            }
        }
        let stats = NormalFormStats {
            steps,
            bound: self.step_bound(a.degree()),
        };
        (
            AlgElement {
                graph_id: a.graph_id,
                terms: done,
            },
            stats,
        )
    }

    /// Each word is rewritten at most once, and all words produced are no
    /// longer than the input, so `|E⁰| + Σ_{l ≤ L} (2|E¹|)^l` bounds the steps.
    pub fn step_bound(&self, max_len: usize) -> u128 {
        let k = 2 * self.graph.graph().edge_count() as u128;
        let mut total = self.graph.graph().vertex_count() as u128;
        let mut power = 1u128;
        for _ in 1..=max_len {
            power = power.saturating_mul(k);
            total = total.saturating_add(power);
        }
        total
    }

    /// Normal form reached by rewriting random terms at random redexes,
    /// without merging equal words until the end.
    pub fn normal_form_random<R: Rng>(&self, a: &AlgElement, rng: &mut R) -> AlgElement {
        let mut stack: Vec<(Word, Scalar)> = a.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        let mut done = BTreeMap::new();
        while !stack.is_empty() {
            let idx = rng.gen_range(0..stack.len());
            let (w, c) = stack.swap_remove(idx);
            let redexes = self.redexes(&w);
            if redexes.is_empty() {
                accumulate(&mut done, w, c);
                continue;
            }
            let r = redexes[rng.gen_range(0..redexes.len())];
            for (w2, c2) in self.rewrite(&w, r) {
                stack.push((w2, &c * &c2));
            }
        }
        AlgElement {
            graph_id: a.graph_id,
            terms: done,
        }
    }

    pub fn equals(&self, a: &AlgElement, b: &AlgElement) -> Result<bool, AlgebraError> {
        Ok(self.normal_form(&self.sub(a, b)?).is_zero())
    }

    pub fn is_zero(&self, a: &AlgElement) -> Result<bool, AlgebraError> {
        self.check(a)?;
        Ok(self.normal_form(a).is_zero())
    }

    /// Keeps the words with both endpoints upper (`V`) or both lower (`W`).
    pub fn corner(&self, a: &AlgElement, side: Side) -> Result<AlgElement, AlgebraError> {
        self.check(a)?;
        let upper = self.upper.as_ref().ok_or(AlgebraError::NotBipartite)?;
        let want = side == Side::V;
        let nf = self.normal_form(a);
        Ok(AlgElement {
            graph_id: a.graph_id,
            terms: nf
                .terms
                .into_iter()
                .filter(|(w, _)| {
                    upper[self.word_source(w) as usize] == want && upper[self.word_range(w) as usize] == want
                })
                .collect(),
        })
    }

    pub fn format_word(&self, w: &Word) -> String {
        let d = self.graph.graph();
        if w.letters.is_empty() {
            return d.vertex_name(w.base).to_string();
        }
        let parts: Vec<String> = w
            .letters
            .iter()
            .map(|&l| {
                let name = d.edge_name(letter_edge(l));
                if is_ghost(l) {
                    format!("{name}*")
                } else {
                    name.to_string()
                }
            })
            .collect();
        parts.join(" ")
    }

    /// Renders an element in the expression grammar; `0` for zero.
    pub fn format(&self, a: &AlgElement) -> String {
        if a.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in a.terms.iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            if !abs.is_one() {
                let _ = write!(out, "{abs} ");
            }
            out.push_str(&self.format_word(w));
        }
        out
    }
}
