//! Free expressions over named generators and their text grammar:
//!
//! ```text
//! expr     := term ( '+' term | '-' term )*
//! term     := [ rational ] factor+
//! factor   := ident [ '*' ] | '(' expr ')' [ '*' ]
//! ident    := vertex | edge | edge '.' int
//! rational := ['-'] int [ '/' int ]
//! ```
//!
//! Identifiers are matched against the known names, longest first, so names
//! may contain `^ ( , ) ~ _`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use super::algebra::{AlgElement, Algebra, AlgebraError};
use super::scalar::Scalar;
use crate::graphs::{SeparatedGraph, WeightedGraph};

/// A generator of one of the presentations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Generator {
    Vertex(String),
    Edge(String),
    /// `e_i` of a weighted graph.
    Weighted(String, u32),
    /// `p_v` of the corner presentations.
    P(String),
    Tau(String, String),
    Rho(String, String),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Vertex(v) => write!(f, "{v}"),
            Generator::Edge(e) => write!(f, "{e}"),
            Generator::Weighted(e, i) => write!(f, "{e}.{i}"),
            Generator::P(v) => write!(f, "p[{v}]"),
            Generator::Tau(e, g) => write!(f, "tau[{e},{g}]"),
            Generator::Rho(e, g) => write!(f, "rho[{e},{g}]"),
        }
    }
}

/// A noncommutative polynomial in generators and their adjoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FreeExpr {
    Zero,
    Gen(Generator),
    Star(Box<FreeExpr>),
    Mul(Vec<FreeExpr>),
    Lin(Vec<(Scalar, FreeExpr)>),
}

impl FreeExpr {
    pub fn gen(g: Generator) -> Self {
        FreeExpr::Gen(g)
    }

    pub fn star(self) -> Self {
        FreeExpr::Star(Box::new(self))
    }

    pub fn mul(factors: Vec<FreeExpr>) -> Self {
        FreeExpr::Mul(factors)
    }

    /// `Σ c_i x_i`, with `Σ ∅ = 0`.
    pub fn lin(terms: Vec<(Scalar, FreeExpr)>) -> Self {
        if terms.is_empty() {
            FreeExpr::Zero
        } else {
            FreeExpr::Lin(terms)
        }
    }

    pub fn sum(terms: Vec<FreeExpr>) -> Self {
        Self::lin(terms.into_iter().map(|t| (Scalar::one(), t)).collect())
    }

    pub fn minus(self, other: FreeExpr) -> Self {
        FreeExpr::Lin(vec![(Scalar::one(), self), (Scalar::from_int(-1), other)])
    }

    /// Every generator occurring in the expression.
    pub fn generators(&self) -> BTreeSet<Generator> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut BTreeSet<Generator>) {
        match self {
            FreeExpr::Zero => {}
            FreeExpr::Gen(g) => {
                out.insert(g.clone());
            }
            FreeExpr::Star(x) => x.collect(out),
            FreeExpr::Mul(xs) => xs.iter().for_each(|x| x.collect(out)),
            FreeExpr::Lin(xs) => xs.iter().for_each(|(_, x)| x.collect(out)),
        }
    }

    /// Substitutes `image` for every generator and evaluates in `alg`.
    pub fn eval<E>(&self, alg: &Algebra, image: &mut impl FnMut(&Generator) -> Result<AlgElement, E>) -> Result<AlgElement, E>
    where
        E: From<AlgebraError>,
    {
        Ok(match self {
            FreeExpr::Zero => alg.zero(),
            FreeExpr::Gen(g) => image(g)?,
            FreeExpr::Star(x) => alg.star(&x.eval(alg, image)?),
            FreeExpr::Mul(xs) => {
                let mut factors = Vec::with_capacity(xs.len());
                for x in xs {
                    factors.push(x.eval(alg, image)?);
                }
                alg.product(&factors)?
            }
            FreeExpr::Lin(xs) => {
                let mut acc = alg.zero();
                for (c, x) in xs {
                    acc = alg.add(&acc, &alg.scale(&x.eval(alg, image)?, c))?;
                }
                alg.normal_form(&acc)
            }
        })
    }
}

impl fmt::Display for FreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeExpr::Zero => write!(f, "0"),
            FreeExpr::Gen(g) => write!(f, "{g}"),
            FreeExpr::Star(x) => match **x {
                FreeExpr::Gen(_) => write!(f, "{x}*"),
                _ => write!(f, "({x})*"),
            },
            FreeExpr::Mul(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    match x {
                        FreeExpr::Lin(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
            FreeExpr::Lin(xs) => {
                for (i, (c, x)) in xs.iter().enumerate() {
                    let negative = c.is_negative();
                    match (i, negative) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    let abs = c.abs();
                    if !abs.is_one() {
                        write!(f, "{abs} ")?;
                    }
                    match x {
                        FreeExpr::Lin(_) | FreeExpr::Zero => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Symbol {
    Vertex,
    Edge { source: String, range: String, weight: Option<u32> },
}

/// The names an expression may use, with their endpoints.
#[derive(Clone, Debug)]
pub struct Vocabulary {
    names: HashMap<String, Symbol>,
    lengths: Vec<usize>,
}

impl Vocabulary {
    fn from_symbols(names: HashMap<String, Symbol>) -> Self {
        let mut lengths: Vec<usize> = names.keys().map(String::len).collect::<BTreeSet<_>>().into_iter().collect();
        lengths.reverse();
        Vocabulary { names, lengths }
    }

    pub fn separated(g: &SeparatedGraph) -> Self {
        let d = g.graph();
        let mut names = HashMap::new();
        for v in d.vertex_names() {
            names.insert(v.clone(), Symbol::Vertex);
        }
        for e in d.edges() {
            names.insert(
                e.name.clone(),
                Symbol::Edge {
                    source: d.vertex_name(e.source).to_string(),
                    range: d.vertex_name(e.range).to_string(),
                    weight: None,
                },
            );
        }
        Self::from_symbols(names)
    }

    /// Edges must carry an index `e.i` with `1 ≤ i ≤ ω(e)`.
    pub fn weighted(g: &WeightedGraph) -> Self {
        let d = g.graph();
        let mut names = HashMap::new();
        for v in d.vertex_names() {
            names.insert(v.clone(), Symbol::Vertex);
        }
        for (id, e) in d.edges().iter().enumerate() {
            names.insert(
                e.name.clone(),
                Symbol::Edge {
                    source: d.vertex_name(e.source).to_string(),
                    range: d.vertex_name(e.range).to_string(),
                    weight: Some(g.weight(id as u32)),
                },
            );
        }
        Self::from_symbols(names)
    }

    fn longest_match<'a>(&self, rest: &'a str) -> Option<&'a str> {
        self.lengths
            .iter()
            .filter(|&&n| n <= rest.len() && rest.is_char_boundary(n))
            .map(|&n| &rest[..n])
            .find(|cand| self.names.contains_key(*cand))
    }

    /// `(source, range)` of a generator, when it is a single identifier.
    fn endpoints(&self, g: &Generator) -> Option<(String, String)> {
        match g {
            Generator::Vertex(v) => Some((v.clone(), v.clone())),
            Generator::Edge(e) | Generator::Weighted(e, _) => match self.names.get(e) {
                Some(Symbol::Edge { source, range, .. }) => Some((source.clone(), range.clone())),
                _ => None,
            },
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct ExprError {
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(Generator),
    Number(String),
    Plus,
    Minus,
    Star,
    Slash,
    Open,
    Close,
}

fn lex(text: &str, vocab: &Vocabulary) -> Result<Vec<(Tok, usize)>, ExprError> {
    let mut out = Vec::new();
    let mut i = 0;
    let err = |at: usize, message: String| ExprError {
        column: text[..at].chars().count() + 1,
        message,
    };
    while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().expect("nonempty");
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, i));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let len = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
            out.push((Tok::Number(rest[..len].to_string()), i));
            i += len;
            continue;
        }
        if let Some(name) = vocab.longest_match(rest) {
            let start = i;
            i += name.len();
            let gen = match &vocab.names[name] {
                Symbol::Vertex => Generator::Vertex(name.to_string()),
                Symbol::Edge { weight, .. } => {
                    let after = &text[i..];
                    if let Some(idx) = after.strip_prefix('.') {
                        let len = idx.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(idx.len());
                        if len == 0 {
                            return Err(err(i, "expected an index after `.`".into()));
                        }
                        let n: u32 = idx[..len]
                            .parse()
                            .map_err(|_| err(i + 1, "index out of range".into()))?;
                        let Some(w) = weight else {
                            return Err(err(start, format!("`{name}` is not a weighted edge")));
                        };
                        if n == 0 || n > *w {
                            return Err(err(start, format!("`{name}.{n}` needs 1 ≤ {n} ≤ ω({name}) = {w}")));
                        }
                        i += 1 + len;
                        Generator::Weighted(name.to_string(), n)
                    } else if weight.is_some() {
                        return Err(err(start, format!("weighted edge `{name}` needs an index `{name}.i`")));
                    } else {
                        Generator::Edge(name.to_string())
                    }
                }
            };
            out.push((Tok::Ident(gen), start));
            continue;
        }
        if c == '(' {
            out.push((Tok::Open, i));
            i += 1;
            continue;
        }
        let word: String = rest.chars().take_while(|ch| !ch.is_whitespace()).collect();
        return Err(err(i, format!("unknown name `{word}`")));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    text: &'a str,
    vocab: &'a Vocabulary,
}

impl Parser<'_> {
    fn column(&self, at: usize) -> usize {
        self.text[..at.min(self.text.len())].chars().count() + 1
    }

    fn err_here(&self, message: impl Into<String>) -> ExprError {
        let at = self.toks.get(self.pos).map_or(self.text.len(), |t| t.1);
        ExprError {
            column: self.column(at),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expr(&mut self) -> Result<FreeExpr, ExprError> {
        let mut terms = Vec::new();
        let mut sign = 1;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            sign = -1;
        }
        loop {
            let (c, t) = self.term()?;
            let c = if sign < 0 { -c } else { c };
            terms.push((c, t));
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(FreeExpr::Lin(terms))
    }

    fn rational(&mut self) -> Result<Option<Scalar>, ExprError> {
        let (negative, n) = match (self.peek(), self.toks.get(self.pos + 1).map(|t| &t.0)) {
            (Some(Tok::Number(n)), _) => (false, n.clone()),
            (Some(Tok::Minus), Some(Tok::Number(n))) => (true, n.clone()),
            _ => return Ok(None),
        };
        self.pos += if negative { 2 } else { 1 };
        let mut text = if negative { format!("-{n}") } else { n };
        if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Number(d)) => {
                    text = format!("{text}/{d}");
                    self.pos += 1;
                }
                _ => return Err(self.err_here("expected a denominator")),
            }
        }
        text.parse::<Scalar>()
            .map(Some)
            .map_err(|e| self.err_here(e.to_string()))
    }

    fn term(&mut self) -> Result<(Scalar, FreeExpr), ExprError> {
        let c = self.rational()?.unwrap_or_else(Scalar::one);
        let mut factors: Vec<(FreeExpr, usize)> = Vec::new();
        while let Some(tok) = self.peek().cloned() {
            let at = self.toks[self.pos].1;
            let f = match tok {
                Tok::Ident(g) => {
                    self.pos += 1;
                    FreeExpr::Gen(g)
                }
                Tok::Open => {
                    self.pos += 1;
                    let inner = self.expr()?;
                    if self.peek() != Some(&Tok::Close) {
                        return Err(self.err_here("expected `)`"));
                    }
                    self.pos += 1;
                    inner
                }
                _ => break,
            };
            let f = if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
                f.star()
            } else {
                f
            };
            if let Some((prev, _)) = factors.last() {
                self.check_composable(prev, &f, at)?;
            }
            factors.push((f, at));
        }
        if factors.is_empty() {
            if c.is_zero() {
                return Ok((c, FreeExpr::Zero));
            }
            return Err(self.err_here("expected a generator"));
        }
        let mut factors: Vec<FreeExpr> = factors.into_iter().map(|(f, _)| f).collect();
        let body = if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            FreeExpr::Mul(factors)
        };
        Ok((c, body))
    }

    fn simple_endpoints(&self, f: &FreeExpr) -> Option<(String, String)> {
        match f {
            FreeExpr::Gen(g) => self.vocab.endpoints(g),
            FreeExpr::Star(x) => match &**x {
                FreeExpr::Gen(g) => self.vocab.endpoints(g).map(|(s, r)| (r, s)),
                _ => None,
            },
            _ => None,
        }
    }

    fn check_composable(&self, prev: &FreeExpr, next: &FreeExpr, at: usize) -> Result<(), ExprError> {
        if let (Some((_, r)), Some((s, _))) = (self.simple_endpoints(prev), self.simple_endpoints(next)) {
            if r != s {
                return Err(ExprError {
                    column: self.column(at),
                    message: format!("`{prev}` ends at `{r}` but `{next}` starts at `{s}`"),
                });
            }
        }
        Ok(())
    }
}

/// Parses an expression against the names of a graph.
pub fn parse_expr(text: &str, vocab: &Vocabulary) -> Result<FreeExpr, ExprError> {
    let toks = lex(text, vocab)?;
    if toks.is_empty() {
        return Err(ExprError {
            column: 1,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        text,
        vocab,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err_here("unexpected token"));
    }
    Ok(e)
}

/// Evaluates a separated-graph expression in its own algebra.
pub fn eval_separated(expr: &FreeExpr, alg: &Algebra) -> Result<AlgElement, AlgebraError> {
    expr.eval(alg, &mut |g: &Generator| match g {
        Generator::Vertex(v) => alg.vertex_named(v),
        Generator::Edge(e) => alg.edge_named(e),
        other => Err(AlgebraError::UnknownGenerator(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_emn, separated_of_weighted};

    fn e23() -> (Algebra, Vocabulary) {
        let g = build_emn(2, 3).unwrap();
        (Algebra::bipartite(&g), Vocabulary::separated(g.separated()))
    }

    #[test]
    fn parse_and_normalize() {
        let (alg, voc) = e23();
        let x = parse_expr("e3 e3* - v + e1 e1* + e2 e2*", &voc).unwrap();
        assert!(eval_separated(&x, &alg).unwrap().is_zero());
        let y = parse_expr("(e1 e1*) (e1 e2*)", &voc).unwrap();
        assert_eq!(alg.format(&eval_separated(&y, &alg).unwrap()), "e1 e2*");
        let z = parse_expr("-1/2 e1* f1 + 3 (e1* f1)*", &voc).unwrap();
        assert_eq!(alg.format(&eval_separated(&z, &alg).unwrap()), "-1/2 e1* f1 + 3 f1* e1");
    }

    #[test]
    fn printed_forms_reparse() {
        let (alg, voc) = e23();
        let x = eval_separated(&parse_expr("e3 e3* f2 f1*", &voc).unwrap(), &alg).unwrap();
        let again = eval_separated(&parse_expr(&alg.format(&x), &voc).unwrap(), &alg).unwrap();
        assert_eq!(x, again);
        assert!(eval_separated(&parse_expr("0", &voc).unwrap(), &alg).unwrap().is_zero());
    }

    #[test]
    fn composability_is_checked() {
        let (_, voc) = e23();
        let err = parse_expr("e1 e2", &voc).unwrap_err();
        assert_eq!(err.column, 4);
        assert!(parse_expr("e1* e2", &voc).is_ok());
        assert!(parse_expr("v w", &voc).is_err());
        assert!(parse_expr("e9", &voc).is_err());
        assert!(parse_expr("e1 +", &voc).is_err());
        assert!(parse_expr("(e1", &voc).is_err());
    }

    #[test]
    fn weighted_indices() {
        let d = crate::graphs::DirectedGraph::new(
            ["v"],
            [("e".into(), "v".into(), "v".into()), ("f".into(), "v".into(), "v".into())],
        )
        .unwrap();
        let g = WeightedGraph::new(d, &[("e".into(), 2), ("f".into(), 1)]).unwrap();
        let voc = Vocabulary::weighted(&g);
        let x = parse_expr("e.2 f.1*", &voc).unwrap();
        assert_eq!(
            x.generators().into_iter().collect::<Vec<_>>(),
            vec![Generator::Weighted("e".into(), 2), Generator::Weighted("f".into(), 1)]
        );
        assert!(parse_expr("f.2", &voc).is_err());
        assert!(parse_expr("e", &voc).is_err());
        assert!(parse_expr("e.", &voc).is_err());
        let _ = separated_of_weighted(&g).unwrap();
    }

    #[test]
    fn longest_name_wins() {
        let g = separated_of_weighted(&{
            let d = crate::graphs::DirectedGraph::new(["v"], [("e".into(), "v".into(), "v".into())]).unwrap();
            WeightedGraph::new(d, &[("e".into(), 2)]).unwrap()
        })
        .unwrap();
        let voc = Vocabulary::separated(g.separated());
        let x = parse_expr("a^1(e) a^e(1)*", &voc).unwrap();
        assert_eq!(x.to_string(), "a^1(e) a^e(1)*");
    }
}
