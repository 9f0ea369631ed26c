//! The line-oriented graph file format.
//!
//! ```text
//! graph separated            # or: graph weighted
//! vertex v
//! vertex w
//! edge e1 = v -> w
//! separation v : [e1 e2 e3] [f1 f2]
//! weight e1 = 2
//! bipartite upper: v lower: w
//! ```

use std::fmt::Write as _;

use super::{GraphDoc, GraphKind, RawEdge, RawGraph, ValidationReport};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphFileError {
    #[error("syntax error: {0}")]
    Syntax(#[from] ParseError),
    #[error("invalid graph:\n{0}")]
    Invalid(#[from] ValidationReport),
}

/// Characters that may not appear anywhere in a vertex or edge name.
const RESERVED: &[char] = &['#', '[', ']', ':', '=', '*', '+', '-', '/', '.'];

/// Names are nonempty, whitespace-free, avoid the reserved punctuation, do
/// not start with a digit and have balanced parentheses.
pub fn is_valid_name(name: &str) -> bool {
    let mut depth = 0i32;
    let Some(first) = name.chars().next() else {
        return false;
    };
    if first.is_ascii_digit() || first == '(' {
        return false;
    }
    for c in name.chars() {
        if c.is_whitespace() || RESERVED.contains(&c) {
            return false;
        }
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

#[derive(Debug, Clone)]
struct Token {
    text: String,
    column: usize,
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if matches!(c, '[' | ']' | ':' | '=') {
            tokens.push(Token {
                text: c.to_string(),
                column: i + 1,
            });
            i += 1;
            continue;
        }
        if c == '-' {
            if chars.get(i + 1) == Some(&'>') {
                tokens.push(Token {
                    text: "->".into(),
                    column: i + 1,
                });
                i += 2;
                continue;
            }
            return Err(ParseError {
                line: lineno,
                column: i + 1,
                message: "unexpected `-`".into(),
            });
        }
        let start = i;
        while i < chars.len()
            && !chars[i].is_whitespace()
            && !matches!(chars[i], '[' | ']' | ':' | '=' | '#')
            && !(chars[i] == '-' && chars.get(i + 1) == Some(&'>'))
        {
            i += 1;
        }
        tokens.push(Token {
            text: chars[start..i].iter().collect(),
            column: start + 1,
        });
    }
    Ok(tokens)
}

struct Line {
    number: usize,
    tokens: Vec<Token>,
    pos: usize,
    width: usize,
}

impl Line {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self, what: &str) -> Result<Token, ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(self.err(self.width + 1, format!("expected {what}"))),
        }
    }

    fn expect(&mut self, text: &str) -> Result<(), ParseError> {
        let t = self.next(&format!("`{text}`"))?;
        if t.text != text {
            return Err(self.err(t.column, format!("expected `{text}`, found `{}`", t.text)));
        }
        Ok(())
    }

    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        let t = self.next(what)?;
        if !is_valid_name(&t.text) {
            return Err(self.err(t.column, format!("`{}` is not a valid {what}", t.text)));
        }
        Ok(t.text)
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err(t.column, format!("unexpected `{}`", t.text))),
        }
    }
}

/// Parses the text format without validating the graph structure.
pub fn parse_raw(text: &str) -> Result<RawGraph, ParseError> {
    let mut raw: Option<RawGraph> = None;
    for (idx, content) in text.lines().enumerate() {
        let number = idx + 1;
        let tokens = tokenize(content, number)?;
        if tokens.is_empty() {
            continue;
        }
        let mut line = Line {
            number,
            tokens,
            pos: 0,
            width: content.chars().count(),
        };
        let head = line.next("a keyword")?;
        let Some(g) = raw.as_mut() else {
            if head.text != "graph" {
                return Err(line.err(head.column, "file must start with `graph separated` or `graph weighted`"));
            }
            let kind = line.next("graph kind")?;
            let kind = match kind.text.as_str() {
                "separated" => GraphKind::Separated,
                "weighted" => GraphKind::Weighted,
                other => return Err(line.err(kind.column, format!("unknown graph kind `{other}`"))),
            };
            line.finish()?;
            raw = Some(RawGraph {
                kind,
                ..RawGraph::default()
            });
            continue;
        };
        match head.text.as_str() {
            "graph" => return Err(line.err(head.column, "repeated `graph` header")),
            "vertex" => {
                g.vertices.push(line.name("vertex name")?);
                while line.peek().is_some() {
                    g.vertices.push(line.name("vertex name")?);
                }
            }
            "edge" => {
                let name = line.name("edge name")?;
                line.expect("=")?;
                let source = line.name("vertex name")?;
                line.expect("->")?;
                let range = line.name("vertex name")?;
                line.finish()?;
                g.edges.push(RawEdge { name, source, range });
            }
            "separation" => {
                let vertex = line.name("vertex name")?;
                line.expect(":")?;
                let mut sets = Vec::new();
                while line.peek().is_some() {
                    line.expect("[")?;
                    let mut set = Vec::new();
                    loop {
                        match line.peek() {
                            Some(t) if t.text == "]" => {
                                line.pos += 1;
                                break;
                            }
                            Some(_) => set.push(line.name("edge name")?),
                            None => return Err(line.err(line.width + 1, "unterminated `[`")),
                        }
                    }
                    sets.push(set);
                }
                if sets.is_empty() {
                    return Err(line.err(line.width + 1, "expected at least one `[...]` set"));
                }
                g.separation.push((vertex, sets));
            }
            "weight" => {
                let edge = line.name("edge name")?;
                line.expect("=")?;
                let t = line.next("weight")?;
                let w: u64 = t
                    .text
                    .parse()
                    .map_err(|_| line.err(t.column, "weights are positive integers"))?;
                if w == 0 {
                    return Err(line.err(t.column, "weights are positive integers"));
                }
                line.finish()?;
                g.weights.push((edge, w));
            }
            "bipartite" => {
                line.expect("upper")?;
                line.expect(":")?;
                let mut upper = Vec::new();
                while line.peek().is_some_and(|t| t.text != "lower") {
                    upper.push(line.name("vertex name")?);
                }
                line.expect("lower")?;
                line.expect(":")?;
                let mut lower = Vec::new();
                while line.peek().is_some() {
                    lower.push(line.name("vertex name")?);
                }
                if g.bipartite.is_some() {
                    return Err(line.err(head.column, "repeated `bipartite` line"));
                }
                g.bipartite = Some((upper, lower));
            }
            other => return Err(line.err(head.column, format!("unknown keyword `{other}`"))),
        }
    }
    raw.ok_or(ParseError {
        line: 1,
        column: 1,
        message: "empty graph file".into(),
    })
}

/// Parses and validates a graph file.
pub fn parse(text: &str) -> Result<GraphDoc, GraphFileError> {
    Ok(parse_raw(text)?.build()?)
}

/// Renders a graph in the text format. Output of [`parse`] round-trips.
pub fn print(g: &RawGraph) -> String {
    let mut out = String::new();
    let kind = match g.kind {
        GraphKind::Separated => "separated",
        GraphKind::Weighted => "weighted",
    };
    let _ = writeln!(out, "graph {kind}");
    for v in &g.vertices {
        let _ = writeln!(out, "vertex {v}");
    }
    for e in &g.edges {
        let _ = writeln!(out, "edge {} = {} -> {}", e.name, e.source, e.range);
    }
    for (v, sets) in &g.separation {
        let sets: Vec<String> = sets.iter().map(|s| format!("[{}]", s.join(" "))).collect();
        let _ = writeln!(out, "separation {v} : {}", sets.join(" "));
    }
    for (e, w) in &g.weights {
        let _ = writeln!(out, "weight {e} = {w}");
    }
    if let Some((upper, lower)) = &g.bipartite {
        let _ = writeln!(out, "bipartite upper: {} lower: {}", upper.join(" "), lower.join(" "));
    }
    out
}

pub fn print_doc(g: &GraphDoc) -> String {
    print(&g.to_raw())
}

#[cfg(test)]
mod tests {
    use super::*;

    const E23: &str = "\
graph separated   # E(2,3)
vertex v
vertex w
edge e1 = v -> w
edge e2 = v -> w
edge e3 = v -> w
edge f1 = v -> w
edge f2 = v -> w
separation v : [e1 e2 e3] [f1 f2]
";

    #[test]
    fn parses_e23() {
        let g = parse(E23).unwrap();
        let GraphDoc::Bipartite(b) = &g else { panic!("expected bipartite") };
        assert_eq!(b.upper_names(), ["v"]);
        assert_eq!(b.separated().csets().len(), 2);
        let again = parse(&print_doc(&g)).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn zero_weight_is_rejected_with_position() {
        let err = parse("graph weighted\nvertex v\nedge e1 = v -> v\nweight e1 = 0\n").unwrap_err();
        let GraphFileError::Syntax(p) = err else { panic!() };
        assert_eq!((p.line, p.column), (4, 13));
        assert_eq!(p.message, "weights are positive integers");
    }

    #[test]
    fn validation_failures_are_forwarded() {
        let text = E23.replace("[f1 f2]", "[f1]");
        match parse(&text).unwrap_err() {
            GraphFileError::Invalid(r) => assert!(r.to_string().contains("missing f2")),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_raw("graph separated\nvertex v\nedge e = v => v\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_raw("vertex v\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_raw("graph separated\nfrobnicate\n").unwrap_err();
        assert!(err.message.contains("unknown keyword"));
        let err = parse_raw("graph separated\nseparation v : [a b\n").unwrap_err();
        assert!(err.message.contains("unterminated"));
    }

    #[test]
    fn names() {
        assert!(is_valid_name("v(e1,f2)"));
        assert!(is_valid_name("a^h(v,1)(~e)"));
        assert!(!is_valid_name("1v"));
        assert!(!is_valid_name("e.1"));
        assert!(!is_valid_name("a)("));
        assert!(!is_valid_name(""));
    }

    #[test]
    fn explicit_bipartite_line() {
        let text = format!("{E23}bipartite upper: v lower: w\n");
        let g = parse(&text).unwrap();
        assert_eq!(print_doc(&g), print_doc(&parse(E23).unwrap()));
    }
}
