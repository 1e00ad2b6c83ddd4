//! Pattern vectors and the shorthand grammar used to name them.
//!
//! A vector is a comma separated list of patterns: `K<n>`, `C<n>`, `P<n>`,
//! `K<n>-e`, `K<a>,<b>` (complete bipartite), or `g6:<graph6>`. Inside a list a
//! comma followed by a digit continues a `K<a>,<b>` pattern.

use super::{graph6, is_subgraph, Graph};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Ordered list of pairwise non-isomorphic patterns, each with at least one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphVector {
    patterns: Vec<Graph>,
    names: Vec<String>,
    edge_counts: Vec<usize>,
}

impl GraphVector {
    /// Validating constructor; patterns with isolated vertices are rejected.
    pub fn new(patterns: Vec<Graph>) -> Result<Self> {
        let names = patterns.iter().map(|g| format!("g6:{g}")).collect();
        Self::build(patterns, names, false)
    }

    pub fn with_names(patterns: Vec<Graph>, names: Vec<String>) -> Result<Self> {
        Self::build(patterns, names, false)
    }

    /// Like [`GraphVector::new`] but admits isolated vertices (padded patterns).
    pub fn allowing_isolated(patterns: Vec<Graph>) -> Result<Self> {
        let names = patterns.iter().map(|g| format!("g6:{g}")).collect();
        Self::build(patterns, names, true)
    }

    fn build(patterns: Vec<Graph>, names: Vec<String>, allow_isolated: bool) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::invalid("pattern vector must be nonempty"));
        }
        if names.len() != patterns.len() {
            return Err(Error::invalid("one name per pattern required"));
        }
        for (g, name) in patterns.iter().zip(&names) {
            if g.edge_count() == 0 {
                return Err(Error::invalid(format!("pattern {name} has no edges")));
            }
            if !allow_isolated && g.has_isolated_vertex() {
                return Err(Error::invalid(format!("pattern {name} has an isolated vertex")));
            }
        }
        for j in 0..patterns.len() {
            for i in 0..j {
                if isomorphic(&patterns[i], &patterns[j]) {
                    return Err(Error::invalid(format!(
                        "patterns {} and {} are isomorphic",
                        names[i], names[j]
                    )));
                }
            }
        }
        let edge_counts = patterns.iter().map(Graph::edge_count).collect();
        Ok(GraphVector {
            patterns,
            names,
            edge_counts,
        })
    }

    pub fn parse(spec: &str) -> Result<Self> {
        let parsed = parse_patterns(spec)?;
        let (names, patterns) = parsed.into_iter().unzip();
        Self::with_names(patterns, names)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[Graph] {
        &self.patterns
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edge_counts(&self) -> &[usize] {
        &self.edge_counts
    }

    pub fn max_order(&self) -> usize {
        self.patterns.iter().map(Graph::order).max().unwrap_or(0)
    }

    pub fn label(&self) -> String {
        self.names.join(",")
    }

    /// Pad every pattern with isolated vertices up to the common order `n`.
    pub fn padded_to(&self, n: usize) -> Result<Self> {
        if n < self.max_order() {
            return Err(Error::invalid(format!(
                "cannot pad patterns of order {} down to {n}",
                self.max_order()
            )));
        }
        let patterns = self
            .patterns
            .iter()
            .map(|g| g.with_isolated(n - g.order()))
            .collect::<Result<Vec<_>>>()?;
        let names = self
            .names
            .iter()
            .zip(&self.patterns)
            .map(|(name, g)| {
                if g.order() == n {
                    name.clone()
                } else {
                    format!("{name}+{}", n - g.order())
                }
            })
            .collect();
        Self::build(patterns, names, true)
    }

    /// Pairs `(i, j)` where pattern `i` is a subgraph of pattern `j`.
    pub fn subgraph_relations(&self) -> Vec<(usize, usize)> {
        let d = self.len();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                if i != j && is_subgraph(&self.patterns[i], &self.patterns[j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

impl Serialize for GraphVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for GraphVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GraphVector::parse(&s).map_err(serde::de::Error::custom)
    }
}

fn isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order() && a.edge_count() == b.edge_count() && is_subgraph(a, b)
}

/// Parse one shorthand pattern.
pub fn parse_pattern(s: &str) -> Result<Graph> {
    let list = parse_patterns(s)?;
    match list.as_slice() {
        [(_, g)] => Ok(*g),
        _ => Err(Error::parse(0, "expected exactly one pattern")),
    }
}

/// Parse a comma separated list of shorthand patterns into `(name, graph)` pairs.
pub fn parse_patterns(s: &str) -> Result<Vec<(String, Graph)>> {
    let mut p = Cursor { src: s, pos: 0 };
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        let start = p.pos;
        let g = p.pattern()?;
        out.push((s[start..p.pos].trim().to_string(), g));
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b',') => {
                p.pos += 1;
            }
            Some(c) => {
                return Err(Error::parse(
                    p.pos,
                    format!("unexpected character {:?}", c as char),
                ))
            }
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<u8> {
        self.src.as_bytes().get(self.pos + off).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a vertex count"));
        }
        let digits = &self.src[start..self.pos];
        if digits.len() > 3 {
            return Err(Error::parse(start, "vertex count too large"));
        }
        Ok(digits.parse().expect("at most three digits"))
    }

    fn pattern(&mut self) -> Result<Graph> {
        let start = self.pos;
        let at = |r: Result<Graph>| r.map_err(|e| relocate(e, start));
        match self.peek() {
            Some(b'g') if self.src[self.pos..].starts_with("g6:") => {
                self.pos += 3;
                let begin = self.pos;
                while matches!(self.peek(), Some(63..=126)) {
                    self.pos += 1;
                }
                graph6::decode(&self.src[begin..self.pos]).map_err(|e| relocate(e, begin))
            }
            Some(b'K') => {
                self.pos += 1;
                let a = self.number()?;
                if self.peek() == Some(b',') && matches!(self.peek_at(1), Some(b'0'..=b'9')) {
                    self.pos += 1;
                    let b = self.number()?;
                    return at(Graph::complete_bipartite(a, b));
                }
                if self.peek() == Some(b'-') {
                    if self.peek_at(1) == Some(b'e') {
                        self.pos += 2;
                        return at(Graph::complete_minus_edge(a));
                    }
                    return Err(Error::parse(self.pos + 1, "expected 'e' after '-'"));
                }
                at(Graph::complete(a))
            }
            Some(b'C') => {
                self.pos += 1;
                let n = self.number()?;
                at(Graph::cycle(n))
            }
            Some(b'P') => {
                self.pos += 1;
                let n = self.number()?;
                at(Graph::path(n))
            }
            Some(c) => Err(Error::parse(
                start,
                format!("unknown pattern prefix {:?}", c as char),
            )),
            None => Err(Error::parse(start, "expected a pattern")),
        }
    }
}

fn relocate(e: Error, pos: usize) -> Error {
    match e {
        Error::Parse { pos: p, msg } => Error::Parse { pos: pos + p, msg },
        Error::Capacity { what, limit, got } => Error::Parse {
            pos,
            msg: format!("{what} exceeds supported limit {limit} (got {got})"),
        },
        Error::InvalidInput(msg) => Error::Parse { pos, msg },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_running_example() {
        let fs = GraphVector::parse("K3,C4,K4-e").unwrap();
        assert_eq!(fs.edge_counts(), &[3, 4, 5]);
        assert_eq!(fs.names(), &["K3", "C4", "K4-e"]);
        assert_eq!(fs.max_order(), 4);
    }

    #[test]
    fn bipartite_inside_list() {
        let list = parse_patterns("K2,3, P3,K3").unwrap();
        assert_eq!(list.len(), 3);
        assert_eq!(list[0].1.edge_count(), 6);
        assert_eq!(list[1].1.edge_count(), 2);
        assert_eq!(parse_pattern("g6:C~").unwrap(), Graph::complete(4).unwrap());
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(matches!(parse_patterns("K3,X4"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_patterns("K3,"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_patterns("C2"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_patterns("K11"), Err(Error::Parse { .. })));
        assert!(matches!(parse_patterns("K4-x"), Err(Error::Parse { pos: 3, .. })));
        assert!(parse_patterns("K99999").is_err());
        assert!(parse_patterns("").is_err());
    }

    #[test]
    fn vector_validation() {
        assert!(GraphVector::parse("K3,C3").is_err()); // isomorphic
        assert!(GraphVector::parse("K1").is_err()); // no edges
        let padded = Graph::complete(2).unwrap().with_isolated(1).unwrap();
        assert!(GraphVector::new(vec![padded]).is_err());
        assert!(GraphVector::allowing_isolated(vec![padded]).is_ok());
    }

    #[test]
    fn padding_and_relations() {
        let fs = GraphVector::parse("K2,K3").unwrap();
        let padded = fs.padded_to(3).unwrap();
        assert_eq!(padded.patterns()[0].order(), 3);
        assert_eq!(padded.names()[0], "K2+1");
        assert!(fs.padded_to(2).is_err());
        let run = GraphVector::parse("K3,C4,K4-e").unwrap();
        assert_eq!(run.subgraph_relations(), vec![(0, 2), (1, 2)]);
    }
}
