//! Line-oriented `.wg` text format.
//!
//! ```text
//! # comment
//! v 1 0
//! v 2 -2
//! e 1 2
//! ```
//!
//! The shorthands `chain w1 … wn` and `cycle w1 … wn` number vertices `1..=n`
//! and must be the only statement in the input.

use std::collections::BTreeMap;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{GraphError, VertexId, Weight, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown statement `{0}`")]
    UnknownStatement(String),
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("invalid integer `{0}`")]
    InvalidInteger(String),
    #[error("unexpected trailing token `{0}`")]
    Trailing(String),
    #[error("`{0}` shorthand cannot be combined with other statements")]
    MixedShorthand(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Whitespace-separated tokens of one line, with 1-based columns.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &body[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &body[s..]));
    }
    out
}

pub(crate) fn int_token<T: FromStr>(
    line: usize,
    tok: Option<&(usize, &str)>,
    what: &'static str,
    eol: usize,
) -> Result<T, ParseError> {
    match tok {
        None => Err(ParseError { line, column: eol, kind: ParseErrorKind::Expected(what) }),
        Some(&(column, s)) => {
            s.parse().map_err(|_| ParseError { line, column, kind: ParseErrorKind::InvalidInteger(s.to_string()) })
        }
    }
}

enum Shorthand {
    Chain,
    Cycle,
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, ParseError> {
    let mut vertices: Vec<(VertexId, Weight)> = Vec::new();
    let mut declared: BTreeMap<VertexId, ()> = BTreeMap::new();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut shorthand: Option<(usize, Shorthand, Vec<Weight>)> = None;
    let mut statements = 0usize;
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = tokens(raw);
        let Some(&(col, head)) = toks.first() else { continue };
        let eol = raw.len() + 1;
        statements += 1;
        if shorthand.is_some() {
            return Err(ParseError { line, column: col, kind: ParseErrorKind::MixedShorthand("chain/cycle") });
        }
        match head {
            "v" => {
                let id: u32 = int_token(line, toks.get(1), "vertex id", eol)?;
                let w: Weight = int_token(line, toks.get(2), "weight", eol)?;
                if let Some(&(c, t)) = toks.get(3) {
                    return Err(ParseError { line, column: c, kind: ParseErrorKind::Trailing(t.into()) });
                }
                if declared.insert(VertexId(id), ()).is_some() {
                    return Err(ParseError {
                        line,
                        column: toks[1].0,
                        kind: GraphError::DuplicateVertex(VertexId(id)).into(),
                    });
                }
                vertices.push((VertexId(id), w));
            }
            "e" => {
                let u: u32 = int_token(line, toks.get(1), "vertex id", eol)?;
                let v: u32 = int_token(line, toks.get(2), "vertex id", eol)?;
                if let Some(&(c, t)) = toks.get(3) {
                    return Err(ParseError { line, column: c, kind: ParseErrorKind::Trailing(t.into()) });
                }
                // Undeclared ids are checked once every vertex line has been seen.
                edges.push((VertexId(u), VertexId(v)));
            }
            "chain" | "cycle" => {
                if statements > 1 {
                    return Err(ParseError {
                        line,
                        column: col,
                        kind: ParseErrorKind::MixedShorthand(if head == "chain" { "chain" } else { "cycle" }),
                    });
                }
                let ws = toks[1..]
                    .iter()
                    .map(|t| int_token(line, Some(t), "weight", eol))
                    .collect::<Result<Vec<Weight>, _>>()?;
                if ws.is_empty() {
                    return Err(ParseError {
                        line,
                        column: eol,
                        kind: ParseErrorKind::Expected("at least one weight"),
                    });
                }
                let kind = if head == "chain" { Shorthand::Chain } else { Shorthand::Cycle };
                shorthand = Some((line, kind, ws));
            }
            other => {
                return Err(ParseError { line, column: col, kind: ParseErrorKind::UnknownStatement(other.into()) });
            }
        }
    }

    if let Some((line, kind, ws)) = shorthand {
        let built = match kind {
            Shorthand::Chain => WeightedGraph::chain(&ws),
            Shorthand::Cycle => WeightedGraph::cycle(&ws),
        };
        return built.map_err(|e| ParseError { line, column: 1, kind: e.into() });
    }

    // Locate the first edge naming an undeclared vertex for a precise position.
    for (idx, raw) in text.lines().enumerate() {
        let toks = tokens(raw);
        if toks.first().map(|t| t.1) != Some("e") {
            continue;
        }
        for t in &toks[1..3] {
            let id = VertexId(t.1.parse().unwrap());
            if !declared.contains_key(&id) {
                return Err(ParseError { line: idx + 1, column: t.0, kind: GraphError::UndeclaredVertex(id).into() });
            }
        }
    }

    WeightedGraph::new(vertices, edges).map_err(|e| {
        let line = edge_line(text, &e).unwrap_or(last_line);
        ParseError { line, column: 1, kind: e.into() }
    })
}

/// Line of the edge statement responsible for a self-loop or duplicate edge.
fn edge_line(text: &str, err: &GraphError) -> Option<usize> {
    let target = match *err {
        GraphError::SelfLoop(v) => (v, v),
        GraphError::DuplicateEdge(u, v) => (u, v),
        _ => return None,
    };
    let mut seen = 0;
    for (idx, raw) in text.lines().enumerate() {
        let toks = tokens(raw);
        if toks.first().map(|t| t.1) != Some("e") {
            continue;
        }
        let a = VertexId(toks[1].1.parse().ok()?);
        let b = VertexId(toks[2].1.parse().ok()?);
        if (a.min(b), a.max(b)) == target {
            seen += 1;
            if target.0 == target.1 || seen == 2 {
                return Some(idx + 1);
            }
        }
    }
    None
}

impl FromStr for WeightedGraph {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s)
    }
}

impl WeightedGraph {
    /// Vertices in ascending id order, then edges lexicographically.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, w) in self.vertices() {
            out.push_str(&format!("v {v} {w}\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }

    /// Graphviz rendering with `id:weight` labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for (v, w) in self.vertices() {
            out.push_str(&format!("  {v} [label=\"{v}:{w}\"];\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}
