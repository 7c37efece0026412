//! Blowups, blowdowns, elementary transformations, segment reversion and
//! replayable move traces.
//!
//! Every move is a pure function from a graph to a new graph. Elementary
//! transformations are computed by composing a blowup with a blowdown and
//! renaming the fresh vertex back to the one the move was applied at, so a
//! trace that uses them keeps vertex ids stable.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::format::{int_token, tokens, ParseError, ParseErrorKind};
use crate::graph::{GraphError, VertexId, Weight, WeightedGraph};
use crate::segment::find_segment;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("vertex {0} is not in the graph")]
    MissingVertex(VertexId),
    #[error("edge {0} {1} is not in the graph")]
    MissingEdge(VertexId, VertexId),
    #[error("fresh vertex id {0} is already in use")]
    FreshIdInUse(VertexId),
    #[error("vertex {vertex} has weight {weight}, expected {expected}")]
    WrongWeight { vertex: VertexId, weight: Weight, expected: Weight },
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    WrongDegree { vertex: VertexId, degree: usize, expected: &'static str },
    #[error("blowing down {0} would join two adjacent vertices")]
    WouldCreateMultiEdge(VertexId),
    #[error("cannot blow down the last vertex")]
    WouldEmptyGraph,
    #[error("{toward} is not a neighbor of {vertex}")]
    NotANeighbor { vertex: VertexId, toward: VertexId },
    #[error("vertices do not form a segment of the graph")]
    NotASegment,
    #[error("segment is not standard")]
    SegmentNotStandard,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> Weight {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Granularity {
    Primitive,
    Elementary,
    Macro,
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Primitive => "primitive",
            Granularity::Elementary => "elementary",
            Granularity::Macro => "macro",
        })
    }
}

/// One rewrite step.
///
/// Blowups may pin the id of the vertex they create; otherwise the next free
/// id ([`WeightedGraph::next_vertex_id`]) is used.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Move {
    BlowUpEdge { u: VertexId, v: VertexId, fresh: Option<VertexId> },
    BlowUpAtVertex { v: VertexId, fresh: Option<VertexId> },
    BlowDown { x: VertexId },
    InnerElementary { v: VertexId, toward: VertexId },
    OuterElementary { v: VertexId, sign: Sign },
    ReverseSegment { vertices: Vec<VertexId> },
}

fn fresh_id(g: &WeightedGraph, fresh: Option<VertexId>) -> Result<VertexId, MoveError> {
    match fresh {
        Some(x) if g.contains(x) => Err(MoveError::FreshIdInUse(x)),
        Some(x) => Ok(x),
        None => Ok(g.next_vertex_id()),
    }
}

fn require_vertex(g: &WeightedGraph, v: VertexId) -> Result<(Weight, usize), MoveError> {
    match (g.weight(v), g.degree(v)) {
        (Some(w), Some(d)) => Ok((w, d)),
        _ => Err(MoveError::MissingVertex(v)),
    }
}

pub fn blow_up_edge(g: &WeightedGraph, u: VertexId, v: VertexId) -> Result<WeightedGraph, MoveError> {
    blow_up_edge_as(g, u, v, None)
}

/// Inserts a `-1` vertex on the edge `{u, v}` and decrements both endpoints.
pub fn blow_up_edge_as(
    g: &WeightedGraph,
    u: VertexId,
    v: VertexId,
    fresh: Option<VertexId>,
) -> Result<WeightedGraph, MoveError> {
    require_vertex(g, u)?;
    require_vertex(g, v)?;
    if !g.has_edge(u, v) {
        return Err(MoveError::MissingEdge(u, v));
    }
    let x = fresh_id(g, fresh)?;
    let (mut weights, mut adj) = g.clone().into_maps();
    *weights.get_mut(&u).unwrap() -= 1;
    *weights.get_mut(&v).unwrap() -= 1;
    weights.insert(x, -1);
    adj.get_mut(&u).unwrap().remove(&v);
    adj.get_mut(&v).unwrap().remove(&u);
    adj.get_mut(&u).unwrap().insert(x);
    adj.get_mut(&v).unwrap().insert(x);
    adj.insert(x, [u, v].into_iter().collect());
    Ok(WeightedGraph::from_maps(weights, adj)?)
}

pub fn blow_up_at_vertex(g: &WeightedGraph, v: VertexId) -> Result<WeightedGraph, MoveError> {
    blow_up_at_vertex_as(g, v, None)
}

/// Attaches a pendant `-1` vertex to `v` and decrements `v`.
///
/// Fails on circular graphs, where the result would be a cycle with a tail.
pub fn blow_up_at_vertex_as(
    g: &WeightedGraph,
    v: VertexId,
    fresh: Option<VertexId>,
) -> Result<WeightedGraph, MoveError> {
    require_vertex(g, v)?;
    let x = fresh_id(g, fresh)?;
    let (mut weights, mut adj) = g.clone().into_maps();
    *weights.get_mut(&v).unwrap() -= 1;
    weights.insert(x, -1);
    adj.get_mut(&v).unwrap().insert(x);
    adj.insert(x, [v].into_iter().collect());
    Ok(WeightedGraph::from_maps(weights, adj)?)
}

/// Removes a `-1` vertex of degree at most 2, incrementing its neighbors and
/// joining them when there are two.
pub fn blow_down(g: &WeightedGraph, x: VertexId) -> Result<WeightedGraph, MoveError> {
    let (w, d) = require_vertex(g, x)?;
    if w != -1 {
        return Err(MoveError::WrongWeight { vertex: x, weight: w, expected: -1 });
    }
    if d > 2 {
        return Err(MoveError::WrongDegree { vertex: x, degree: d, expected: "at most 2" });
    }
    if g.len() == 1 {
        return Err(MoveError::WouldEmptyGraph);
    }
    let nb: Vec<VertexId> = g.neighbors(x).collect();
    if nb.len() == 2 && g.has_edge(nb[0], nb[1]) {
        return Err(MoveError::WouldCreateMultiEdge(x));
    }
    let (mut weights, mut adj) = g.clone().into_maps();
    weights.remove(&x);
    adj.remove(&x);
    for &n in &nb {
        *weights.get_mut(&n).unwrap() += 1;
        adj.get_mut(&n).unwrap().remove(&x);
    }
    if let [a, b] = nb[..] {
        adj.get_mut(&a).unwrap().insert(b);
        adj.get_mut(&b).unwrap().insert(a);
    }
    Ok(WeightedGraph::from_maps(weights, adj)?)
}

fn rename(g: &WeightedGraph, from: VertexId, to: VertexId) -> Result<WeightedGraph, MoveError> {
    Ok(g.relabel(&BTreeMap::from([(from, to)]))?)
}

/// At a weight-0 vertex of degree 2: `toward` gains 1, the other neighbor
/// loses 1.
pub fn inner_elementary(g: &WeightedGraph, v: VertexId, toward: VertexId) -> Result<WeightedGraph, MoveError> {
    let (w, d) = require_vertex(g, v)?;
    if w != 0 {
        return Err(MoveError::WrongWeight { vertex: v, weight: w, expected: 0 });
    }
    if d != 2 {
        return Err(MoveError::WrongDegree { vertex: v, degree: d, expected: "2" });
    }
    if !g.has_edge(v, toward) {
        return Err(MoveError::NotANeighbor { vertex: v, toward });
    }
    let other = g.neighbors(v).find(|&u| u != toward).unwrap();
    let fresh = g.next_vertex_id();
    let h = blow_up_edge_as(g, v, other, Some(fresh))?;
    let h = blow_down(&h, v)?;
    rename(&h, fresh, v)
}

/// At a weight-0 end vertex: its neighbor's weight changes by `sign`.
pub fn outer_elementary(g: &WeightedGraph, v: VertexId, sign: Sign) -> Result<WeightedGraph, MoveError> {
    let (w, d) = require_vertex(g, v)?;
    if w != 0 {
        return Err(MoveError::WrongWeight { vertex: v, weight: w, expected: 0 });
    }
    if d != 1 {
        return Err(MoveError::WrongDegree { vertex: v, degree: d, expected: "1" });
    }
    let fresh = g.next_vertex_id();
    let h = match sign {
        Sign::Plus => blow_up_at_vertex_as(g, v, Some(fresh))?,
        Sign::Minus => {
            let u = g.neighbors(v).next().unwrap();
            blow_up_edge_as(g, u, v, Some(fresh))?
        }
    };
    let h = blow_down(&h, v)?;
    rename(&h, fresh, v)
}

/// Reversion of a standard segment.
///
/// A segment read as `[[0_{2k}, w_1..w_n]]` keeps `w_1..w_n` on the same
/// vertices in the same order and moves the zero block to the opposite end,
/// so read from that end it is `[[0_{2k}, w_n..w_1]]`. Everything outside the
/// segment, attachments included, is untouched.
pub fn reverse_segment(g: &WeightedGraph, vertices: &[VertexId]) -> Result<WeightedGraph, MoveError> {
    let seg = find_segment(g, vertices).ok_or(MoveError::NotASegment)?;
    if !seg.is_standard() {
        return Err(MoveError::SegmentNotStandard);
    }
    let new_weights = seg.tail.iter().copied().chain(std::iter::repeat_n(0, seg.zero_block));
    Ok(g.with_weights(seg.vertices.iter().copied().zip(new_weights))?)
}

impl Move {
    pub fn granularity(&self) -> Granularity {
        match self {
            Move::BlowUpEdge { .. } | Move::BlowUpAtVertex { .. } | Move::BlowDown { .. } => Granularity::Primitive,
            Move::InnerElementary { .. } | Move::OuterElementary { .. } => Granularity::Elementary,
            Move::ReverseSegment { .. } => Granularity::Macro,
        }
    }

    pub fn apply(&self, g: &WeightedGraph) -> Result<WeightedGraph, MoveError> {
        match self {
            Move::BlowUpEdge { u, v, fresh } => blow_up_edge_as(g, *u, *v, *fresh),
            Move::BlowUpAtVertex { v, fresh } => blow_up_at_vertex_as(g, *v, *fresh),
            Move::BlowDown { x } => blow_down(g, *x),
            Move::InnerElementary { v, toward } => inner_elementary(g, *v, *toward),
            Move::OuterElementary { v, sign } => outer_elementary(g, *v, *sign),
            Move::ReverseSegment { vertices } => reverse_segment(g, vertices),
        }
    }

    /// The move undoing `self` when `self` is applied to `before`.
    pub fn inverse(&self, before: &WeightedGraph) -> Result<Move, MoveError> {
        Ok(match self {
            Move::BlowUpEdge { fresh, .. } | Move::BlowUpAtVertex { fresh, .. } => {
                Move::BlowDown { x: fresh_id(before, *fresh)? }
            }
            Move::BlowDown { x } => {
                require_vertex(before, *x)?;
                let nb: Vec<VertexId> = before.neighbors(*x).collect();
                match nb[..] {
                    [a] => Move::BlowUpAtVertex { v: a, fresh: Some(*x) },
                    [a, b] => Move::BlowUpEdge { u: a, v: b, fresh: Some(*x) },
                    _ => {
                        return Err(MoveError::WrongDegree { vertex: *x, degree: nb.len(), expected: "1 or 2" });
                    }
                }
            }
            Move::InnerElementary { v, toward } => {
                require_vertex(before, *v)?;
                let other = before
                    .neighbors(*v)
                    .find(|u| u != toward)
                    .ok_or(MoveError::NotANeighbor { vertex: *v, toward: *toward })?;
                Move::InnerElementary { v: *v, toward: other }
            }
            Move::OuterElementary { v, sign } => Move::OuterElementary { v: *v, sign: sign.flip() },
            Move::ReverseSegment { vertices } => Move::ReverseSegment { vertices: vertices.clone() },
        })
    }
}

fn join_ids(ids: &[VertexId]) -> String {
    ids.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::BlowUpEdge { u, v, fresh: None } => write!(f, "blowup-edge {u} {v}"),
            Move::BlowUpEdge { u, v, fresh: Some(x) } => write!(f, "blowup-edge {u} {v} as {x}"),
            Move::BlowUpAtVertex { v, fresh: None } => write!(f, "blowup-vertex {v}"),
            Move::BlowUpAtVertex { v, fresh: Some(x) } => write!(f, "blowup-vertex {v} as {x}"),
            Move::BlowDown { x } => write!(f, "blowdown {x}"),
            Move::InnerElementary { v, toward } => write!(f, "inner {v} -> {toward}"),
            Move::OuterElementary { v, sign: Sign::Plus } => write!(f, "outer {v} +1"),
            Move::OuterElementary { v, sign: Sign::Minus } => write!(f, "outer {v} -1"),
            Move::ReverseSegment { vertices } => write!(f, "reverse {}", join_ids(vertices)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub mv: Move,
    /// [`WeightedGraph::labeled_digest`] of the graph after this step.
    pub digest: Option<String>,
}

/// An ordered sequence of moves, optionally with per-step digests.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("step {step} ({mv}): {source}")]
    Step { step: usize, mv: Move, source: MoveError },
    #[error("step {step}: digest mismatch (recorded {recorded}, replayed {replayed})")]
    DigestMismatch { step: usize, recorded: String, replayed: String },
}

impl TraceError {
    /// 1-based index of the failing step.
    pub fn step(&self) -> usize {
        match self {
            TraceError::Step { step, .. } | TraceError::DigestMismatch { step, .. } => *step,
        }
    }
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_moves<I: IntoIterator<Item = Move>>(moves: I) -> Self {
        Trace { steps: moves.into_iter().map(|mv| TraceStep { mv, digest: None }).collect() }
    }

    pub fn push(&mut self, mv: Move) {
        self.steps.push(TraceStep { mv, digest: None });
    }

    pub fn extend(&mut self, other: Trace) {
        self.steps.extend(other.steps);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn moves(&self) -> impl Iterator<Item = &Move> {
        self.steps.iter().map(|s| &s.mv)
    }

    /// Coarsest granularity among the steps; an empty trace is primitive.
    pub fn granularity(&self) -> Granularity {
        self.moves().map(Move::granularity).max().unwrap_or(Granularity::Primitive)
    }

    /// Replays from `source`, recording the digest of every intermediate graph.
    pub fn with_digests(&self, source: &WeightedGraph) -> Result<Trace, TraceError> {
        let mut g = source.clone();
        let mut out = Trace::new();
        for (i, step) in self.steps.iter().enumerate() {
            g = step.mv.apply(&g).map_err(|e| TraceError::Step { step: i + 1, mv: step.mv.clone(), source: e })?;
            out.steps.push(TraceStep { mv: step.mv.clone(), digest: Some(g.labeled_digest()) });
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            match &s.digest {
                Some(d) => out.push_str(&format!("{} @ {d}\n", s.mv)),
                None => out.push_str(&format!("{}\n", s.mv)),
            }
        }
        out
    }
}

/// Left-to-right replay; recorded digests are verified.
pub fn apply_trace(g: &WeightedGraph, t: &Trace) -> Result<WeightedGraph, TraceError> {
    let mut cur = g.clone();
    for (i, step) in t.steps.iter().enumerate() {
        cur = step.mv.apply(&cur).map_err(|e| TraceError::Step { step: i + 1, mv: step.mv.clone(), source: e })?;
        if let Some(recorded) = &step.digest {
            let replayed = cur.labeled_digest();
            if &replayed != recorded {
                return Err(TraceError::DigestMismatch { step: i + 1, recorded: recorded.clone(), replayed });
            }
        }
    }
    Ok(cur)
}

/// The trace undoing `t`, which must apply to `source`.
///
/// Inverting a blowdown needs the neighbors of the removed vertex, so the
/// inverse is computed by replaying `t`.
pub fn invert_trace(source: &WeightedGraph, t: &Trace) -> Result<Trace, TraceError> {
    let mut cur = source.clone();
    let mut inverses = Vec::with_capacity(t.len());
    for (i, step) in t.steps.iter().enumerate() {
        let err = |e| TraceError::Step { step: i + 1, mv: step.mv.clone(), source: e };
        let inv = step.mv.inverse(&cur).map_err(err)?;
        let before = cur.labeled_digest();
        cur = step.mv.apply(&cur).map_err(err)?;
        inverses.push(TraceStep { mv: inv, digest: step.digest.as_ref().map(|_| before) });
    }
    inverses.reverse();
    Ok(Trace { steps: inverses })
}

fn parse_move(line: usize, toks: &[(usize, &str)], eol: usize) -> Result<Move, ParseError> {
    let err = |column, kind| ParseError { line, column, kind };
    let id =
        |i: usize| -> Result<VertexId, ParseError> { int_token(line, toks.get(i), "vertex id", eol).map(VertexId) };
    let fresh = |i: usize| -> Result<Option<VertexId>, ParseError> {
        match toks.get(i) {
            None => Ok(None),
            Some(&(_, "as")) => Ok(Some(id(i + 1)?)),
            Some(&(c, t)) => Err(err(c, ParseErrorKind::Trailing(t.into()))),
        }
    };
    let (head_col, head) = toks[0];
    let (mv, used) = match head {
        "blowup-edge" => {
            let f = fresh(3)?;
            (Move::BlowUpEdge { u: id(1)?, v: id(2)?, fresh: f }, if f.is_some() { 5 } else { 3 })
        }
        "blowup-vertex" => {
            let f = fresh(2)?;
            (Move::BlowUpAtVertex { v: id(1)?, fresh: f }, if f.is_some() { 4 } else { 2 })
        }
        "blowdown" => (Move::BlowDown { x: id(1)? }, 2),
        "inner" => {
            match toks.get(2) {
                Some(&(_, "->")) => {}
                Some(&(c, _)) => return Err(err(c, ParseErrorKind::Expected("`->`"))),
                None => return Err(err(eol, ParseErrorKind::Expected("`->`"))),
            }
            (Move::InnerElementary { v: id(1)?, toward: id(3)? }, 4)
        }
        "outer" => {
            let sign = match toks.get(2) {
                Some(&(_, "+1")) => Sign::Plus,
                Some(&(_, "-1")) => Sign::Minus,
                Some(&(c, _)) => return Err(err(c, ParseErrorKind::Expected("`+1` or `-1`"))),
                None => return Err(err(eol, ParseErrorKind::Expected("`+1` or `-1`"))),
            };
            (Move::OuterElementary { v: id(1)?, sign }, 3)
        }
        "reverse" => {
            let Some(&(c, list)) = toks.get(1) else {
                return Err(err(eol, ParseErrorKind::Expected("comma-separated vertex ids")));
            };
            let vertices = list
                .split(',')
                .map(|s| s.parse::<u32>().map(VertexId).map_err(|_| err(c, ParseErrorKind::InvalidInteger(s.into()))))
                .collect::<Result<Vec<_>, _>>()?;
            (Move::ReverseSegment { vertices }, 2)
        }
        other => return Err(err(head_col, ParseErrorKind::UnknownStatement(other.into()))),
    };
    if let Some(&(c, t)) = toks.get(used) {
        return Err(err(c, ParseErrorKind::Trailing(t.into())));
    }
    Ok(mv)
}

impl FromStr for Trace {
    type Err = ParseError;

    /// One move per line, optionally followed by `@ <digest>`; `#` starts a comment.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut trace = Trace::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let toks = tokens(raw);
            if toks.is_empty() {
                continue;
            }
            let eol = raw.len() + 1;
            let at = toks.iter().position(|t| t.1 == "@");
            let (move_toks, digest) = match at {
                None => (&toks[..], None),
                Some(p) => {
                    let d = toks.get(p + 1).ok_or(ParseError {
                        line,
                        column: eol,
                        kind: ParseErrorKind::Expected("digest"),
                    })?;
                    if let Some(&(c, t)) = toks.get(p + 2) {
                        return Err(ParseError { line, column: c, kind: ParseErrorKind::Trailing(t.into()) });
                    }
                    (&toks[..p], Some(d.1.to_string()))
                }
            };
            if move_toks.is_empty() {
                return Err(ParseError { line, column: toks[0].0, kind: ParseErrorKind::Expected("move") });
            }
            trace.steps.push(TraceStep { mv: parse_move(line, move_toks, eol)?, digest });
        }
        Ok(trace)
    }
}
