//! Brute-force referee: bounded move-space search, invariant fuzzing and
//! chain standardization.

mod digest;
mod invariants;
mod search;
mod standardize;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Weight, WeightedGraph};
use crate::moves::{Move, Sign};
use crate::segment::segments;

pub use digest::{structural_key, StructuralKey};
pub use invariants::{check_invariants, check_invariants_with, InvariantReport, Property, Violation};
pub use search::{explore, oracle_equivalent, Exploration, Separation, Verdict};
pub use standardize::standardize_chain;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("invalid search bounds: {0}")]
    InvalidBounds(&'static str),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("graph is not a chain")]
    NotAChain,
    #[error("no standard chain reachable within bounds ({states} states explored)")]
    Exhausted { states: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub max_vertices: usize,
    pub weight_min: Weight,
    pub weight_max: Weight,
    pub max_depth: usize,
    pub max_states: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_vertices: 12, weight_min: -8, weight_max: 8, max_depth: 12, max_states: 2_000_000 }
    }
}

impl SearchBounds {
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.max_vertices == 0 {
            return Err(OracleError::InvalidBounds("max_vertices must be positive"));
        }
        if self.weight_min > self.weight_max {
            return Err(OracleError::InvalidBounds("empty weight range"));
        }
        if self.max_states == 0 {
            return Err(OracleError::InvalidBounds("max_states must be positive"));
        }
        Ok(())
    }

    pub fn admits(&self, g: &WeightedGraph) -> bool {
        g.len() <= self.max_vertices && g.vertices().all(|(_, w)| (self.weight_min..=self.weight_max).contains(&w))
    }
}

/// Which moves a search may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveSet {
    /// Inner and outer elementary moves and segment reversions; the vertex
    /// set is fixed.
    Rigid,
    /// Blowups, blowdowns, elementary moves and segment reversions.
    Full,
}

/// Every move of `set` applicable to `g`, with its result, inside `b`.
pub(crate) fn successors(g: &WeightedGraph, set: MoveSet, b: &SearchBounds) -> Vec<(Move, WeightedGraph)> {
    let mut out = Vec::new();
    let mut try_move = |m: Move| {
        if let Ok(h) = m.apply(g) {
            if b.admits(&h) && h != *g {
                out.push((m, h));
            }
        }
    };
    for (v, w) in g.vertices() {
        if w != 0 {
            continue;
        }
        match g.degree(v) {
            Some(2) => {
                for t in g.neighbors(v) {
                    try_move(Move::InnerElementary { v, toward: t });
                }
            }
            Some(1) => {
                try_move(Move::OuterElementary { v, sign: Sign::Plus });
                try_move(Move::OuterElementary { v, sign: Sign::Minus });
            }
            _ => {}
        }
    }
    if !g.is_circular() {
        for s in segments(g).into_iter().filter(|s| s.is_standard()) {
            try_move(Move::ReverseSegment { vertices: s.vertices });
        }
    }
    if set == MoveSet::Rigid {
        return out;
    }
    for (v, w) in g.vertices() {
        if w == -1 && g.degree(v).unwrap() <= 2 && g.len() > 1 {
            try_move(Move::BlowDown { x: v });
        }
    }
    if g.len() < b.max_vertices {
        for (u, v) in g.edges() {
            try_move(Move::BlowUpEdge { u, v, fresh: None });
        }
        if !g.is_circular() {
            for v in g.vertex_ids() {
                try_move(Move::BlowUpAtVertex { v, fresh: None });
            }
        }
    }
    out
}
