//! Randomized checks of the move calculus.
//!
//! Each trial draws a random standard graph and a random trace. Every step
//! is checked for `|det|` invariance and for an exact round trip through its
//! inverse. Half of the trials use only elementary moves, unit weight shifts
//! and reversions; whenever such a trace passes through a standard graph, its
//! canonical encoding and the branching-weight sums of its `Γ₀` components
//! must match those of the starting graph.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{OracleError, SearchBounds};
use crate::canon::{canonical_form, gamma0, shift_across_segment, CaseTag};
use crate::det::intersection_determinant;
use crate::fixtures::random_standard_graph;
use crate::graph::{VertexId, Weight, WeightedGraph};
use crate::moves::{Move, MoveError, Sign, Trace};
use crate::segment::{is_standard, segments, SegmentKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    DeterminantInvariance,
    InverseRoundTrip,
    SumConservation,
    CanonicalStability,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::DeterminantInvariance => "determinant_invariance",
            Property::InverseRoundTrip => "inverse_round_trip",
            Property::SumConservation => "sum_conservation",
            Property::CanonicalStability => "canonical_stability",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub trial: usize,
    pub property: Property,
    /// Starting graph in text format.
    pub graph: String,
    /// Moves up to and including the offending one.
    pub trace: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub seed: u64,
    pub trials: usize,
    pub moves_checked: usize,
    pub standard_comparisons: usize,
    pub violations: Vec<Violation>,
}

impl InvariantReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "seed {}\ntrials {}\nmoves checked {}\nstandard comparisons {}\nviolations {}\n",
            self.seed,
            self.trials,
            self.moves_checked,
            self.standard_comparisons,
            self.violations.len()
        );
        for v in &self.violations {
            out.push_str(&format!("trial {} {}: {}\n", v.trial, v.property.as_str(), v.detail));
            for line in v.graph.lines() {
                out.push_str(&format!("  graph  {line}\n"));
            }
            for line in v.trace.lines() {
                out.push_str(&format!("  trace  {line}\n"));
            }
        }
        out
    }
}

type ApplyFn<'a> = &'a dyn Fn(&Move, &WeightedGraph) -> Result<WeightedGraph, MoveError>;

/// Runs `trials` random traces of at most `b.max_depth` moves over graphs
/// with at most `b.max_vertices` vertices.
pub fn check_invariants(seed: u64, trials: usize, b: &SearchBounds) -> Result<InvariantReport, OracleError> {
    check_invariants_with(seed, trials, b, &|m, g| m.apply(g))
}

/// As [`check_invariants`], with moves applied by `apply`.
pub fn check_invariants_with(
    seed: u64,
    trials: usize,
    b: &SearchBounds,
    apply: ApplyFn<'_>,
) -> Result<InvariantReport, OracleError> {
    if trials == 0 {
        return Err(OracleError::NoTrials);
    }
    b.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report =
        InvariantReport { seed, trials, moves_checked: 0, standard_comparisons: 0, violations: Vec::new() };
    for trial in 0..trials {
        let g = random_standard_graph(&mut rng, b.max_vertices.max(1));
        let len = rng.gen_range(1..=b.max_depth.max(1));
        let mut run = Run { trial, start: g.clone(), trace: Trace::new(), apply, report: &mut report };
        if trial % 2 == 0 {
            run.free_trace(&mut rng, len, b.max_vertices);
        } else {
            run.standard_trace(&mut rng, len);
        }
    }
    Ok(report)
}

struct Run<'a, 'r> {
    trial: usize,
    start: WeightedGraph,
    trace: Trace,
    apply: ApplyFn<'a>,
    report: &'r mut InvariantReport,
}

impl Run<'_, '_> {
    fn violation(&mut self, property: Property, detail: String) {
        self.report.violations.push(Violation {
            trial: self.trial,
            property,
            graph: self.start.to_text(),
            trace: self.trace.to_text(),
            detail,
        });
    }

    /// Applies `m` and checks the per-move properties: `None` if the move does
    /// not apply, `Some(Err(()))` once a violation is recorded.
    fn step(&mut self, g: &WeightedGraph, m: &Move) -> Option<Result<WeightedGraph, ()>> {
        let h = (self.apply)(m, g).ok()?;
        self.trace.push(m.clone());
        self.report.moves_checked += 1;
        let (d0, d1) = (intersection_determinant(g).abs(), intersection_determinant(&h).abs());
        if d0 != d1 {
            self.violation(Property::DeterminantInvariance, format!("`{m}` changed |det| from {d0} to {d1}"));
            return Some(Err(()));
        }
        let back = m.inverse(g).ok().and_then(|inv| (self.apply)(&inv, &h).ok().map(|k| (inv, k)));
        match back {
            Some((_, k)) if k == *g => Some(Ok(h)),
            Some((inv, _)) => {
                self.violation(Property::InverseRoundTrip, format!("`{inv}` does not undo `{m}`"));
                Some(Err(()))
            }
            None => {
                self.violation(Property::InverseRoundTrip, format!("inverse of `{m}` does not apply"));
                Some(Err(()))
            }
        }
    }

    fn free_trace(&mut self, rng: &mut ChaCha8Rng, len: usize, max_vertices: usize) {
        let mut g = self.start.clone();
        for _ in 0..len {
            let mut candidates = candidate_moves(&g, max_vertices);
            candidates.shuffle(rng);
            let mut advanced = false;
            for m in candidates {
                match self.step(&g, &m) {
                    None => continue,
                    Some(Err(())) => return,
                    Some(Ok(h)) => {
                        g = h;
                        advanced = true;
                        break;
                    }
                }
            }
            if !advanced {
                return;
            }
        }
    }

    fn standard_trace(&mut self, rng: &mut ChaCha8Rng, len: usize) {
        let Ok(reference) = canonical_form(&self.start) else { return };
        let sums = component_sums(&self.start);
        let mut g = self.start.clone();
        for _ in 0..len {
            let moves = standard_step(rng, &g);
            for m in &moves {
                match self.step(&g, m) {
                    None => break,
                    Some(Err(())) => return,
                    Some(Ok(h)) => g = h,
                }
            }
            if !is_standard(&g) {
                continue;
            }
            self.report.standard_comparisons += 1;
            match canonical_form(&g) {
                Ok(cf) if cf.encoding == reference.encoding => {}
                Ok(cf) => {
                    let detail = format!("encoding {} became {}", reference.encoding, cf.encoding);
                    self.violation(Property::CanonicalStability, detail);
                    return;
                }
                Err(e) => {
                    self.violation(Property::CanonicalStability, format!("canonical form failed: {e}"));
                    return;
                }
            }
            let now = component_sums(&g);
            if now != sums {
                self.violation(Property::SumConservation, format!("component sums {sums:?} became {now:?}"));
                return;
            }
        }
    }
}

/// Branching vertices of each interior `Γ₀` component with their weight sum.
fn component_sums(g: &WeightedGraph) -> BTreeMap<Vec<VertexId>, Option<Weight>> {
    let Ok(d) = gamma0(g) else { return BTreeMap::new() };
    d.components
        .iter()
        .map(|c| {
            let sum = (c.case == CaseTag::Interior).then_some(c.weight_sum);
            (c.branch_subset.iter().copied().collect(), sum)
        })
        .collect()
}

fn candidate_moves(g: &WeightedGraph, max_vertices: usize) -> Vec<Move> {
    let mut out = Vec::new();
    for (v, w) in g.vertices() {
        match (w, g.degree(v).unwrap()) {
            (0, 2) => out.extend(g.neighbors(v).map(|t| Move::InnerElementary { v, toward: t })),
            (0, 1) => {
                out.push(Move::OuterElementary { v, sign: Sign::Plus });
                out.push(Move::OuterElementary { v, sign: Sign::Minus });
            }
            (-1, d) if d <= 2 => out.push(Move::BlowDown { x: v }),
            _ => {}
        }
    }
    if g.len() < max_vertices {
        out.extend(g.edges().map(|(u, v)| Move::BlowUpEdge { u, v, fresh: None }));
        if !g.is_circular() {
            out.extend(g.vertex_ids().map(|v| Move::BlowUpAtVertex { v, fresh: None }));
        }
    }
    if !g.is_circular() {
        out.extend(
            segments(g).into_iter().filter(|s| s.is_standard()).map(|s| Move::ReverseSegment { vertices: s.vertices }),
        );
    }
    out
}

/// A reversion, a unit weight shift across an odd zero segment, or a single
/// elementary move, whichever applies.
fn standard_step(rng: &mut ChaCha8Rng, g: &WeightedGraph) -> Vec<Move> {
    let segs = if g.is_circular() { Vec::new() } else { segments(g) };
    match rng.gen_range(0..3) {
        0 => {
            if let Some(s) = segs.iter().filter(|s| s.is_standard()).collect::<Vec<_>>().choose(rng) {
                return vec![Move::ReverseSegment { vertices: s.vertices.clone() }];
            }
        }
        1 => {
            let odd: Vec<_> = segs.iter().filter(|s| s.is_odd_zero() && s.kind() != SegmentKind::WholeLine).collect();
            if let Some(s) = odd.choose(rng) {
                let gainer = s.attachments().collect::<Vec<_>>().choose(rng).copied();
                let units = *[-2, -1, 1, 2].choose(rng).unwrap();
                if let Ok((_, t)) = shift_across_segment(g, s, units, gainer) {
                    return t.moves().cloned().collect();
                }
            }
        }
        _ => {}
    }
    let mut elementary: Vec<Move> = candidate_moves(g, 0)
        .into_iter()
        .filter(|m| matches!(m, Move::InnerElementary { .. } | Move::OuterElementary { .. }))
        .collect();
    elementary.shuffle(rng);
    elementary.into_iter().take(1).collect()
}
