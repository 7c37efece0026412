use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::digest::{structural_key, StructuralKey};
use super::{successors, MoveSet, OracleError, SearchBounds};
use crate::det::intersection_determinant;
use crate::graph::WeightedGraph;
use crate::moves::{Move, Trace};

struct Node {
    graph: WeightedGraph,
    depth: usize,
    parent: Option<(usize, Move)>,
}

/// Graphs reachable from a source, one representative per isomorphism class.
///
/// Each representative is the exact result of replaying its trace from the
/// source.
pub struct Exploration {
    index: HashMap<StructuralKey, usize>,
    nodes: Vec<Node>,
    complete: bool,
}

impl Exploration {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// False when the state budget cut the search short.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn contains(&self, g: &WeightedGraph) -> bool {
        self.index.contains_key(&structural_key(g))
    }

    pub fn depth_of(&self, g: &WeightedGraph) -> Option<usize> {
        self.index.get(&structural_key(g)).map(|&i| self.nodes[i].depth)
    }

    /// Moves from the source to the stored representative of `g`'s class.
    pub fn trace_to(&self, g: &WeightedGraph) -> Option<Trace> {
        let mut i = *self.index.get(&structural_key(g))?;
        let mut moves = Vec::new();
        while let Some((p, m)) = &self.nodes[i].parent {
            moves.push(m.clone());
            i = *p;
        }
        moves.reverse();
        Some(Trace::from_moves(moves))
    }

    /// Representatives in discovery order, with their depth.
    pub fn graphs(&self) -> impl Iterator<Item = (&WeightedGraph, usize)> {
        self.nodes.iter().map(|n| (&n.graph, n.depth))
    }

    pub fn representative(&self, g: &WeightedGraph) -> Option<&WeightedGraph> {
        self.index.get(&structural_key(g)).map(|&i| &self.nodes[i].graph)
    }
}

/// Breadth-first closure of `g` under all moves, within `b`.
pub fn explore(g: &WeightedGraph, b: &SearchBounds) -> Result<Exploration, OracleError> {
    explore_until(g, b, MoveSet::Full, |_| false).map(|(e, _)| e)
}

/// Breadth-first search that stops at the first state satisfying `goal`.
pub(crate) fn explore_until(
    g: &WeightedGraph,
    b: &SearchBounds,
    set: MoveSet,
    goal: impl Fn(&WeightedGraph) -> bool,
) -> Result<(Exploration, Option<WeightedGraph>), OracleError> {
    b.validate()?;
    let mut ex = Exploration {
        index: HashMap::from([(structural_key(g), 0)]),
        nodes: vec![Node { graph: g.clone(), depth: 0, parent: None }],
        complete: true,
    };
    if goal(g) {
        return Ok((ex, Some(g.clone())));
    }
    let mut head = 0;
    while head < ex.nodes.len() {
        let depth = ex.nodes[head].depth;
        if depth >= b.max_depth {
            break;
        }
        for (m, h) in successors(&ex.nodes[head].graph, set, b) {
            let key = structural_key(&h);
            if ex.index.contains_key(&key) {
                continue;
            }
            if ex.nodes.len() >= b.max_states {
                ex.complete = false;
                return Ok((ex, None));
            }
            ex.index.insert(key, ex.nodes.len());
            let hit = goal(&h).then(|| h.clone());
            ex.nodes.push(Node { graph: h, depth: depth + 1, parent: Some((head, m)) });
            if hit.is_some() {
                return Ok((ex, hit));
            }
        }
        head += 1;
    }
    Ok((ex, None))
}

/// An invariant that tells two graphs apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Separation {
    /// `|det|` of the intersection matrices differ.
    Determinant { left: i128, right: i128 },
    /// One graph is circular and the other is a tree.
    Topology,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Connected by a sequence of `depth` moves (up to isomorphism).
    True {
        depth: usize,
    },
    False(Separation),
    /// No connection found; `budget_exhausted` when the state cap was hit.
    Inconclusive {
        states: usize,
        budget_exhausted: bool,
    },
}

impl Verdict {
    pub fn is_true(&self) -> bool {
        matches!(self, Verdict::True { .. })
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Verdict::False(_))
    }
}

enum Meet {
    Found(usize),
    NotFound { states: usize, budget_exhausted: bool },
}

/// Bidirectional breadth-first search; frontiers are expanded smallest first
/// and the combined depth never exceeds `b.max_depth`.
fn bidirectional(g1: &WeightedGraph, g2: &WeightedGraph, set: MoveSet, b: &SearchBounds) -> Meet {
    struct Side {
        seen: HashSet<StructuralKey>,
        frontier: Vec<WeightedGraph>,
        depth: usize,
    }
    let start =
        |g: &WeightedGraph| Side { seen: HashSet::from([structural_key(g)]), frontier: vec![g.clone()], depth: 0 };
    let mut sides = [start(g1), start(g2)];
    if sides[0].seen.iter().next() == sides[1].seen.iter().next() {
        return Meet::Found(0);
    }
    loop {
        let states = sides[0].seen.len() + sides[1].seen.len();
        if sides[0].depth + sides[1].depth >= b.max_depth || sides.iter().any(|s| s.frontier.is_empty()) {
            return Meet::NotFound { states, budget_exhausted: false };
        }
        let (a, other) = if sides[0].frontier.len() <= sides[1].frontier.len() { (0, 1) } else { (1, 0) };
        let frontier = std::mem::take(&mut sides[a].frontier);
        let mut next = Vec::new();
        let mut total = states;
        for g in &frontier {
            for (_, h) in successors(g, set, b) {
                let key = structural_key(&h);
                if sides[other].seen.contains(&key) {
                    return Meet::Found(sides[a].depth + sides[other].depth + 1);
                }
                if sides[a].seen.insert(key) {
                    total += 1;
                    if total > b.max_states {
                        return Meet::NotFound { states: total, budget_exhausted: true };
                    }
                    next.push(h);
                }
            }
        }
        sides[a].frontier = next;
        sides[a].depth += 1;
    }
}

/// Search-based equivalence check, independent of the canonicalizer.
///
/// `False` is only claimed from an invariant; an unsuccessful search is
/// `Inconclusive`. Moves that keep the vertex set fixed are tried first
/// since they keep the state space small.
pub fn oracle_equivalent(g1: &WeightedGraph, g2: &WeightedGraph, b: &SearchBounds) -> Verdict {
    if structural_key(g1) == structural_key(g2) {
        return Verdict::True { depth: 0 };
    }
    if g1.is_circular() != g2.is_circular() {
        return Verdict::False(Separation::Topology);
    }
    let (d1, d2) = (intersection_determinant(g1).abs(), intersection_determinant(g2).abs());
    if d1 != d2 {
        return Verdict::False(Separation::Determinant { left: d1, right: d2 });
    }
    let mut explored = 0;
    if g1.len() == g2.len() {
        match bidirectional(g1, g2, MoveSet::Rigid, b) {
            Meet::Found(depth) => return Verdict::True { depth },
            Meet::NotFound { states, .. } => explored += states,
        }
    }
    match bidirectional(g1, g2, MoveSet::Full, b) {
        Meet::Found(depth) => Verdict::True { depth },
        Meet::NotFound { states, budget_exhausted } => {
            Verdict::Inconclusive { states: explored + states, budget_exhausted }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{sample_tree, star};
    use crate::moves::apply_trace;

    fn small() -> SearchBounds {
        SearchBounds { max_vertices: 8, weight_min: -5, weight_max: 5, max_depth: 6, max_states: 50_000 }
    }

    #[test]
    fn depth_zero_is_source() {
        let g: WeightedGraph = "chain 0 0 -2".parse().unwrap();
        let ex = explore(&g, &SearchBounds { max_depth: 0, ..small() }).unwrap();
        assert_eq!(ex.len(), 1);
        assert!(ex.contains(&g));
        assert!(ex.is_complete());
    }

    #[test]
    fn finds_reversal_with_replayable_trace() {
        let g: WeightedGraph = "chain 0 0 -2 -3".parse().unwrap();
        let r: WeightedGraph = "chain 0 0 -3 -2".parse().unwrap();
        let ex = explore(&g, &SearchBounds { max_depth: 2, ..small() }).unwrap();
        assert!(ex.contains(&r));
        let t = ex.trace_to(&r).unwrap();
        let end = apply_trace(&g, &t).unwrap();
        assert_eq!(structural_key(&end), structural_key(&r));
        assert_eq!(ex.representative(&r), Some(&end));
    }

    #[test]
    fn star_center_takes_every_value() {
        let g = star(5, &[&[0], &[-2], &[-2, -3]]);
        let b = SearchBounds { max_vertices: 6, weight_min: -8, weight_max: 8, max_depth: 14, max_states: 100_000 };
        let (ex, _) = explore_until(&g, &b, MoveSet::Rigid, |_| false).unwrap();
        for c in -8..=8 {
            assert!(ex.contains(&star(c, &[&[0], &[-2], &[-2, -3]])), "c = {c}");
        }
    }

    #[test]
    fn budget_marks_incomplete() {
        let g: WeightedGraph = "chain 0 0 -2 -3".parse().unwrap();
        let ex = explore(&g, &SearchBounds { max_states: 10, ..small() }).unwrap();
        assert!(!ex.is_complete());
        assert_eq!(ex.len(), 10);
    }

    #[test]
    fn closed_under_inverse_moves() {
        let g: WeightedGraph = "chain 0 -2".parse().unwrap();
        let b = SearchBounds { max_depth: 3, max_vertices: 4, ..small() };
        let ex = explore(&g, &b).unwrap();
        for (h, depth) in ex.graphs() {
            if depth >= b.max_depth {
                continue;
            }
            for (m, k) in successors(h, MoveSet::Full, &b) {
                let back = m.inverse(h).unwrap().apply(&k).unwrap();
                assert_eq!(&back, h);
                assert!(ex.contains(&k));
            }
        }
    }

    #[test]
    fn verdict_examples() {
        let b = SearchBounds::default();
        assert_eq!(oracle_equivalent(&sample_tree(&[2, -3]), &sample_tree(&[0, -1]), &b), Verdict::True { depth: 2 });
        let c2: WeightedGraph = "chain 0 0 -2".parse().unwrap();
        let c3: WeightedGraph = "chain 0 0 -3".parse().unwrap();
        assert_eq!(oracle_equivalent(&c2, &c3, &b), Verdict::False(Separation::Determinant { left: 2, right: 3 }));
        assert_eq!(oracle_equivalent(&c2, &c2, &b), Verdict::True { depth: 0 });
        let cyc: WeightedGraph = "cycle 0 0 -2".parse().unwrap();
        assert_eq!(oracle_equivalent(&c2, &cyc, &b), Verdict::False(Separation::Topology));
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let b = SearchBounds { max_states: 5, ..small() };
        let v = oracle_equivalent(&sample_tree(&[2, -3]), &sample_tree(&[-3, 2]), &b);
        assert_eq!(v, Verdict::True { depth: 0 });
        let v = oracle_equivalent(&"chain 0 0 -2 -3".parse().unwrap(), &"chain 0 0 -3 -2".parse().unwrap(), &b);
        assert!(matches!(v, Verdict::Inconclusive { budget_exhausted: true, .. }), "{v:?}");
    }
}
