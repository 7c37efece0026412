//! Branching vertices, linear segments and the standardness predicate.

use std::collections::BTreeSet;

use crate::graph::{GraphError, VertexId, Weight, WeightedGraph};

/// Vertices of degree at least 3.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BranchSet {
    pub ids: BTreeSet<VertexId>,
}

impl BranchSet {
    pub fn contains(&self, v: VertexId) -> bool {
        self.ids.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.ids.iter().copied()
    }
}

pub fn branch_points(g: &WeightedGraph) -> BranchSet {
    BranchSet { ids: g.vertex_ids().filter(|&v| g.degree(v).unwrap_or(0) >= 3).collect() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    /// Attached to one branching vertex; contains an end vertex.
    End,
    /// Attached to two branching vertices.
    Inner,
    /// The whole graph is a chain.
    WholeLine,
}

/// A maximal linear piece of a tree between branching vertices and/or ends.
///
/// Segments returned by [`segments`] are oriented so that, when some reading
/// direction has the standard shape, `vertices` follows that direction: the
/// first `zero_block` vertices have weight 0 and the rest carry `tail`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub vertices: Vec<VertexId>,
    /// Branching vertex adjacent to `vertices[0]`.
    pub start: Option<VertexId>,
    /// Branching vertex adjacent to the last vertex.
    pub end: Option<VertexId>,
    pub zero_block: usize,
    pub tail: Vec<Weight>,
}

impl Segment {
    pub fn kind(&self) -> SegmentKind {
        match (self.start, self.end) {
            (Some(_), Some(_)) => SegmentKind::Inner,
            (None, None) => SegmentKind::WholeLine,
            _ => SegmentKind::End,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn attachments(&self) -> impl Iterator<Item = VertexId> {
        self.start.into_iter().chain(self.end)
    }

    /// Weights in `vertices` order.
    pub fn weights(&self) -> Vec<Weight> {
        std::iter::repeat_n(0, self.zero_block).chain(self.tail.iter().copied()).collect()
    }

    /// `[[0_{2k+1}]]`.
    pub fn is_odd_zero(&self) -> bool {
        self.zero_block % 2 == 1 && self.tail.is_empty()
    }

    pub fn is_standard(&self) -> bool {
        standard_reading(&self.weights())
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.vertices.iter().copied().collect()
    }

    /// The same segment read from the other end.
    pub fn reversed(&self) -> Segment {
        let vertices: Vec<VertexId> = self.vertices.iter().rev().copied().collect();
        let weights: Vec<Weight> = self.weights().into_iter().rev().collect();
        let (zero_block, tail) = split_zero_block(&weights);
        Segment { vertices, start: self.end, end: self.start, zero_block, tail }
    }

    /// Nonzero weights in the order met when entering from `from`.
    ///
    /// `from` must be one of the attachments; a segment without attachments
    /// is read in stored order.
    pub fn nonzero_from(&self, from: Option<VertexId>) -> Vec<Weight> {
        let w: Vec<Weight> = self.weights().into_iter().filter(|&x| x != 0).collect();
        if from.is_some() && from == self.start {
            w
        } else if from.is_some() && from == self.end {
            w.into_iter().rev().collect()
        } else {
            w
        }
    }
}

fn split_zero_block(weights: &[Weight]) -> (usize, Vec<Weight>) {
    let zeros = weights.iter().take_while(|&&w| w == 0).count();
    (zeros, weights[zeros..].to_vec())
}

/// True iff `weights`, read in this order, is `[[0_{2k}, w_1..w_n]]` with all
/// `w_i <= -2`, or `[[0_{2k+1}]]`.
pub(crate) fn standard_reading(weights: &[Weight]) -> bool {
    let (zeros, tail) = split_zero_block(weights);
    if tail.is_empty() {
        return true;
    }
    zeros % 2 == 0 && tail.iter().all(|&w| w <= -2)
}

fn oriented(vertices: Vec<VertexId>, start: Option<VertexId>, end: Option<VertexId>, g: &WeightedGraph) -> Segment {
    let weights: Vec<Weight> = vertices.iter().map(|&v| g.weight(v).unwrap()).collect();
    let (zero_block, tail) = split_zero_block(&weights);
    let forward = Segment { vertices, start, end, zero_block, tail };
    if forward.is_standard() {
        return forward;
    }
    let backward = forward.reversed();
    if backward.is_standard() {
        backward
    } else {
        forward
    }
}

/// Segments of a tree: the components of `g` minus its branching vertices.
///
/// Circular graphs have no segment structure here and yield an empty list.
pub fn segments(g: &WeightedGraph) -> Vec<Segment> {
    if g.is_circular() {
        return Vec::new();
    }
    let branch = branch_points(g);
    let rest: BTreeSet<VertexId> = g.vertex_ids().filter(|v| !branch.contains(*v)).collect();
    let mut out = Vec::new();
    for comp in g.induced_components(&rest) {
        let in_comp = |v: &VertexId| comp.contains(v);
        let local_degree = |v: VertexId| g.neighbors(v).filter(in_comp).count();
        let ends: Vec<VertexId> = comp.iter().copied().filter(|&v| local_degree(v) <= 1).collect();
        let branch_nb = |v: VertexId| -> Vec<VertexId> { g.neighbors(v).filter(|u| branch.contains(*u)).collect() };

        // Pick the starting end deterministically.
        let first = if comp.len() == 1 {
            ends[0]
        } else {
            let attached: Vec<VertexId> = ends.iter().copied().filter(|&v| !branch_nb(v).is_empty()).collect();
            match attached.len() {
                0 => ends[0],
                1 => attached[0],
                _ => *attached.iter().min_by_key(|&&v| branch_nb(v)[0]).unwrap(),
            }
        };
        let mut path = vec![first];
        let mut prev: Option<VertexId> = None;
        let mut cur = first;
        loop {
            let next = g.neighbors(cur).filter(in_comp).find(|&u| Some(u) != prev);
            match next {
                Some(n) => {
                    prev = Some(cur);
                    cur = n;
                    path.push(n);
                }
                None => break,
            }
        }

        let (start, end) = if path.len() == 1 {
            let mut nb = branch_nb(path[0]);
            nb.sort();
            (nb.first().copied(), nb.get(1).copied())
        } else {
            (branch_nb(path[0]).first().copied(), branch_nb(*path.last().unwrap()).first().copied())
        };
        // End segments always start at their attachment before orientation.
        let (path, start, end) = if start.is_none() && end.is_some() {
            (path.into_iter().rev().collect(), end, None)
        } else {
            (path, start, end)
        };
        out.push(oriented(path, start, end, g));
    }
    out.sort_by(|a, b| a.vertices.iter().min().cmp(&b.vertices.iter().min()));
    out
}

/// Finds the segment of `g` whose vertex set equals `vertices`.
pub fn find_segment(g: &WeightedGraph, vertices: &[VertexId]) -> Option<Segment> {
    let wanted: BTreeSet<VertexId> = vertices.iter().copied().collect();
    segments(g).into_iter().find(|s| s.vertex_set() == wanted)
}

/// Standardness of a tree (every segment standard) or of a cycle.
pub fn is_standard(g: &WeightedGraph) -> bool {
    if g.is_circular() {
        return standard_cycle(g).is_some();
    }
    segments(g).iter().all(Segment::is_standard)
}

/// For a standard cycle: the number of zeros and the nonzero weights read
/// cyclically starting right after the zero block (in one direction).
pub(crate) fn standard_cycle(g: &WeightedGraph) -> Option<(usize, Vec<Weight>)> {
    let word = cyclic_word(g);
    let n = word.len();
    let zeros = word.iter().filter(|&&w| w == 0).count();
    if zeros == n {
        return Some((zeros, Vec::new()));
    }
    if word.iter().any(|&w| w != 0 && w > -2) || zeros % 2 == 1 {
        return None;
    }
    // Zeros must form one contiguous cyclic block.
    let start = (0..n).find(|&i| word[i] != 0 && word[(i + n - 1) % n] == 0);
    let rotated: Vec<Weight> = match start {
        None => word.clone(),
        Some(s) => (0..n).map(|i| word[(s + i) % n]).collect(),
    };
    let nonzero: Vec<Weight> = rotated.iter().copied().take_while(|&w| w != 0).collect();
    if nonzero.len() + zeros != n {
        return None;
    }
    Some((zeros, nonzero))
}

/// Weights around a cycle starting at the smallest id, toward its smaller neighbor.
pub(crate) fn cyclic_word(g: &WeightedGraph) -> Vec<Weight> {
    let first = g.vertex_ids().next().unwrap();
    let mut out = vec![g.weight(first).unwrap()];
    let mut prev = first;
    let mut cur = g.neighbors(first).next().unwrap();
    while cur != first {
        out.push(g.weight(cur).unwrap());
        let next = g.neighbors(cur).find(|&u| u != prev).unwrap();
        prev = cur;
        cur = next;
    }
    out
}

/// `g` with the segment's vertices and their incident edges removed, as
/// connected components.
pub fn graph_minus_segment(g: &WeightedGraph, l: &Segment) -> Result<Vec<WeightedGraph>, GraphError> {
    if find_segment(g, &l.vertices).is_none() {
        return Err(GraphError::NotASegment);
    }
    let drop = l.vertex_set();
    let keep: BTreeSet<VertexId> = g.vertex_ids().filter(|v| !drop.contains(v)).collect();
    g.induced_components(&keep).iter().map(|c| g.induced(c)).collect()
}
