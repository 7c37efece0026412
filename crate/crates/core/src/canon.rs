//! Normal forms of standard graphs.
//!
//! For a standard tree, let `B` be its branching vertices and `Γ₀` the union
//! of `B` with every all-zero segment of odd length, together with the edges
//! joining those segments to `B`. Within one component `G` of `Γ₀`, unit
//! weight shifts across the odd zero segments move weight freely between the
//! branching vertices of `G`, and nothing else can change a branching weight.
//! So the weights on `G ∩ B` are arbitrary when `G` contains an end vertex of
//! the graph and fixed only up to their sum otherwise, while every other
//! segment is determined up to reversion.
//!
//! [`canonical_form`] encodes exactly these invariants, so equal encodings
//! mean birationally equivalent standard graphs.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{VertexId, Weight, WeightedGraph};
use crate::moves::{Move, MoveError, Sign, Trace};
use crate::segment::{
    branch_points, find_segment, is_standard, segments, standard_cycle, BranchSet, Segment, SegmentKind,
};

/// Version prefix of every encoding.
pub const ENCODING_PREFIX: &str = "bgc1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("graph is not standard")]
    NotStandard,
    #[error("graph is circular")]
    Circular,
    #[error("vertices do not form a segment of the graph")]
    NotASegment,
    #[error("segment is not an all-zero segment of odd length")]
    NotOddZero,
    #[error("segment has no branching vertex attached")]
    NoAttachment,
    #[error("shift target {0:?} is not an attachment of the segment")]
    BadTarget(Option<VertexId>),
    #[error(transparent)]
    Move(#[from] MoveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// The component contains an end vertex of the graph.
    EndVertex,
    Interior,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::EndVertex => "end-vertex",
            CaseTag::Interior => "interior",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gamma0Component {
    pub vertices: BTreeSet<VertexId>,
    pub branch_subset: BTreeSet<VertexId>,
    pub case: CaseTag,
    pub weight_sum: Weight,
    /// Odd zero segments inside the component.
    pub segments: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gamma0Decomposition {
    pub gamma0_vertices: BTreeSet<VertexId>,
    pub components: Vec<Gamma0Component>,
}

impl Gamma0Decomposition {
    pub fn component_of(&self, v: VertexId) -> Option<&Gamma0Component> {
        self.components.iter().find(|c| c.vertices.contains(&v))
    }
}

fn require_standard_tree(g: &WeightedGraph) -> Result<(), CanonError> {
    if g.is_circular() {
        return Err(CanonError::Circular);
    }
    if !is_standard(g) {
        return Err(CanonError::NotStandard);
    }
    Ok(())
}

pub fn gamma0(g: &WeightedGraph) -> Result<Gamma0Decomposition, CanonError> {
    require_standard_tree(g)?;
    Ok(decompose(g, &branch_points(g), segments(g)))
}

fn decompose(g: &WeightedGraph, branch: &BranchSet, segs: Vec<Segment>) -> Gamma0Decomposition {
    let odd: Vec<Segment> = segs.into_iter().filter(Segment::is_odd_zero).collect();
    let mut gamma0_vertices: BTreeSet<VertexId> = branch.ids.clone();
    for s in &odd {
        gamma0_vertices.extend(s.vertices.iter().copied());
    }

    // Union-find over Γ₀; branch-branch edges are not part of Γ₀.
    let mut parent: BTreeMap<VertexId, VertexId> = gamma0_vertices.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<VertexId, VertexId>, v: VertexId) -> VertexId {
        let p = parent[&v];
        if p == v {
            return v;
        }
        let r = find(parent, p);
        parent.insert(v, r);
        r
    }
    let mut union = |a: VertexId, b: VertexId| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent.insert(ra.max(rb), ra.min(rb));
        }
    };
    for s in &odd {
        for w in s.vertices.windows(2) {
            union(w[0], w[1]);
        }
        for a in s.attachments() {
            union(a, s.vertices[0]);
        }
    }

    let mut groups: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    for &v in &gamma0_vertices {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().insert(v);
    }
    let mut components: Vec<Gamma0Component> = groups
        .into_values()
        .map(|vertices| {
            let branch_subset: BTreeSet<VertexId> = vertices.iter().copied().filter(|&v| branch.contains(v)).collect();
            let case =
                if vertices.iter().any(|&v| g.degree(v) == Some(1)) { CaseTag::EndVertex } else { CaseTag::Interior };
            let weight_sum = branch_subset.iter().map(|&v| g.weight(v).unwrap()).sum();
            let segments = odd.iter().filter(|s| vertices.contains(&s.vertices[0])).cloned().collect();
            Gamma0Component { vertices, branch_subset, case, weight_sum, segments }
        })
        .collect();
    components.sort_by_key(|c| c.vertices.iter().next().copied());
    Gamma0Decomposition { gamma0_vertices, components }
}

/// Moves `s` units of weight across an odd all-zero segment.
///
/// For an inner segment `gainer` names the attached branching vertex whose
/// weight grows by `s`; the other attachment loses `s`. For an end segment
/// only its single attachment changes, and `gainer` may be omitted. The
/// segment itself is unchanged.
///
/// One unit is the product of elementary moves at the odd positions
/// `z_1, z_3, …` counted from the gaining side: each pushes a unit toward the
/// gainer and the next one cancels the intermediate change.
pub fn shift_across_segment(
    g: &WeightedGraph,
    l: &Segment,
    s: Weight,
    gainer: Option<VertexId>,
) -> Result<(WeightedGraph, Trace), CanonError> {
    let seg = find_segment(g, &l.vertices).ok_or(CanonError::NotASegment)?;
    if !seg.is_odd_zero() {
        return Err(CanonError::NotOddZero);
    }
    let attachments: Vec<VertexId> = seg.attachments().collect();
    let gain = match (seg.kind(), gainer) {
        (SegmentKind::WholeLine, _) => return Err(CanonError::NoAttachment),
        (SegmentKind::End, None) => attachments[0],
        (_, Some(a)) if attachments.contains(&a) => a,
        (_, other) => return Err(CanonError::BadTarget(other)),
    };
    // Read the segment from the gaining side.
    let mut path = seg.vertices.clone();
    if seg.start != Some(gain) {
        path.reverse();
    }
    let mut moves = Vec::new();
    let units = s.unsigned_abs();
    match seg.kind() {
        SegmentKind::Inner => {
            // A negative shift toward `gain` is a positive shift toward the other side.
            let (path, first_neighbor) = if s > 0 {
                (path, gain)
            } else {
                let other = attachments.iter().copied().find(|&a| a != gain).unwrap();
                (path.into_iter().rev().collect(), other)
            };
            for _ in 0..units {
                for i in (0..path.len()).step_by(2) {
                    let toward = if i == 0 { first_neighbor } else { path[i - 1] };
                    moves.push(Move::InnerElementary { v: path[i], toward });
                }
            }
        }
        SegmentKind::End => {
            let last = path.len() - 1;
            for _ in 0..units {
                for i in (0..last).step_by(2) {
                    let toward = match (s > 0, i) {
                        (true, 0) => gain,
                        (true, _) => path[i - 1],
                        (false, _) => path[i + 1],
                    };
                    moves.push(Move::InnerElementary { v: path[i], toward });
                }
                let sign = if s > 0 { Sign::Plus } else { Sign::Minus };
                moves.push(Move::OuterElementary { v: path[last], sign });
            }
        }
        SegmentKind::WholeLine => unreachable!(),
    }
    let mut cur = g.clone();
    for m in &moves {
        cur = m.apply(&cur)?;
    }
    Ok((cur, Trace::from_moves(moves)))
}

/// Labeled skeleton of a standard tree: branching vertices, the segments
/// between them, and pendant segments as decorations.
///
/// Labels are invariant under everything [`canonical_form`] quotients by.
struct Skeleton {
    nodes: BTreeMap<VertexId, SkeletonNode>,
}

struct SkeletonNode {
    label: String,
    ends: Vec<String>,
    links: Vec<(VertexId, String, Option<Segment>)>,
}

/// Zero count and nonzero weights read from `from`.
///
/// A standard segment `[[0_{2k}, w_1..w_n]]` and its reversion carry the same
/// nonzero word in the same direction between the same attachments; only
/// the zero block changes sides.
fn segment_label(seg: &Segment, from: Option<VertexId>) -> String {
    let word = |w: &[Weight]| w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    if seg.kind() == SegmentKind::WholeLine {
        let fwd = seg.nonzero_from(None);
        let rev: Vec<Weight> = fwd.iter().rev().copied().collect();
        return format!("z{}[{}]", seg.zero_block, word(fwd.min(rev).as_slice()));
    }
    format!("z{}[{}]", seg.zero_block, word(&seg.nonzero_from(from)))
}

impl Skeleton {
    fn new(g: &WeightedGraph, branch: &BranchSet, segs: &[Segment], dec: &Gamma0Decomposition) -> Self {
        let mut nodes: BTreeMap<VertexId, SkeletonNode> = BTreeMap::new();
        for b in branch.iter() {
            let comp = dec.component_of(b).expect("every branching vertex lies in Γ₀");
            let label = match comp.case {
                CaseTag::EndVertex => "f".to_string(),
                CaseTag::Interior => format!("s{}", comp.weight_sum),
            };
            nodes.insert(b, SkeletonNode { label, ends: Vec::new(), links: Vec::new() });
        }
        for (u, v) in g.edges() {
            if branch.contains(u) && branch.contains(v) {
                nodes.get_mut(&u).unwrap().links.push((v, "d".into(), None));
                nodes.get_mut(&v).unwrap().links.push((u, "d".into(), None));
            }
        }
        for s in segs {
            match (s.start, s.end) {
                (Some(a), Some(b)) => {
                    nodes.get_mut(&a).unwrap().links.push((b, segment_label(s, Some(a)), Some(s.clone())));
                    nodes.get_mut(&b).unwrap().links.push((a, segment_label(s, Some(b)), Some(s.clone())));
                }
                (Some(a), None) | (None, Some(a)) => {
                    nodes.get_mut(&a).unwrap().ends.push(segment_label(s, Some(a)));
                }
                (None, None) => {}
            }
        }
        Skeleton { nodes }
    }

    fn rooted_name(&self, v: VertexId, parent: Option<VertexId>) -> String {
        let node = &self.nodes[&v];
        let mut ends = node.ends.clone();
        ends.sort();
        let mut kids: Vec<String> = node
            .links
            .iter()
            .filter(|(u, _, _)| Some(*u) != parent)
            .map(|(u, label, _)| format!("<{label}>{}", self.rooted_name(*u, Some(v))))
            .collect();
        kids.sort();
        format!("({}|{}|{})", node.label, ends.concat(), kids.concat())
    }

    fn name(&self) -> String {
        self.nodes.keys().map(|&b| self.rooted_name(b, None)).min().unwrap_or_default()
    }
}

type ParentLink<'a> = Option<(VertexId, &'a Segment)>;

/// Tree formed by the branching vertices of one component and the inner odd
/// zero segments joining them.
struct ComponentTree<'a> {
    adjacency: BTreeMap<VertexId, Vec<(VertexId, &'a Segment)>>,
}

impl<'a> ComponentTree<'a> {
    fn new(comp: &'a Gamma0Component) -> Self {
        let mut adjacency: BTreeMap<VertexId, Vec<(VertexId, &Segment)>> =
            comp.branch_subset.iter().map(|&b| (b, Vec::new())).collect();
        for s in comp.segments.iter().filter(|s| s.kind() == SegmentKind::Inner) {
            let (a, b) = (s.start.unwrap(), s.end.unwrap());
            adjacency.get_mut(&a).unwrap().push((b, s));
            adjacency.get_mut(&b).unwrap().push((a, s));
        }
        ComponentTree { adjacency }
    }

    /// Parent links and depths from `root`.
    fn bfs(&self, root: VertexId) -> BTreeMap<VertexId, (usize, ParentLink<'a>)> {
        let mut out = BTreeMap::from([(root, (0, None))]);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let d = out[&v].0;
            for &(u, s) in &self.adjacency[&v] {
                if let std::collections::btree_map::Entry::Vacant(e) = out.entry(u) {
                    e.insert((d + 1, Some((v, s))));
                    queue.push_back(u);
                }
            }
        }
        out
    }

    fn eccentricity(&self, v: VertexId) -> usize {
        self.bfs(v).values().map(|(d, _)| *d).max().unwrap_or(0)
    }
}

/// Zeroes every branching weight of each `Γ₀` component except, for
/// components without an end vertex, one root that carries the component's
/// weight sum.
///
/// Weights are pushed toward the root along the component tree, deepest
/// vertices first. In a component with an end vertex the root is the
/// branching vertex nearest to one, and its weight is finally discharged
/// through that end segment. Roots are chosen from the labeled structure
/// alone, so the result does not depend on how weight was distributed in the
/// input, and normalizing twice changes nothing.
pub fn normalize_branch_weights(g: &WeightedGraph) -> Result<(WeightedGraph, Trace), CanonError> {
    require_standard_tree(g)?;
    let branch = branch_points(g);
    let segs = segments(g);
    let dec = decompose(g, &branch, segs.clone());
    let skeleton = Skeleton::new(g, &branch, &segs, &dec);

    let mut cur = g.clone();
    let mut trace = Trace::new();
    let mut shift = |cur: &mut WeightedGraph, seg: &Segment, s: Weight, gainer: VertexId| -> Result<(), CanonError> {
        if s != 0 {
            let (next, t) = shift_across_segment(cur, seg, s, Some(gainer))?;
            *cur = next;
            trace.extend(t);
        }
        Ok(())
    };

    for comp in &dec.components {
        if comp.branch_subset.is_empty() {
            continue;
        }
        let tree = ComponentTree::new(comp);
        let name = |b: VertexId| skeleton.rooted_name(b, None);
        let (root, discharge) = match comp.case {
            CaseTag::Interior => {
                let root = comp
                    .branch_subset
                    .iter()
                    .copied()
                    .min_by_key(|&b| (Reverse(tree.eccentricity(b)), name(b), Reverse(b)))
                    .unwrap();
                (root, None)
            }
            CaseTag::EndVertex => {
                let ends: Vec<&Segment> = comp.segments.iter().filter(|s| s.kind() == SegmentKind::End).collect();
                let shortest = ends.iter().map(|s| s.len()).min().unwrap();
                let seg = ends
                    .into_iter()
                    .filter(|s| s.len() == shortest)
                    .min_by_key(|s| {
                        let b = s.attachments().next().unwrap();
                        (name(b), Reverse(b), s.vertices[0])
                    })
                    .unwrap();
                (seg.attachments().next().unwrap(), Some(seg))
            }
        };

        let order = tree.bfs(root);
        let mut by_depth: Vec<(VertexId, usize, ParentLink)> = order.iter().map(|(&v, &(d, p))| (v, d, p)).collect();
        by_depth.sort_by_key(|&(v, d, _)| (Reverse(d), v));
        for (child, _, link) in by_depth {
            let Some((parent, seg)) = link else { continue };
            let w = cur.weight(child).unwrap();
            shift(&mut cur, seg, w, parent)?;
        }
        if let Some(seg) = discharge {
            let w = cur.weight(root).unwrap();
            shift(&mut cur, seg, -w, root)?;
        }
    }
    Ok((cur, trace))
}

/// Canonical encoding of a standard graph plus a normalized witness.
///
/// Ordered by `encoding`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub encoding: String,
    pub normalized: WeightedGraph,
}

impl PartialOrd for WeightedGraph {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeightedGraph {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.to_text().cmp(&other.to_text())
    }
}

fn word(w: &[Weight]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Least rotation of `w` or of its reversal.
pub(crate) fn least_cyclic_word(w: &[Weight]) -> Vec<Weight> {
    let n = w.len();
    let rev: Vec<Weight> = w.iter().rev().copied().collect();
    (0..n.max(1))
        .flat_map(|r| {
            let a: Vec<Weight> = (0..n).map(|i| w[(r + i) % n]).collect();
            let b: Vec<Weight> = (0..n).map(|i| rev[(r + i) % n]).collect();
            [a, b]
        })
        .min()
        .unwrap_or_default()
}

pub fn canonical_form(g: &WeightedGraph) -> Result<CanonicalForm, CanonError> {
    if g.is_circular() {
        let (zeros, nonzero) = standard_cycle(g).ok_or(CanonError::NotStandard)?;
        return Ok(CanonicalForm {
            encoding: format!("{ENCODING_PREFIX}:cycle:z{zeros}[{}]", word(&least_cyclic_word(&nonzero))),
            normalized: g.clone(),
        });
    }
    require_standard_tree(g)?;
    let branch = branch_points(g);
    let segs = segments(g);
    if branch.is_empty() {
        return Ok(CanonicalForm {
            encoding: format!("{ENCODING_PREFIX}:chain:{}", segment_label(&segs[0], None)),
            normalized: g.clone(),
        });
    }
    let dec = decompose(g, &branch, segs.clone());
    let skeleton = Skeleton::new(g, &branch, &segs, &dec);
    let (normalized, _) = normalize_branch_weights(g)?;
    Ok(CanonicalForm { encoding: format!("{ENCODING_PREFIX}:tree:{}", skeleton.name()), normalized })
}

/// Birational equivalence of two standard graphs.
///
/// A circular and a non-circular graph are never equivalent.
pub fn equivalent(g1: &WeightedGraph, g2: &WeightedGraph) -> Result<bool, CanonError> {
    for g in [g1, g2] {
        if !is_standard(g) {
            return Err(CanonError::NotStandard);
        }
    }
    if g1.is_circular() != g2.is_circular() {
        return Ok(false);
    }
    Ok(canonical_form(g1)?.encoding == canonical_form(g2)?.encoding)
}
