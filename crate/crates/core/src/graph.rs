//! Integer-weighted simple graphs.
//!
//! A [`WeightedGraph`] is connected and is either a tree or a single cycle in
//! which every vertex has degree 2. Values are immutable: every rewrite in
//! [`crate::moves`] builds a new graph and re-checks these invariants.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Opaque vertex token.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(id: u32) -> Self {
        VertexId(id)
    }
}

pub type Weight = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("edge references undeclared vertex {0}")]
    UndeclaredVertex(VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is neither a tree nor a single cycle")]
    ForbiddenTopology,
    #[error("a cycle needs at least 3 vertices")]
    ShortCycle,
    #[error("vertex {0} is not in the graph")]
    MissingVertex(VertexId),
    #[error("vertex sequence is not a segment of the graph")]
    NotASegment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Tree,
    Circular,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    weights: BTreeMap<VertexId, Weight>,
    adjacency: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl WeightedGraph {
    /// Builds a graph and enforces every construction invariant.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = (VertexId, Weight)>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut weights = BTreeMap::new();
        for (id, w) in vertices {
            if weights.insert(id, w).is_some() {
                return Err(GraphError::DuplicateVertex(id));
            }
        }
        let mut adjacency: BTreeMap<VertexId, BTreeSet<VertexId>> =
            weights.keys().map(|&v| (v, BTreeSet::new())).collect();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for id in [u, v] {
                if !weights.contains_key(&id) {
                    return Err(GraphError::UndeclaredVertex(id));
                }
            }
            if !adjacency.get_mut(&u).unwrap().insert(v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adjacency.get_mut(&v).unwrap().insert(u);
        }
        Self::from_maps(weights, adjacency)
    }

    /// Validates connectivity and topology of already-simple adjacency maps.
    pub(crate) fn from_maps(
        weights: BTreeMap<VertexId, Weight>,
        adjacency: BTreeMap<VertexId, BTreeSet<VertexId>>,
    ) -> Result<Self, GraphError> {
        if weights.is_empty() {
            return Err(GraphError::Empty);
        }
        let g = WeightedGraph { weights, adjacency };
        if g.reachable_from(*g.weights.keys().next().unwrap()).len() != g.weights.len() {
            return Err(GraphError::Disconnected);
        }
        let n = g.weights.len();
        let m = g.edge_count();
        if m + 1 == n {
            return Ok(g);
        }
        if m == n && g.adjacency.values().all(|nb| nb.len() == 2) {
            if n < 3 {
                return Err(GraphError::ShortCycle);
            }
            return Ok(g);
        }
        Err(GraphError::ForbiddenTopology)
    }

    /// Path `1 - 2 - … - n` with the given weights.
    pub fn chain(weights: &[Weight]) -> Result<Self, GraphError> {
        let n = weights.len() as u32;
        Self::new(
            weights.iter().enumerate().map(|(i, &w)| (VertexId(i as u32 + 1), w)),
            (1..n).map(|i| (VertexId(i), VertexId(i + 1))),
        )
    }

    /// Cycle `1 - 2 - … - n - 1` with the given weights.
    pub fn cycle(weights: &[Weight]) -> Result<Self, GraphError> {
        let n = weights.len() as u32;
        if n < 3 {
            return Err(GraphError::ShortCycle);
        }
        Self::new(
            weights.iter().enumerate().map(|(i, &w)| (VertexId(i as u32 + 1), w)),
            (1..=n).map(|i| (VertexId(i), VertexId(i % n + 1))),
        )
    }

    fn reachable_from(&self, start: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adjacency[&v] {
                if seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn topology(&self) -> Topology {
        if self.edge_count() == self.len() {
            Topology::Circular
        } else {
            Topology::Tree
        }
    }

    pub fn is_circular(&self) -> bool {
        self.topology() == Topology::Circular
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.weights.contains_key(&v)
    }

    pub fn weight(&self, v: VertexId) -> Option<Weight> {
        self.weights.get(&v).copied()
    }

    pub fn degree(&self, v: VertexId) -> Option<usize> {
        self.adjacency.get(&v).map(BTreeSet::len)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency.get(&v).into_iter().flatten().copied()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency.get(&u).is_some_and(|nb| nb.contains(&v))
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, Weight)> + '_ {
        self.weights.iter().map(|(&v, &w)| (v, w))
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.weights.keys().copied()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency.iter().flat_map(|(&u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn weight_sum(&self) -> Weight {
        self.weights.values().sum()
    }

    /// Smallest id strictly greater than every id in use.
    pub fn next_vertex_id(&self) -> VertexId {
        VertexId(self.weights.keys().next_back().map_or(1, |v| v.0 + 1))
    }

    /// Multiset of vertex degrees, sorted.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adjacency.values().map(BTreeSet::len).collect();
        d.sort_unstable();
        d
    }

    pub(crate) fn into_maps(self) -> (BTreeMap<VertexId, Weight>, BTreeMap<VertexId, BTreeSet<VertexId>>) {
        (self.weights, self.adjacency)
    }

    /// Same shape, with the weights of the listed vertices replaced.
    pub fn with_weights<I>(&self, changes: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, Weight)>,
    {
        let mut g = self.clone();
        for (v, w) in changes {
            *g.weights.get_mut(&v).ok_or(GraphError::MissingVertex(v))? = w;
        }
        Ok(g)
    }

    /// Renames vertices through `map`; ids not in the map are kept.
    ///
    /// The map must be injective on the vertex set.
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<Self, GraphError> {
        let f = |v: VertexId| map.get(&v).copied().unwrap_or(v);
        Self::new(self.vertices().map(|(v, w)| (f(v), w)), self.edges().map(|(u, v)| (f(u), f(v))))
    }

    /// Connected components of the subgraph induced by `keep`.
    pub(crate) fn induced_components(&self, keep: &BTreeSet<VertexId>) -> Vec<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in keep {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &u in &self.adjacency[&v] {
                    if keep.contains(&u) && seen.insert(u) {
                        comp.insert(u);
                        queue.push_back(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on `keep`, which must be connected.
    pub(crate) fn induced(&self, keep: &BTreeSet<VertexId>) -> Result<Self, GraphError> {
        Self::new(
            keep.iter().map(|&v| (v, self.weights[&v])),
            self.edges().filter(|(u, v)| keep.contains(u) && keep.contains(v)),
        )
    }

    /// Short hex digest of the labeled graph (ids included).
    pub fn labeled_digest(&self) -> String {
        let hash = Sha256::digest(self.to_text().as_bytes());
        hash[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
