//! Birational calculus of integer-weighted graphs.
//!
//! Graphs are trees or single cycles with an integer weight on each vertex.
//! They are rewritten by blowups, blowdowns and the elementary moves built
//! from them. Standard graphs get canonical encodings modulo segment
//! reversion and the permitted redistribution of branching weights, and a
//! bounded search oracle cross-checks those verdicts.

pub mod canon;
pub mod det;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod moves;
pub mod oracle;
pub mod segment;

pub use canon::{
    canonical_form, equivalent, gamma0, normalize_branch_weights, shift_across_segment, CanonError, CanonicalForm,
    CaseTag, Gamma0Component, Gamma0Decomposition,
};
pub use det::intersection_determinant;
pub use format::{parse_graph, ParseError, ParseErrorKind};
pub use graph::{GraphError, Topology, VertexId, Weight, WeightedGraph};
pub use moves::{apply_trace, invert_trace, Granularity, Move, MoveError, Sign, Trace, TraceError, TraceStep};
pub use segment::{branch_points, graph_minus_segment, is_standard, segments, BranchSet, Segment, SegmentKind};
