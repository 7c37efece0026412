//! Named graphs used by tests, benchmarks and the CLI examples.

use rand::Rng;

use crate::graph::{VertexId, Weight, WeightedGraph};
use crate::segment::{is_standard, segments};

/// Branching vertices `1..=n` with the given weights, consecutive ones joined
/// through a single weight-0 vertex, each carrying two pendant `-2` vertices.
///
/// Ids: branching vertices first, then connectors, then pendants.
pub fn sample_tree(branch_weights: &[Weight]) -> WeightedGraph {
    let n = branch_weights.len() as u32;
    assert!(n >= 2, "sample_tree needs at least two branching vertices");
    let mut vertices: Vec<(VertexId, Weight)> =
        branch_weights.iter().enumerate().map(|(i, &w)| (VertexId(i as u32 + 1), w)).collect();
    let mut edges = Vec::new();
    let mut next = n + 1;
    for i in 1..n {
        let c = VertexId(next);
        next += 1;
        vertices.push((c, 0));
        edges.push((VertexId(i), c));
        edges.push((c, VertexId(i + 1)));
    }
    for i in 1..=n {
        for _ in 0..2 {
            let p = VertexId(next);
            next += 1;
            vertices.push((p, -2));
            edges.push((VertexId(i), p));
        }
    }
    WeightedGraph::new(vertices, edges).expect("sample_tree is a tree")
}

/// Center `1` of weight `center` with one path per arm, read outward.
pub fn star(center: Weight, arms: &[&[Weight]]) -> WeightedGraph {
    let mut vertices = vec![(VertexId(1), center)];
    let mut edges = Vec::new();
    let mut next = 2;
    for arm in arms {
        let mut prev = VertexId(1);
        for &w in arm.iter() {
            let v = VertexId(next);
            next += 1;
            vertices.push((v, w));
            edges.push((prev, v));
            prev = v;
        }
    }
    WeightedGraph::new(vertices, edges).expect("star is a tree")
}

/// Random tree, chain or cycle with standard weights and at most
/// `max_vertices` vertices.
pub fn random_standard_graph<R: Rng>(rng: &mut R, max_vertices: usize) -> WeightedGraph {
    let tail = |rng: &mut R| rng.gen_range(-4..=-2);
    let kind = rng.gen_range(0..10);
    if kind == 0 && max_vertices >= 3 {
        let n = rng.gen_range(3..=max_vertices);
        let zeros = if rng.gen_bool(0.2) { n } else { 2 * rng.gen_range(0..=n / 2) };
        let w: Vec<Weight> = (0..n).map(|i| if i < zeros { 0 } else { tail(rng) }).collect();
        return WeightedGraph::cycle(&w).unwrap();
    }
    let n = rng.gen_range(1..=max_vertices);
    let ids: Vec<VertexId> = (1..=n as u32).map(VertexId).collect();
    let edges: Vec<(VertexId, VertexId)> = (1..n).map(|i| (ids[rng.gen_range(0..i)], ids[i])).collect();
    let shape = WeightedGraph::new(ids.iter().map(|&v| (v, -2)), edges).unwrap();
    let mut weights: Vec<(VertexId, Weight)> = Vec::new();
    for s in segments(&shape) {
        let len = s.len();
        let all_zero = len % 2 == 1 && rng.gen_bool(0.4);
        let zeros = if all_zero { len } else { 2 * rng.gen_range(0..=len / 2) };
        for (i, &v) in s.vertices.iter().enumerate() {
            weights.push((v, if i < zeros { 0 } else { tail(rng) }));
        }
    }
    for v in shape.vertex_ids().filter(|&v| shape.degree(v).unwrap() >= 3) {
        weights.push((v, rng.gen_range(-4..=4)));
    }
    let g = shape.with_weights(weights).unwrap();
    debug_assert!(is_standard(&g), "{g}");
    g
}
