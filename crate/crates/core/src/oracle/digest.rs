//! Isomorphism-invariant keys for visited sets.
//!
//! Trees are keyed by the smaller of their rooted encodings at the center
//! vertices; cycles by the least rotation or reflection of their weight word.
//! None of this shares code with the canonicalizer.

use std::collections::BTreeMap;

use crate::graph::{VertexId, Weight, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructuralKey(Box<str>);

impl StructuralKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub fn structural_key(g: &WeightedGraph) -> StructuralKey {
    let s = if g.is_circular() { cycle_key(g) } else { tree_key(g) };
    StructuralKey(s.into_boxed_str())
}

fn cycle_key(g: &WeightedGraph) -> String {
    let start = g.vertex_ids().next().unwrap();
    let mut word = vec![g.weight(start).unwrap()];
    let (mut prev, mut cur) = (start, g.neighbors(start).next().unwrap());
    while cur != start {
        word.push(g.weight(cur).unwrap());
        let next = g.neighbors(cur).find(|&u| u != prev).unwrap();
        (prev, cur) = (cur, next);
    }
    let n = word.len();
    let mut best: Option<Vec<Weight>> = None;
    for dir in [false, true] {
        for r in 0..n {
            let cand: Vec<Weight> =
                (0..n).map(|i| if dir { word[(r + n - i) % n] } else { word[(r + i) % n] }).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    let body: Vec<String> = best.unwrap().iter().map(Weight::to_string).collect();
    format!("c{}", body.join(" "))
}

fn centers(g: &WeightedGraph) -> Vec<VertexId> {
    let mut degree: BTreeMap<VertexId, usize> = g.vertex_ids().map(|v| (v, g.degree(v).unwrap())).collect();
    let mut layer: Vec<VertexId> = degree.iter().filter(|(_, &d)| d <= 1).map(|(&v, _)| v).collect();
    let mut remaining = g.len();
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            degree.insert(v, 0);
            for u in g.neighbors(v) {
                let d = degree.get_mut(&u).unwrap();
                if *d > 0 {
                    *d -= 1;
                    if *d == 1 {
                        next.push(u);
                    }
                }
            }
        }
        layer = next;
    }
    layer
}

fn rooted(g: &WeightedGraph, v: VertexId, parent: Option<VertexId>) -> String {
    let mut kids: Vec<String> = g.neighbors(v).filter(|&u| Some(u) != parent).map(|u| rooted(g, u, Some(v))).collect();
    kids.sort_unstable();
    format!("{}({})", g.weight(v).unwrap(), kids.concat())
}

fn tree_key(g: &WeightedGraph) -> String {
    format!("t{}", centers(g).into_iter().map(|c| rooted(g, c, None)).min().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(text: &str) -> StructuralKey {
        structural_key(&text.parse().unwrap())
    }

    #[test]
    fn chains_and_reversal() {
        assert_eq!(key("chain 0 0 -2 -3"), key("chain -3 -2 0 0"));
        assert_ne!(key("chain 0 0 -2 -3"), key("chain 0 0 -3 -2"));
        assert_eq!(key("chain 5"), key("v 9 5"));
    }

    #[test]
    fn relabeling() {
        let a = key("v 1 3\nv 2 -2\nv 3 -2\nv 4 0\ne 1 2\ne 1 3\ne 1 4");
        let b = key("v 10 -2\nv 4 0\nv 7 3\nv 2 -2\ne 7 10\ne 7 4\ne 2 7");
        assert_eq!(a, b);
    }

    #[test]
    fn cycles() {
        assert_eq!(key("cycle 0 0 -2 -3 -4"), key("cycle -3 -4 0 0 -2"));
        assert_eq!(key("cycle 0 0 -2 -3 -4"), key("cycle 0 0 -4 -3 -2"));
        assert_ne!(key("cycle 0 0 -2 -3 -4"), key("cycle 0 -2 0 -3 -4"));
        assert_ne!(key("cycle 0 0 0"), key("chain 0 0 0"));
    }

    #[test]
    fn bicentral_trees() {
        assert_eq!(centers(&"chain 1 2 3 4".parse().unwrap()).len(), 2);
        assert_ne!(key("chain 1 2 3 4"), key("chain 1 3 2 4"));
    }
}
