use super::search::explore_until;
use super::{MoveSet, OracleError, SearchBounds};
use crate::graph::{VertexId, Weight, WeightedGraph};
use crate::moves::{Move, Sign, Trace};
use crate::segment::{branch_points, is_standard};

fn is_chain(g: &WeightedGraph) -> bool {
    !g.is_circular() && branch_points(g).is_empty()
}

/// Vertices of a chain from one end to the other.
fn path_order(g: &WeightedGraph) -> Vec<VertexId> {
    let start = g.vertex_ids().find(|&v| g.degree(v).unwrap() <= 1).unwrap();
    let mut order = vec![start];
    let mut prev = None;
    let mut cur = start;
    while let Some(next) = g.neighbors(cur).find(|&u| Some(u) != prev) {
        order.push(next);
        prev = Some(cur);
        cur = next;
    }
    order
}

/// Maximal runs of zero weights as `(first index, length)`.
fn zero_blocks(w: &[Weight]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (i, &x) in w.iter().enumerate() {
        if x != 0 {
            continue;
        }
        match out.last_mut() {
            Some((s, l)) if *s + *l == i => *l += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

/// One deterministic reduction step, or `None` when the greedy rules do not
/// apply.
fn greedy_step(g: &WeightedGraph) -> Option<Vec<Move>> {
    if g.len() > 1 {
        if let Some(x) = g.vertex_ids().find(|&v| g.weight(v) == Some(-1)) {
            return Some(vec![Move::BlowDown { x }]);
        }
    }
    let path = path_order(g);
    let w: Vec<Weight> = path.iter().map(|&v| g.weight(v).unwrap()).collect();
    if w.iter().any(|&x| x > 0 || x == -1) {
        return None;
    }
    let n = path.len();
    let blocks = zero_blocks(&w);
    let repeat = |m: Move, k: Weight| std::iter::repeat_n(m, k.unsigned_abs() as usize).collect::<Vec<_>>();
    // An odd block at either end: pull a pair outward or absorb the next weight.
    for &(s, l) in &blocks {
        if l % 2 == 0 {
            continue;
        }
        let (zeros, after): (Vec<usize>, usize) = if s == 0 && s + l < n {
            ((0..l).collect(), l)
        } else if s + l == n && s > 0 {
            ((s..n).rev().collect(), s - 1)
        } else {
            continue;
        };
        if l == 1 {
            // [0, a, ..] -> [0, 0, ..]
            let sign = if w[after] < 0 { Sign::Plus } else { Sign::Minus };
            return Some(repeat(Move::OuterElementary { v: path[zeros[0]], sign }, w[after]));
        }
        // [.., 0, 0, a, ..] -> [.., a, 0, 0, ..] at the inner end of the block.
        let z = path[zeros[l - 1]];
        return Some(repeat(Move::InnerElementary { v: z, toward: path[after] }, w[after]));
    }
    // An even block away from the left end hops left one vertex at a time.
    for &(s, l) in &blocks {
        if l % 2 == 1 || s == 0 {
            continue;
        }
        let a = w[s - 1];
        return Some(repeat(Move::InnerElementary { v: path[s], toward: path[s - 1] }, a));
    }
    None
}

/// Reduces a chain to a standard chain, returning the moves used.
///
/// Greedy rules blow down `-1` vertices and collect zero blocks at one end;
/// when they do not apply, a breadth-first search within `b` finishes the
/// job. Failure of that search is reported, never guessed around.
pub fn standardize_chain(g: &WeightedGraph, b: &SearchBounds) -> Result<(WeightedGraph, Trace), OracleError> {
    if !is_chain(g) {
        return Err(OracleError::NotAChain);
    }
    b.validate()?;
    let mut cur = g.clone();
    let mut trace = Trace::new();
    for _ in 0..10_000 {
        if is_standard(&cur) {
            return Ok((cur, trace));
        }
        let Some(moves) = greedy_step(&cur) else { break };
        for m in moves {
            cur = m.apply(&cur).expect("greedy standardization step applies");
            trace.push(m);
        }
    }
    let goal = |h: &WeightedGraph| is_chain(h) && is_standard(h);
    let (ex, hit) = explore_until(&cur, b, MoveSet::Full, goal)?;
    let Some(target) = hit else {
        return Err(OracleError::Exhausted { states: ex.len() });
    };
    trace.extend(ex.trace_to(&target).unwrap());
    Ok((target, trace))
}
