//! Acceptance gate: each criterion prints one PASS/FAIL line with its runtime
//! and limit. The process fails if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use bgc_core::fixtures::{sample_tree, star};
use bgc_core::oracle::{check_invariants, oracle_equivalent, standardize_chain, structural_key, SearchBounds, Verdict};
use bgc_core::{
    apply_trace, canonical_form, equivalent, intersection_determinant, is_standard, VertexId, Weight, WeightedGraph,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn chain(w: &[Weight]) -> WeightedGraph {
    WeightedGraph::chain(w).unwrap()
}

fn encoding(g: &WeightedGraph) -> Result<String, String> {
    canonical_form(g).map(|c| c.encoding).map_err(|e| format!("{g:?}: {e}"))
}

fn end_star(c: Weight) -> WeightedGraph {
    star(c, &[&[0], &[-2], &[-2, -3]])
}

fn worked_example() -> Outcome {
    let g = sample_tree(&[2, -3, 5]);
    let cf = canonical_form(&g).map_err(|e| e.to_string())?;
    let w: Vec<Weight> = (1..=3).map(|i| cf.normalized.weight(VertexId(i)).unwrap()).collect();
    ensure(w == [0, 0, 4], || format!("normalized branch weights {w:?}"))?;
    for (other, expected) in [([1, 1, 2], true), ([4, 0, 0], true), ([0, 0, 5], false)] {
        let got = equivalent(&g, &sample_tree(&other)).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("equiv against {other:?} gave {got}"))?;
    }
    Ok("branch weights (0,0,4); equiv true, true, false".into())
}

fn end_vertex_freedom() -> Outcome {
    let (a, b) = (end_star(5), end_star(-7));
    ensure(equivalent(&a, &b) == Ok(true), || "canon verdict is not equivalent".into())?;
    let v = oracle_equivalent(&a, &b, &SearchBounds::default());
    ensure(v.is_true(), || format!("oracle verdict {v:?}"))?;
    Ok(format!("canon equivalent, oracle {v:?}"))
}

/// Every standard chain `[[0_{2k}, tail]]` with at most `max` vertices and tail
/// weights in `lo..=hi`, including the all-zero ones.
fn standard_chains(max: usize, lo: Weight, hi: Weight) -> Vec<Vec<Weight>> {
    let mut out = Vec::new();
    for zeros in (1..=max).step_by(2) {
        out.push(vec![0; zeros]);
    }
    for zeros in (0..=max).step_by(2) {
        let mut tails: Vec<Vec<Weight>> = vec![vec![]];
        for _ in zeros..max {
            tails = tails.iter().flat_map(|t| (lo..=hi).map(move |w| [t.clone(), vec![w]].concat())).collect();
            for t in &tails {
                out.push([vec![0; zeros], t.clone()].concat());
            }
        }
        if zeros > 0 {
            out.push(vec![0; zeros]);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn reversal(w: &[Weight]) -> Vec<Weight> {
    let zeros = w.iter().take_while(|&&x| x == 0).count();
    let tail: Vec<Weight> = w[zeros..].iter().rev().copied().collect();
    [vec![0; zeros], tail].concat()
}

fn reversion_uniqueness() -> Outcome {
    let chains = standard_chains(7, -5, -2);
    let mut nontrivial = Vec::new();
    for w in &chains {
        let r = reversal(w);
        ensure(encoding(&chain(w))? == encoding(&chain(&r))?, || format!("{w:?} vs {r:?}"))?;
        if structural_key(&chain(w)) != structural_key(&chain(&r)) {
            nontrivial.push((w.clone(), r));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sample: Vec<_> = nontrivial.choose_multiple(&mut rng, 60).cloned().collect();
    let mut confirmed = 0;
    for (w, r) in &sample {
        let v = oracle_equivalent(&chain(w), &chain(r), &SearchBounds::default());
        ensure(v.is_true(), || format!("oracle on {w:?} vs {r:?}: {v:?}"))?;
        confirmed += 1;
    }
    ensure(confirmed >= 50, || format!("only {confirmed} oracle pairs"))?;
    Ok(format!("{} chains canonical-stable, {confirmed} oracle pairs True", chains.len()))
}

fn dihedral_class(word: &[Weight]) -> Vec<Weight> {
    let n = word.len();
    let mut all = BTreeSet::new();
    for r in 0..n.max(1) {
        let rot: Vec<Weight> = (0..n).map(|i| word[(r + i) % n]).collect();
        all.insert(rot.iter().rev().copied().collect::<Vec<_>>());
        all.insert(rot);
    }
    all.into_iter().next().unwrap_or_default()
}

fn circular_clause() -> Outcome {
    let mut classes: BTreeMap<(usize, Vec<Weight>), BTreeSet<String>> = BTreeMap::new();
    let mut cycles = 0;
    for zeros in [0usize, 2, 4] {
        let mut words: Vec<Vec<Weight>> = vec![vec![]];
        for n in 0..=5 {
            if n > 0 {
                words = words.iter().flat_map(|t| (-4..=-2).map(move |w| [t.clone(), vec![w]].concat())).collect();
            }
            if zeros + n < 3 {
                continue;
            }
            for word in &words {
                let base = encoding(&WeightedGraph::cycle(&[vec![0; zeros], word.clone()].concat()).unwrap())?;
                for r in 0..n.max(1) {
                    let rot: Vec<Weight> = (0..n).map(|i| word[(r + i) % n]).collect();
                    let refl: Vec<Weight> = rot.iter().rev().copied().collect();
                    for variant in [rot, refl] {
                        let g = WeightedGraph::cycle(&[vec![0; zeros], variant.clone()].concat()).unwrap();
                        ensure(encoding(&g)? == base, || format!("zeros {zeros}, {word:?} vs {variant:?}"))?;
                    }
                }
                classes.entry((zeros, dihedral_class(word))).or_default().insert(base);
                cycles += 1;
            }
        }
    }
    let mut seen: HashMap<&String, &(usize, Vec<Weight>)> = HashMap::new();
    for (class, encodings) in &classes {
        ensure(encodings.len() == 1, || format!("{class:?} has encodings {encodings:?}"))?;
        let e = encodings.iter().next().unwrap();
        if let Some(prev) = seen.insert(e, class) {
            return Err(format!("{prev:?} and {class:?} share {e}"));
        }
    }
    Ok(format!("{cycles} cycles, {} distinct classes and encodings", classes.len()))
}

fn invariant_fuzzing() -> Outcome {
    let b = SearchBounds { max_vertices: 10, max_depth: 30, ..SearchBounds::default() };
    let r = check_invariants(2024, 1000, &b).map_err(|e| e.to_string())?;
    ensure(r.is_clean(), || r.to_text())?;
    Ok(format!(
        "{} trials, {} moves, {} standard comparisons, 0 violations",
        r.trials, r.moves_checked, r.standard_comparisons
    ))
}

/// All unlabeled trees with up to `max` vertices, as edge lists on `1..=n`.
fn tree_shapes(max: usize) -> Vec<WeightedGraph> {
    let mut all = Vec::new();
    let mut layer = vec![WeightedGraph::chain(&[0]).unwrap()];
    for n in 1..=max {
        all.extend(layer.iter().cloned());
        if n == max {
            break;
        }
        let mut next: BTreeMap<String, WeightedGraph> = BTreeMap::new();
        for g in &layer {
            let fresh = VertexId(n as u32 + 1);
            for v in g.vertex_ids() {
                let vertices = g.vertices().chain([(fresh, 0)]);
                let edges = g.edges().chain([(v, fresh)]);
                let h = WeightedGraph::new(vertices, edges).unwrap();
                next.entry(structural_key(&h).as_str().to_string()).or_insert(h);
            }
        }
        layer = next.into_values().collect();
    }
    all
}

fn standard_trees(max: usize, weights: &[Weight]) -> Vec<WeightedGraph> {
    let mut out: BTreeMap<String, WeightedGraph> = BTreeMap::new();
    for shape in tree_shapes(max) {
        let ids: Vec<VertexId> = shape.vertex_ids().collect();
        let total = weights.len().pow(ids.len() as u32);
        for mut code in 0..total {
            let assignment = ids.iter().map(|&v| {
                let w = weights[code % weights.len()];
                code /= weights.len();
                (v, w)
            });
            let g = shape.with_weights(assignment.collect::<Vec<_>>()).unwrap();
            if is_standard(&g) {
                out.entry(structural_key(&g).as_str().to_string()).or_insert(g);
            }
        }
    }
    out.into_values().collect()
}

fn oracle_agreement() -> Outcome {
    let family = standard_trees(8, &[-3, -2, 0]);
    let mut by_class: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut by_det: BTreeMap<i128, Vec<usize>> = BTreeMap::new();
    for (i, g) in family.iter().enumerate() {
        by_class.entry(encoding(g)?).or_default().push(i);
        by_det.entry(intersection_determinant(g).abs()).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pairs = Vec::new();
    let multi: Vec<&Vec<usize>> = by_class.values().filter(|c| c.len() > 1).collect();
    while pairs.len() < 250 && !multi.is_empty() {
        let c = multi.choose(&mut rng).unwrap();
        let (i, j) = (c[rng.gen_range(0..c.len())], c[rng.gen_range(0..c.len())]);
        if i != j {
            pairs.push((i, j));
        }
    }
    let dets: Vec<&Vec<usize>> = by_det.values().filter(|c| c.len() > 1).collect();
    while pairs.len() < 500 {
        let c = dets.choose(&mut rng).unwrap();
        let (i, j) = (c[rng.gen_range(0..c.len())], c[rng.gen_range(0..c.len())]);
        if i != j {
            pairs.push((i, j));
        }
    }
    let b = SearchBounds { max_vertices: 10, weight_min: -4, weight_max: 4, max_depth: 10, max_states: 20_000 };
    let (mut agree_true, mut refuted, mut inconclusive) = (0, 0, 0);
    for &(i, j) in &pairs {
        let (g, h) = (&family[i], &family[j]);
        let canon = equivalent(g, h).map_err(|e| e.to_string())?;
        let v = oracle_equivalent(g, h, &b);
        match (canon, v) {
            (false, Verdict::True { .. }) | (true, Verdict::False(_)) => {
                return Err(format!("canon {canon}, oracle {v:?}\n{g}\n{h}"));
            }
            (true, Verdict::True { .. }) => agree_true += 1,
            (false, Verdict::False(_)) => refuted += 1,
            _ => inconclusive += 1,
        }
    }
    Ok(format!(
        "{} trees, {} pairs: {agree_true} both true, {refuted} refuted by invariant, {inconclusive} inconclusive",
        family.len(),
        pairs.len()
    ))
}

fn chain_standardization() -> Outcome {
    let mut notes = Vec::new();
    for (input, expected) in [(vec![2], vec![0, 0, -2]), (vec![-1, -1], vec![0])] {
        let g = chain(&input);
        let (h, t) = standardize_chain(&g, &SearchBounds::default()).map_err(|e| e.to_string())?;
        ensure(structural_key(&h) == structural_key(&chain(&expected)), || format!("{input:?} gave {h:?}"))?;
        ensure(apply_trace(&g, &t).as_ref() == Ok(&h), || format!("trace for {input:?} does not replay"))?;
        let (d0, d1) = (intersection_determinant(&g).abs(), intersection_determinant(&h).abs());
        ensure(d0 == d1, || format!("|det| {d0} became {d1}"))?;
        notes.push(format!("{input:?} -> {expected:?} in {} moves", t.len()));
    }
    Ok(notes.join(", "))
}

fn relabeling_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for g in [sample_tree(&[2, -3, 5]), end_star(5)] {
        let base = encoding(&g)?;
        for _ in 0..100 {
            let ids: Vec<VertexId> = g.vertex_ids().collect();
            let mut targets: Vec<u32> = (1..=3 * ids.len() as u32).collect();
            targets.shuffle(&mut rng);
            let map: BTreeMap<VertexId, VertexId> = ids.iter().zip(targets).map(|(&a, b)| (a, VertexId(b))).collect();
            let h = g.relabel(&map).unwrap();
            ensure(encoding(&h)? == base, || format!("relabeling {map:?} changed the encoding"))?;
        }
    }
    Ok("200 relabelings, one encoding per graph".into())
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("worked example", Duration::from_secs(1), worked_example),
        ("end-vertex weight freedom", Duration::from_secs(10), end_vertex_freedom),
        ("reversion uniqueness", Duration::from_secs(60), reversion_uniqueness),
        ("cycle classification", Duration::from_secs(30), circular_clause),
        ("invariant fuzzing", Duration::from_secs(60), invariant_fuzzing),
        ("oracle agreement", Duration::from_secs(300), oracle_agreement),
        ("chain standardization", Duration::from_secs(5), chain_standardization),
        ("relabeling invariance", Duration::from_secs(5), relabeling_invariance),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *limit => Err(format!("too slow; {detail}")),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("{status} {} {name} ({:.2}s, limit {}s): {detail}", i + 1, elapsed.as_secs_f64(), limit.as_secs());
        failed += outcome.is_err() as usize;
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
