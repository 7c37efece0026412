use bgc_bench::{random_standard, sample_tree_of};
use bgc_core::{canonical_form, normalize_branch_weights};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn sample_trees(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_tree");
    for n in [3, 6, 12, 24] {
        let g = sample_tree_of(n);
        group.bench_with_input(BenchmarkId::new("canonical_form", n), &g, |b, g| {
            b.iter(|| canonical_form(black_box(g)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("normalize", n), &g, |b, g| {
            b.iter(|| normalize_branch_weights(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn random_graphs(c: &mut Criterion) {
    let graphs = random_standard(11, 200, 16);
    c.bench_function("canonical_form/random_200", |b| {
        b.iter(|| {
            for g in &graphs {
                black_box(canonical_form(g).unwrap());
            }
        })
    });
}

criterion_group!(benches, sample_trees, random_graphs);
criterion_main!(benches);
