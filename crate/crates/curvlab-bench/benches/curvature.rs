//! Criterion benchmarks for the hot paths: per-edge curvature (both
//! routes), canonicalization, corpus generation, and classification.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use curvlab_core::*;
use std::hint::black_box;

/// The densest 10-vertex positively curved survivor found by
/// classification; a realistic "hard" input for the positivity probe.
fn big_survivor() -> Graph {
    let report = classify_positively_curved(10, ClassifyScope::MinDegreeTwo).unwrap();
    let best = report.graphs.iter().max_by_key(|g| g.edges.len()).unwrap();
    parse_graph6(&best.graph6).unwrap()
}

fn bench_edge_curvature(c: &mut Criterion) {
    let g8 = find_g8();
    let mut group = c.benchmark_group("edge_curvature");
    group.bench_function("residual_coupling_g8", |b| {
        b.iter(|| {
            for &(u, v) in &g8.edges() {
                black_box(kappa_adjacent(black_box(&g8), u, v).unwrap());
            }
        })
    });
    group.bench_function("lipschitz_dual_g8", |b| {
        b.iter(|| {
            for &(u, v) in &g8.edges() {
                black_box(kappa_lipschitz(black_box(&g8), u, v).unwrap());
            }
        })
    });
    group.bench_function("full_report_g8", |b| {
        b.iter(|| black_box(curvature_report(black_box(&g8), true).unwrap()))
    });
    group.finish();
}

fn bench_canonicalization(c: &mut Criterion) {
    let graphs: Vec<Graph> = enumerate_2connected_outerplanar(9).unwrap();
    c.bench_function("canonical_code_n9_corpus", |b| {
        b.iter(|| {
            for g in &graphs {
                black_box(canonical_code(black_box(g)));
            }
        })
    });
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(20);
    group.bench_function("two_connected_n8", |b| {
        b.iter(|| black_box(enumerate_2connected_outerplanar(black_box(8)).unwrap()))
    });
    group.bench_function("min_deg2_n8", |b| {
        b.iter(|| black_box(enumerate_outerplanar_min_deg2(black_box(8)).unwrap()))
    });
    group.finish();
}

fn bench_classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classification");
    group.sample_size(10);
    group.bench_function("classify_n6", |b| {
        b.iter(|| {
            black_box(classify_positively_curved(black_box(6), ClassifyScope::MinDegreeTwo).unwrap())
        })
    });
    group.finish();
}

fn bench_positivity_probe(c: &mut Criterion) {
    let g = big_survivor();
    c.bench_function("is_positively_curved_big_survivor", |b| {
        b.iter_batched(
            || g.clone(),
            |g| black_box(is_positively_curved(&g).unwrap()),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(
    benches,
    bench_edge_curvature,
    bench_canonicalization,
    bench_enumeration,
    bench_classification,
    bench_positivity_probe
);
criterion_main!(benches);
