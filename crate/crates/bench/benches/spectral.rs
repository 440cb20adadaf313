use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use netsub::counts::raw_count;
use netsub::spectral::{top_eigenvalues_with, Solver, SpectrumRequest};
use netsub::Motif;
use netsub_bench::{block_model_graph, latent_space_graph};

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("extreme_eigenvalues");
    for n in [100, 300, 500] {
        let g = block_model_graph(n, 1);
        for (name, solver) in [("dense", Solver::Dense), ("lanczos", Solver::Lanczos)] {
            group.bench_with_input(BenchmarkId::new(name, n), &g, |b, g| {
                b.iter(|| top_eigenvalues_with(black_box(g), SpectrumRequest::new(1, 1), solver).unwrap())
            });
        }
    }
    let g = latent_space_graph(3000, 1);
    group.bench_function("lanczos_latent_3000", |b| {
        b.iter(|| top_eigenvalues_with(black_box(&g), SpectrumRequest::new(3, 1), Solver::Lanczos).unwrap())
    });
    group.finish();
}

fn counts(c: &mut Criterion) {
    let g = block_model_graph(300, 2);
    let mut group = c.benchmark_group("raw_count");
    for m in [Motif::Triangle, Motif::Cycle { p: 4 }, Motif::Cycle { p: 5 }] {
        group.bench_function(m.label(), |b| b.iter(|| raw_count(black_box(&g), m).unwrap()));
    }
    group.finish();
}

fn generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_graph");
    group.sample_size(10);
    group.bench_function("block_model_2000", |b| b.iter(|| block_model_graph(2000, 3)));
    group.bench_function("latent_space_2000", |b| b.iter(|| latent_space_graph(2000, 3)));
    group.finish();
}

criterion_group!(benches, solvers, counts, generation);
criterion_main!(benches);
