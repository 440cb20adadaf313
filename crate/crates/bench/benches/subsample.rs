use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use netsub::subsample::{confidence_interval, p_subsample, vertex_subsample};
use netsub::{Normalization, StatisticSpec, SubsampleScheme};
use netsub_bench::block_model_graph;

fn draws(c: &mut Criterion) {
    let g = block_model_graph(1000, 1);
    let mut rng = netsub::rng::stream(5, &[]);
    let mut group = c.benchmark_group("draw");
    group.bench_function("vertex_b300", |b| b.iter(|| vertex_subsample(black_box(&g), 300, &mut rng).unwrap()));
    group.bench_function("psample_p0.3", |b| b.iter(|| p_subsample(black_box(&g), 0.3, &mut rng).unwrap()));
    group.finish();
}

fn intervals(c: &mut Criterion) {
    let g = block_model_graph(1000, 1);
    let spec = StatisticSpec::eigenvalue(-1, Normalization::EstimatedRho);
    let mut group = c.benchmark_group("confidence_interval");
    group.sample_size(10);
    for (name, scheme) in [
        ("vertex_b300_x100", SubsampleScheme::Vertex { b: 300 }),
        ("psample_p0.3_x100", SubsampleScheme::PSample { p: 0.3 }),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| confidence_interval(black_box(&g), &spec, scheme, 100, 0.95, 7).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, draws, intervals);
criterion_main!(benches);
