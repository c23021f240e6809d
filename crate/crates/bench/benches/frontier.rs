// SPDX-License-Identifier: Apache-2.0

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use sqzlab_bench::square_grid;
use sqzlab_core::frontier::DEFAULT_THRESHOLDS;
use sqzlab_core::{frontier, sweep, AlphaBins, Method};

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for method in [
        Method::BeamSplitter,
        Method::OpoPhase,
        Method::OpaPhase,
        Method::OmAmplitude,
    ] {
        let grid = square_grid(method, 100);
        group.throughput(Throughput::Elements(grid.len() as u64));
        group.bench_function(method.name(), |b| b.iter(|| sweep(&grid).unwrap()));
    }
    group.finish();
}

fn extraction(c: &mut Criterion) {
    let points = sweep(&square_grid(Method::BeamSplitter, 300))
        .unwrap()
        .points();
    let bins = AlphaBins::default();
    let mut group = c.benchmark_group("frontier");
    group.throughput(Throughput::Elements(points.len() as u64));
    group.bench_function("bs/5 thresholds", |b| {
        b.iter(|| {
            DEFAULT_THRESHOLDS
                .iter()
                .map(|&t| frontier(&points, t, &bins).unwrap())
                .collect::<Vec<_>>()
        })
    });
    group.finish();
}

criterion_group!(benches, sweeps, extraction);
criterion_main!(benches);
