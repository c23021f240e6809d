// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sqzlab_bench::{bs_point, om_point, opa_params, opo_point};
use sqzlab_core::{bs_evaluate, om_evaluate, opa_propagate, opo_evaluate, Regime};

fn closed_forms(c: &mut Criterion) {
    let bs = bs_point();
    c.bench_function("bs_evaluate", |b| b.iter(|| bs_evaluate(black_box(&bs))));
    for regime in [Regime::PhaseSqueezing, Regime::AmplitudeSqueezing] {
        let p = opo_point(regime);
        c.bench_function(&format!("opo_evaluate/{regime}"), |b| {
            b.iter(|| opo_evaluate(black_box(&p)))
        });
    }
    let om = om_point();
    c.bench_function("om_evaluate", |b| b.iter(|| om_evaluate(black_box(&om))));
}

fn amplifier(c: &mut Criterion) {
    let mut group = c.benchmark_group("opa_propagate");
    group.sample_size(20);
    for t_max in [1.0, 5.0] {
        let p = opa_params(t_max);
        group.bench_with_input(BenchmarkId::from_parameter(t_max), &p, |b, p| {
            b.iter(|| opa_propagate(p))
        });
    }
    group.finish();
}

criterion_group!(benches, closed_forms, amplifier);
criterion_main!(benches);
