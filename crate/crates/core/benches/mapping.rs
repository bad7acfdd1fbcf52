use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qlayout::exec::{map_batch, Execution};
use qlayout::synth;
use qlayout::trace::{find_lrnos_indexed_symbols, find_lrnos_symbols};
use qlayout::{Calibration, CouplingGraph, Method};
use rand::Rng;

fn batch(c: &mut Criterion) {
    let graph = CouplingGraph::builtin("kolkata").unwrap();
    let cal = Calibration::neutral(&graph);
    let circuits = synth::corpus(7, 16, 50, 4_000, 27);
    let mut group = c.benchmark_group("map_batch");
    group.sample_size(10);
    for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_function(label, |b| {
            b.iter(|| map_batch(exec, black_box(&circuits), &graph, &cal, Method::Gsf))
        });
    }
    group.finish();
}

fn lrnos(c: &mut Criterion) {
    let mut group = c.benchmark_group("lrnos");
    group.sample_size(10);
    for n in [1_000usize, 4_000] {
        let mut r = synth::rng(n as u64);
        let s: Vec<u32> = (0..n).map(|_| r.gen_range(0..64)).collect();
        group.bench_with_input(BenchmarkId::new("dp", n), &s, |b, s| b.iter(|| find_lrnos_symbols(s)));
        group.bench_with_input(BenchmarkId::new("suffix_array", n), &s, |b, s| {
            b.iter(|| find_lrnos_indexed_symbols(s))
        });
    }
    group.finish();
}

criterion_group!(benches, batch, lrnos);
criterion_main!(benches);
