//! Sequential against data-parallel evaluation of region scans and of
//! certification batches.

use std::hint::black_box;
use std::path::Path;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lcm_core::exec::Execution;
use lcm_core::lcm::{certify, default_strategy};
use lcm_core::random::SystemSampler;
use lcm_core::scan::ScanSpec;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn fixture(name: &str) -> ScanSpec {
    ScanSpec::read(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)).expect("fixture")
}

fn scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    for file in ["three_pole_real_scan.toml", "three_pole_complex_scan.toml", "five_zero_scan.toml"] {
        let spec = fixture(file);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, file), &spec, |b, spec| {
                b.iter(|| black_box(spec.run(exec)))
            });
        }
    }
    group.finish();
}

fn certification_batch(c: &mut Criterion) {
    let mut s = SystemSampler::new(7);
    let systems: Vec<_> = (0..500).map(|i| s.system(1 + i % 4, i % 3, true)).collect();
    let strategy = default_strategy();
    let mut group = c.benchmark_group("certify_batch");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(exec.map(&systems, |tf| certify(tf, &strategy)))));
    }
    group.finish();
}

criterion_group!(benches, scans, certification_batch);
criterion_main!(benches);
