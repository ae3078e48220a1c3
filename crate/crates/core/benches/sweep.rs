use criterion::{criterion_group, criterion_main, Criterion};

use lsminit::experiment::{run_sweep_with, Execution, SweepConfig};
use lsminit::{InitMethod, WeightRange};

fn small_sweep() -> SweepConfig {
    SweepConfig {
        ranges: vec![WeightRange::new(1.0, 10.0).unwrap(), WeightRange::new(10.0, 20.0).unwrap()],
        methods: vec![InitMethod::UniformRandom, InitMethod::BarabasiAlbert { n: None, m: 2 }],
        epochs: 2,
        seeds: (0..4).collect(),
        duration: 500.0,
        ..SweepConfig::default()
    }
}

fn bench(c: &mut Criterion) {
    let cfg = small_sweep();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| run_sweep_with(&cfg, Execution::Parallel).unwrap()));
    group.bench_function("sequential", |b| b.iter(|| run_sweep_with(&cfg, Execution::Sequential).unwrap()));
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
