use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dualgraph::experiments::{model_sweep, SweepConfig};
use dualgraph::models::{build_model, ModelSpec};
use dualgraph::par::Execution;
use dualgraph::splitting::{estimate_splittability, GbasConfig};
use std::hint::black_box;

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn splittability(c: &mut Criterion) {
    let spec = ModelSpec::resolve("3").unwrap();
    let mut group = c.benchmark_group("splittability_k2");
    group.sample_size(10);
    for n in [256usize, 1024] {
        let g = build_model(&spec, n, 1).unwrap();
        for (name, execution) in STRATEGIES {
            let cfg = GbasConfig {
                execution,
                ..GbasConfig::new(7)
            };
            group.bench_with_input(BenchmarkId::new(name, n), &g, |b, g| {
                b.iter(|| estimate_splittability(black_box(g), "bench", 2, None, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("model_sweep");
    group.sample_size(10);
    for (name, execution) in STRATEGIES {
        let cfg = SweepConfig {
            models: ["2", "3", "8"].iter().map(|m| ModelSpec::resolve(m).unwrap()).collect(),
            sizes: vec![100, 400],
            seeds_per_size: 4,
            execution,
            ..SweepConfig::default()
        };
        group.bench_function(name, |b| b.iter(|| model_sweep(black_box(&cfg)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, splittability, sweep);
criterion_main!(benches);
