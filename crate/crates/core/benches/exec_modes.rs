use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dyadic_core::classify::classify;
use dyadic_core::config::builtin;
use dyadic_core::exec::Exec;
use dyadic_core::simulate::joint_spectrum_residual;
use dyadic_core::threads::{adversarial_search, SearchParams};
use num_complex::Complex64;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn search(c: &mut Criterion) {
    let z = builtin("roots2k").unwrap().spectrum.unwrap();
    let mut g = c.benchmark_group("adversarial_search");
    for (name, exec) in MODES {
        let p = SearchParams {
            depth: 40,
            start_levels: (1..=8).collect(),
            exec,
            ..SearchParams::default()
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| adversarial_search(black_box(&z), &p))
        });
    }
    g.finish();
}

fn residual(c: &mut Criterion) {
    let z = builtin("rectangle").unwrap().spectrum.unwrap();
    let lambda = vec![Complex64::new(1.0, 0.0); 8];
    let mut g = c.benchmark_group("joint_spectrum_residual");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| joint_spectrum_residual(black_box(&z), &lambda, 100_000, exec))
        });
    }
    g.finish();
}

fn classify_family(c: &mut Criterion) {
    let cfg = builtin("primefamily").unwrap();
    let z = cfg.spectrum().unwrap();
    let mut g = c.benchmark_group("classify_primefamily");
    g.sample_size(10);
    for (name, exec) in MODES {
        let p = cfg.settings.classify_params(exec);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| classify(black_box(z), &p))
        });
    }
    g.finish();
}

criterion_group!(benches, search, residual, classify_family);
criterion_main!(benches);
