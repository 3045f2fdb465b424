use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qsep_core::exec::Execution;
use qsep_core::riemann::xi_coeffs;
use qsep_core::theoremlab::{verify, TrialConfig};

fn modes() -> Vec<(&'static str, Execution)> {
    let mut v = vec![("sequential", Execution::Sequential)];
    if cfg!(feature = "parallel") {
        v.push(("parallel", Execution::Parallel));
    }
    v
}

fn theorem_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("trials");
    group.sample_size(10);
    for id in ["q-rolle", "route-agreement"] {
        for (label, execution) in modes() {
            let cfg = TrialConfig { trials: 64, n_max: 8, execution, ..TrialConfig::default() };
            group.bench_with_input(BenchmarkId::new(id, label), &cfg, |b, cfg| {
                b.iter(|| verify(id, cfg).expect("valid config"))
            });
        }
    }
    group.finish();
}

fn moment_quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("xi_moments");
    group.sample_size(10);
    for (label, execution) in modes() {
        group.bench_function(label, |b| b.iter(|| xi_coeffs(10, 128, execution).expect("converges")));
    }
    group.finish();
}

criterion_group!(benches, theorem_trials, moment_quadrature);
criterion_main!(benches);
