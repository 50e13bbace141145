use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pdmqes::catalog::{FamilyParams, StartingKind, StartingPotential};
use pdmqes::oracle::{solve, transform, OracleConfig};
use pdmqes::parallel::Execution;
use pdmqes::scalar::Scalar;

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn figure_instances(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_figure_instance");
    group.sample_size(10);
    let cases = [
        ("ho", FamilyParams::ho(1, 1, 1)),
        ("morse", FamilyParams::morse(1, 1, Scalar::ratio(3, 4), 1)),
    ];
    for (name, params) in cases {
        let inst = params.build().unwrap();
        let tp = transform(&inst.v, &inst.f).unwrap();
        for (mode, exec) in modes() {
            let cfg = OracleConfig { exec, ..OracleConfig::default() };
            group.bench_with_input(BenchmarkId::new(mode, name), &tp, |b, tp| {
                b.iter(|| solve(black_box(tp), 2, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn many_levels(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_six_levels");
    group.sample_size(10);
    let sp = StartingPotential::new(StartingKind::Ho { omega: Scalar::int(1) }, 1).unwrap();
    let tp = transform(&sp.potential(), &sp.deforming_function()).unwrap();
    for n in [4000usize, 16000] {
        for (mode, exec) in modes() {
            let cfg = OracleConfig { n, exec, ..OracleConfig::default() };
            group.bench_with_input(BenchmarkId::new(mode, n), &tp, |b, tp| {
                b.iter(|| solve(black_box(tp), 6, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, figure_instances, many_levels);
criterion_main!(benches);
