use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use numrad::bounds::{BoundId, Probe};
use numrad::ensemble::{generate, run_study, EnsembleSpec, Family};
use numrad::radius::radius_sample_oracle_with;
use numrad::{numerical_radius, Execution, RadiusConfig};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn radius(c: &mut Criterion) {
    let mut group = c.benchmark_group("numerical_radius");
    for n in [8, 32] {
        let a = generate(&EnsembleSpec::new(Family::Ginibre, n, 1, 11).unwrap(), 0).unwrap();
        for (name, execution) in MODES {
            let cfg = RadiusConfig {
                execution,
                ..RadiusConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(name, n), &a, |b, a| {
                b.iter(|| numerical_radius(a, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_oracle");
    let a = generate(&EnsembleSpec::new(Family::Ginibre, 16, 1, 12).unwrap(), 0).unwrap();
    for (name, execution) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| radius_sample_oracle_with(&a, 20_000, 1, execution).unwrap())
        });
    }
    group.finish();
}

fn study(c: &mut Criterion) {
    let mut group = c.benchmark_group("study");
    group.sample_size(10);
    let spec = EnsembleSpec::new(Family::Ginibre, 6, 32, 13).unwrap();
    let probes = Probe::expand(&[BoundId::T1, BoundId::T2, BoundId::T3, BoundId::Cor], &[]);
    for (name, execution) in MODES {
        let cfg = RadiusConfig {
            grid_points: 64,
            execution,
            ..RadiusConfig::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| run_study(&spec, &probes, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, radius, oracle, study);
criterion_main!(benches);
