use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use entroflux_core::models::{gaussian_entropy, gaussian_occupation_u, run_maser, run_squeezed};
use entroflux_core::sampling::{random_density, random_potential};
use entroflux_core::{
    eigendecompose, solve_alpha, BoundMode, MaserParams, RunOptions, SqueezedParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bench_solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_alpha");
    for dim in [2, 4, 6] {
        let mut rng = ChaCha8Rng::seed_from_u64(dim as u64);
        let cases: Vec<_> = (0..64)
            .map(|_| {
                let pot = random_potential(&mut rng, dim, 1e-3).unwrap();
                let (lo, hi) = pot.log_range();
                let target = lo + rng.random_range(0.01..0.99) * (hi - lo);
                (pot, target)
            })
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(dim), &cases, |b, cases| {
            b.iter(|| {
                for (pot, target) in cases {
                    black_box(solve_alpha(pot, *target).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn bench_eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigendecompose");
    for dim in [2, 3, 6] {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + dim as u64);
        group.bench_function(BenchmarkId::from_parameter(dim), |b| {
            b.iter_batched(
                || random_density(&mut rng, dim),
                |rho| eigendecompose(&rho).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn bench_gaussian(c: &mut Criterion) {
    c.bench_function("gaussian_entropy", |b| {
        b.iter(|| {
            let u = gaussian_occupation_u(black_box(1.3), black_box(0.9)).unwrap();
            gaussian_entropy(u)
        })
    });
}

fn bench_runs(c: &mut Criterion) {
    let mut group = c.benchmark_group("run");
    group.sample_size(20);
    let maser = MaserParams::reference_example();
    for mode in [BoundMode::Incremental, BoundMode::Resolve] {
        let opts = RunOptions::new(10.0, 1e-3).mode(mode);
        group.bench_function(format!("maser/{mode:?}"), |b| {
            b.iter(|| run_maser(&maser, &opts).unwrap())
        });
    }
    let squeezed = SqueezedParams::reference_example();
    group.bench_function("squeezed", |b| {
        b.iter(|| run_squeezed(&squeezed, &RunOptions::new(6.0, 1e-3)).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_solver,
    bench_eigen,
    bench_gaussian,
    bench_runs
);
criterion_main!(benches);
