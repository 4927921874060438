use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use periodic_tikhonov::{
    add_noise_snr, analyze, evaluate_barycentric, laplace_penalty, make_grid, select_gcv, select_lcurve,
    select_morozov, solve, sweep, GalleryFunction, MorozovOptions, ParameterGrid, SweepConfig,
};

fn noisy_f1(n: usize) -> (periodic_tikhonov::TrapezoidalGrid, Vec<f64>, f64) {
    let grid = make_grid(n).unwrap();
    let clean = grid.sample(|x| GalleryFunction::F1.eval(x));
    let r = add_noise_snr(&clean, 20.0, 7).unwrap();
    (grid, r.noisy, r.eps_wnorm)
}

fn fit(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit");
    for n in [101, 501, 2001] {
        let (grid, f, _) = noisy_f1(n);
        let penalty = laplace_penalty(grid.max_degree(), 1.0).unwrap();
        group.bench_with_input(BenchmarkId::new("analyze", n), &n, |b, _| {
            b.iter(|| analyze(black_box(&f), &grid, grid.max_degree()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("solve", n), &n, |b, _| {
            b.iter(|| solve(black_box(&f), &grid, 1e-3, &penalty).unwrap())
        });
    }
    group.finish();
}

fn barycentric(c: &mut Criterion) {
    let (grid, f, _) = noisy_f1(501);
    let points: Vec<f64> = (0..1000).map(|i| -3.0 + 6.0 * i as f64 / 1000.0).collect();
    c.bench_function("barycentric/501x1000", |b| {
        b.iter(|| evaluate_barycentric(black_box(&f), &grid, 0.1, 2.0, &points).unwrap())
    });
}

fn selection(c: &mut Criterion) {
    let (grid, f, eps) = noisy_f1(501);
    let penalty = laplace_penalty(grid.max_degree(), 1.0).unwrap();
    let s = ParameterGrid::default();
    let mut group = c.benchmark_group("select/501");
    group.bench_function("morozov", |b| {
        b.iter(|| select_morozov(&f, &grid, &penalty, &s, eps, MorozovOptions { refine: true }).unwrap())
    });
    group.bench_function("lcurve", |b| b.iter(|| select_lcurve(&f, &grid, &penalty, &s).unwrap()));
    group.bench_function("gcv", |b| b.iter(|| select_gcv(&f, &grid, &penalty, &s).unwrap()));
    group.finish();
}

fn full_sweep(c: &mut Criterion) {
    let mut config = SweepConfig::new(GalleryFunction::F1, 101);
    config.snr_levels = vec![10.0, 30.0, 50.0, 70.0];
    config.eval_points = 1000;
    config.seed = 7;
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("f1/101/4 levels", |b| b.iter(|| sweep(black_box(&config)).unwrap()));
    group.finish();
}

criterion_group!(benches, fit, barycentric, selection, full_sweep);
criterion_main!(benches);
