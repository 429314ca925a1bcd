use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fourfold_bench::{film, wall_profile};
use fourfold_core::energy::{FilmEnergy, WallEnergy};
use fourfold_core::nonlocal::{half_laplacian_quadrature, QuadratureKernel, SpectralPlan1D, StrayFieldPlan2D};
use fourfold_core::{magnetization_of, WallProblem};

fn half_laplacian(c: &mut Criterion) {
    let mut group = c.benchmark_group("half_laplacian");
    for n in [1024, 8192, 65536] {
        let t = wall_profile(n, n as f64 / 20.0);
        let u: Vec<f64> = t.values().iter().map(|v| (v + 0.25 * std::f64::consts::PI).sin() - std::f64::consts::FRAC_1_SQRT_2).collect();
        let plan = SpectralPlan1D::new(*t.grid());
        let mut out = vec![0.0; n];
        let mut scratch = plan.make_scratch();
        group.bench_with_input(BenchmarkId::new("spectral", n), &n, |b, _| {
            b.iter(|| plan.apply_into(black_box(&u), &mut out, &mut scratch).unwrap())
        });
    }
    for n in [1024, 2048] {
        let t = wall_profile(n, n as f64 / 20.0);
        let u: Vec<f64> = t.values().iter().map(|v| (v + 0.25 * std::f64::consts::PI).sin()).collect();
        group.bench_with_input(BenchmarkId::new("quadrature", n), &n, |b, _| {
            b.iter(|| half_laplacian_quadrature(black_box(&u), t.grid(), QuadratureKernel::Periodic).unwrap())
        });
    }
    group.finish();
}

fn wall_residual(c: &mut Criterion) {
    let t = wall_profile(8192, 400.0);
    let mut e = WallEnergy::new(WallProblem::ninety(5.0, *t.grid()).unwrap());
    let mut r = vec![0.0; 8192];
    c.bench_function("wall_energy_and_residual_8192", |b| b.iter(|| e.energy_and_residual(black_box(&t), &mut r).unwrap()));
}

fn stray_field(c: &mut Criterion) {
    let mut group = c.benchmark_group("stray_field");
    group.sample_size(20);
    for (nx, ny) in [(32, 64), (128, 256)] {
        let t = film(nx, ny, 0.25);
        let plan = StrayFieldPlan2D::new(*t.grid());
        let m = magnetization_of(&t);
        let mut scratch = plan.make_scratch();
        group.bench_with_input(BenchmarkId::new("evaluate", format!("{nx}x{ny}")), &nx, |b, _| {
            b.iter(|| plan.evaluate(black_box(&m), 5.0, &mut scratch).unwrap())
        });
        let mut e = FilmEnergy::new(*t.grid(), 5.0);
        group.bench_with_input(BenchmarkId::new("energy_and_field", format!("{nx}x{ny}")), &nx, |b, _| {
            b.iter(|| e.energy_and_field(black_box(&t)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, half_laplacian, wall_residual, stray_field);
criterion_main!(benches);
