use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use curvaspec::oracle::{compare_spectra, radial_eigenvalues, CompareOptions};
use curvaspec::{Curvature, RadialGrid};
use curvaspec_bench::curvatures;

fn eigenvalues(c: &mut Criterion) {
    let kappa = Curvature::new(-0.1).unwrap();
    let mut group = c.benchmark_group("radial_eigenvalues");
    group.sample_size(20);
    for points in [500, 2000, 8000] {
        let grid = RadialGrid::new(kappa, 10.0, points).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(points), &grid, |b, grid| {
            b.iter(|| radial_eigenvalues(kappa, 1, 4, grid))
        });
    }
    group.finish();
}

fn comparison(c: &mut Criterion) {
    let mut group = c.benchmark_group("compare_spectra");
    group.sample_size(10);
    for (name, kappa) in curvatures() {
        group.bench_function(name, |b| b.iter(|| compare_spectra(kappa, 0, 3, &CompareOptions::default())));
    }
    group.finish();
}

criterion_group!(benches, eigenvalues, comparison);
criterion_main!(benches);
