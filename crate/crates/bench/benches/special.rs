use criterion::{black_box, criterion_group, criterion_main, Criterion};
use curvaspec::spectrum::{gauss_2f1_polynomial, kummer_m, radial_polynomial, wavefunction, Eigenstate};
use curvaspec_bench::{curvatures, level};

fn series(c: &mut Criterion) {
    c.bench_function("kummer_m", |b| b.iter(|| kummer_m(black_box(-6.0), 2.0, black_box(3.5))));
    c.bench_function("gauss_2f1", |b| {
        b.iter(|| gauss_2f1_polynomial(black_box(-6.0), 7.5, 2.0, black_box(-0.4)))
    });
}

fn levels(c: &mut Criterion) {
    let mut group = c.benchmark_group("radial_polynomial");
    for (name, kappa) in curvatures() {
        let lv = level(kappa);
        group.bench_function(name, |b| b.iter(|| radial_polynomial(black_box(&lv))));
    }
    group.finish();

    let mut group = c.benchmark_group("wavefunction");
    for (name, kappa) in curvatures() {
        let lv = level(kappa);
        group.bench_function(name, |b| b.iter(|| wavefunction(black_box(&lv), 0.7, 0.3, false)));
    }
    group.finish();

    let mut group = c.benchmark_group("normalize");
    group.sample_size(20);
    for (name, kappa) in curvatures() {
        let lv = level(kappa);
        group.bench_function(name, |b| b.iter(|| Eigenstate::normalized(black_box(lv))));
    }
    group.finish();
}

criterion_group!(benches, series, levels);
criterion_main!(benches);
