use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use polarize_core::cones::minimal_extremal_face;
use polarize_core::exactalg::{char_poly, int, roots_with_multiplicity, spectral_projector};
use polarize_core::nslattice::example_ex1_report;
use polarize_core::singularities::ex_xu_verdict;
use polarize_core::{build_cone, decide_polarization, psd_cone_oracle, ConeMap, QMatrix, QPoly, Rat};

fn ns_matrix() -> QMatrix {
    QMatrix::from_ints(&[[1, 2, 1], [-5, -4, 1], [25, -10, 1]])
}

fn exact(c: &mut Criterion) {
    let m = ns_matrix();
    c.bench_function("char_poly 3x3", |b| b.iter(|| char_poly(black_box(&m))));
    let quintic = QPoly::from_ints(&[-1, -1, 0, 0, 0, 1]);
    c.bench_function("roots t^5 - t - 1", |b| b.iter(|| roots_with_multiplicity(black_box(&quintic))));
    c.bench_function("spectral projector q = 6", |b| b.iter(|| spectral_projector(black_box(&m), &int(6))));
}

fn cones(c: &mut Criterion) {
    let v = |xs: &[i64]| xs.iter().map(|&x| int(x)).collect::<Vec<Rat>>();
    let gens = vec![
        v(&[1, 0, 0, 1]),
        v(&[0, 1, 0, 1]),
        v(&[-1, 0, 0, 1]),
        v(&[0, -1, 0, 1]),
        v(&[0, 0, 1, 1]),
        v(&[0, 0, -1, 1]),
        v(&[1, 1, 1, 2]),
    ];
    c.bench_function("build_cone 4d, 7 generators", |b| b.iter(|| build_cone(black_box(&gens))));
    let cone = build_cone(&gens).unwrap();
    let sub = vec![v(&[1, 1, 0, 2])];
    c.bench_function("minimal_extremal_face", |b| b.iter(|| minimal_extremal_face(&cone, black_box(&sub))));
}

fn decisions(c: &mut Criterion) {
    let cm = ConeMap::oracle(ns_matrix(), Arc::new(psd_cone_oracle(2))).unwrap().verified().unwrap();
    c.bench_function("decide_polarization psd", |b| b.iter(|| decide_polarization(black_box(&cm))));
    c.bench_function("ex1 report", |b| b.iter(example_ex1_report));
    c.bench_function("ex-xu 4-3", |b| b.iter(|| ex_xu_verdict(4, 3, 2, black_box(&[1, 1, 1]))));
}

criterion_group!(benches, exact, cones, decisions);
criterion_main!(benches);
