use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use flagwork::bkn::bkn_matrix;
use flagwork::curvature::{check_ks_positive, grassmannian_curvature, sample_nakano_positive};
use flagwork::omega::hodge_numbers;
use flagwork::{bott_cohomology, FlagType, Weight};

fn bott(c: &mut Criterion) {
    let a = Weight(vec![7, -3, 2, 0, -5, 4]);
    c.bench_function("bott_rank6", |b| b.iter(|| bott_cohomology(black_box(&a), 6).unwrap()));
}

fn hodge(c: &mut Criterion) {
    let s = FlagType::complete(5).unwrap();
    c.bench_function("hodge_full_flag_c5", |b| b.iter(|| hodge_numbers(black_box(&s))));
}

fn bkn(c: &mut Criterion) {
    let r = sample_nakano_positive(4, 3, 1);
    c.bench_function("bkn_matrix_n4_r3_p4_q2", |b| b.iter(|| bkn_matrix(black_box(&r), 4, 2).unwrap().eigenvalues()));
}

fn positivity(c: &mut Criterion) {
    let r = grassmannian_curvature(5, 2).unwrap();
    c.bench_function("check_ks_positive_gr52_100", |b| {
        b.iter(|| check_ks_positive(black_box(&r), 1, 2, 100, 1e-9, 0).unwrap())
    });
}

criterion_group!(benches, bott, hodge, bkn, positivity);
criterion_main!(benches);
