use criterion::{black_box, criterion_group, criterion_main, Criterion};
use wlpcheck::hilbert::{aci_first_difference, c_sequence, froberg_table};
use wlpcheck::wlp::prop312_polynomial;

fn first_difference(c: &mut Criterion) {
    c.bench_function("first_difference n=159 d=16", |b| {
        b.iter(|| aci_first_difference(black_box(159), black_box(16)).unwrap())
    });
}

fn c_terms(c: &mut Criterion) {
    c.bench_function("c_n n=400", |b| b.iter(|| c_sequence(black_box(400)).unwrap()));
}

fn generic_series(c: &mut Criterion) {
    // Memoized after the first call, so this measures the cached lookup path.
    c.bench_function("froberg Q(8,4) to degree 17", |b| {
        b.iter(|| froberg_table(16, 17, 4, black_box(17)).unwrap())
    });
}

fn residue_polynomial(c: &mut Criterion) {
    c.bench_function("E polynomial n=8 q=7", |b| {
        b.iter(|| prop312_polynomial(black_box(8), black_box(7)).unwrap())
    });
}

criterion_group!(benches, first_difference, c_terms, generic_series, residue_polynomial);
criterion_main!(benches);
