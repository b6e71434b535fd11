//! Cost of the oracle side: form reduction, composition, and full group
//! structure for representative definite and indefinite discriminants.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use quadrank::classgroup::Oracle;
use quadrank::forms::{compose, QuadForm};

const D: i64 = -95_827; // = -(79 * 1213), fundamental

fn bench_forms(c: &mut Criterion) {
    let g1 = QuadForm::new(11, 15, 2183);
    let g2 = QuadForm::new(13, 3, 1843);
    assert_eq!(g1.discriminant(), D as i128);
    assert_eq!(g2.discriminant(), D as i128);
    let unreduced = QuadForm::new(2183, 13_083, 19_613); // same class as g1, far from reduced
    assert_eq!(unreduced.discriminant(), D as i128);
    c.bench_function("reduce definite form", |b| {
        b.iter(|| black_box(unreduced).reduce().unwrap())
    });
    c.bench_function("compose definite forms", |b| {
        b.iter(|| compose(black_box(&g1), black_box(&g2)).unwrap())
    });
}

fn bench_groups(c: &mut Criterion) {
    let oracle = Oracle::new(1_000_000);
    c.bench_function("narrow group of definite D ~ 1e5", |b| {
        b.iter(|| oracle.narrow_class_group(black_box(D)).unwrap().order())
    });
    c.bench_function("narrow+ordinary of indefinite D ~ 1e5", |b| {
        b.iter(|| {
            let (n, o) = oracle.narrow_and_ordinary(black_box(95_677)).unwrap();
            (n.order(), o.order())
        })
    });
}

criterion_group!(benches, bench_forms, bench_groups);
criterion_main!(benches);
