//! Throughput of the formula-side routes: factorization, Redei 4-ranks,
//! continued fractions, and whole-range scans without the oracle.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use quadrank::arith::Sieve;
use quadrank::pell::{cf_sqrt, in_e};
use quadrank::quadratic::{in_n, rk4_narrow};
use quadrank::scan::{scan, ScanOptions};

fn bench_redei(c: &mut Criterion) {
    c.bench_function("rk4_narrow of disc(+-9699690ish)", |b| {
        // 3 * 5 * 7 * 11 * 13 * 17 * 19 = 4849845, t = 7 or 8
        b.iter(|| {
            let d = black_box(4_849_845i64);
            (rk4_narrow(d).unwrap(), rk4_narrow(-4 * d).unwrap())
        })
    });
}

fn bench_cf(c: &mut Criterion) {
    c.bench_function("cf_sqrt(999999)", |b| {
        b.iter(|| cf_sqrt(black_box(999_999)).unwrap().period)
    });
    c.bench_function("in_e(994009ish range)", |b| {
        b.iter(|| {
            let mut hits = 0u32;
            for n in 994_001u64..994_101 {
                if let Ok(true) = in_e(black_box(n)) {
                    hits += 1;
                }
            }
            hits
        })
    });
}

fn bench_scan(c: &mut Criterion) {
    let sieve = Sieve::new(20_000).unwrap();
    c.bench_function("scan 3<n<=20000 without oracle", |b| {
        b.iter(|| scan(&sieve, 20_000, &ScanOptions::default()).unwrap().len())
    });
    c.bench_function("in_n over 3<n<=20000", |b| {
        b.iter(|| sieve.odd_squarefree().filter(in_n).count())
    });
}

criterion_group!(benches, bench_redei, bench_cf, bench_scan);
criterion_main!(benches);
