//! Cross-module consistency: the closed-form routes (genus theory, Redei
//! matrices, Pell/continued fractions) against the form class-group oracle,
//! plus property tests of the algebraic laws.

use proptest::prelude::*;

use quadrank::arith::{factor_odd_squarefree, kronecker, Sieve};
use quadrank::classgroup::Oracle;
use quadrank::pell::{cf_sqrt, norm_fundamental_unit};
use quadrank::quadratic::{
    fundamental_discriminants_of, hypothesis_ordinary, in_n, index_i, rk2_narrow, rk4_narrow,
};
use quadrank::scan::{scan_to_csv, ScanOptions};

fn oracle() -> Oracle {
    Oracle::new(10_000)
}

/// Narrow order = ordinary order times the unit-norm index, and the index
/// is 2 exactly when the fundamental unit has norm +1.
#[test]
fn narrow_to_ordinary_index_matches_pell() {
    let sieve = Sieve::new(2500).unwrap();
    let oracle = oracle();
    for f in sieve.odd_squarefree() {
        let (dp, _) = fundamental_discriminants_of(&f);
        let (narrow, ordinary) = oracle.narrow_and_ordinary(dp).unwrap();
        let idx = index_i(&f) as u64;
        assert_eq!(
            narrow.order(),
            ordinary.order() * idx,
            "index relation fails for n = {}",
            f.n
        );
        let norm = norm_fundamental_unit(f.n).unwrap();
        assert_eq!(idx == 2, norm == 1, "index vs unit norm for n = {}", f.n);
    }
}

/// With index 2, the 2-rank drops from narrow to ordinary exactly when a
/// prime 3 mod 4 divides the discriminant.
#[test]
fn rk2_drop_iff_prime_3_mod_4() {
    let sieve = Sieve::new(2500).unwrap();
    let oracle = oracle();
    for f in sieve.odd_squarefree() {
        if index_i(&f) != 2 {
            continue;
        }
        let (dp, _) = fundamental_discriminants_of(&f);
        let (narrow, ordinary) = oracle.narrow_and_ordinary(dp).unwrap();
        let dropped = ordinary.rk2k(1) + 1 == narrow.rk2k(1);
        assert_eq!(
            dropped,
            f.omega3 >= 1,
            "drop predicate fails for n = {} (narrow {:?}, ordinary {:?})",
            f.n,
            narrow.invariant_factors,
            ordinary.invariant_factors
        );
        if !dropped {
            assert_eq!(ordinary.rk2k(1), narrow.rk2k(1));
        }
    }
}

/// Quotient monotonicity: ordinary 4-rank never exceeds the narrow one;
/// membership in N therefore implies the ordinary hypothesis.
#[test]
fn ordinary_rk4_below_narrow_rk4() {
    let sieve = Sieve::new(2500).unwrap();
    let oracle = oracle();
    for f in sieve.odd_squarefree() {
        let (dp, _) = fundamental_discriminants_of(&f);
        let (narrow, ordinary) = oracle.narrow_and_ordinary(dp).unwrap();
        assert!(
            ordinary.rk2k(2) <= narrow.rk2k(2),
            "monotonicity fails at D = {dp}"
        );
        if in_n(&f) {
            assert!(
                hypothesis_ordinary(&f, &oracle).unwrap(),
                "n = {} is in N but fails the ordinary hypothesis",
                f.n
            );
        }
    }
}

#[test]
fn hypothesis_ordinary_examples() {
    let oracle = oracle();
    let hyp = |n: u64| hypothesis_ordinary(&factor_odd_squarefree(n).unwrap(), &oracle).unwrap();
    assert!(hyp(21));
    assert!(!hyp(39));
    assert!(hyp(105));
}

/// The Redei route and the oracle agree on the frozen examples.
#[test]
fn redei_examples_match_oracle() {
    let oracle = oracle();
    for (d, expected) in [(-20i64, 0u32), (-39, 1), (105, 0), (136, 1), (-84, 0)] {
        assert_eq!(rk4_narrow(d).unwrap(), expected, "Redei at D = {d}");
        assert_eq!(
            oracle.narrow_class_group(d).unwrap().rk2k(2),
            expected,
            "oracle at D = {d}"
        );
    }
}

/// Genus theory against the oracle on a modest range (the acceptance suite
/// rechecks this at full scale).
#[test]
fn genus_theory_matches_oracle_small() {
    let sieve = Sieve::new(2000).unwrap();
    let oracle = oracle();
    for f in sieve.odd_squarefree() {
        let (dp, dm) = fundamental_discriminants_of(&f);
        let narrow_m = oracle.narrow_class_group(dm).unwrap();
        assert_eq!(rk2_narrow(dm).unwrap(), narrow_m.rk2k(1), "n = {}", f.n);
        assert_eq!(rk4_narrow(dm).unwrap(), narrow_m.rk2k(2), "n = {}", f.n);
        let narrow_p = oracle.narrow_class_group(dp).unwrap();
        assert_eq!(rk2_narrow(dp).unwrap(), narrow_p.rk2k(1), "n = {}", f.n);
        assert_eq!(rk4_narrow(dp).unwrap(), narrow_p.rk2k(2), "n = {}", f.n);
    }
}

/// Scan output is byte-identical whatever the rayon pool size.
#[test]
fn scan_deterministic_across_worker_counts() {
    let sieve = Sieve::new(4000).unwrap();
    let opts = ScanOptions {
        only_n: false,
        oracle_max: Some(500),
    };
    let render = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let mut buf = Vec::new();
            scan_to_csv(&sieve, 4000, &opts, &mut buf).unwrap();
            buf
        })
    };
    let one = render(1);
    let four = render(4);
    let seven = render(7);
    assert_eq!(one, four);
    assert_eq!(one, seven);
}

proptest! {
    /// Kronecker multiplicativity in the numerator.
    #[test]
    fn kronecker_multiplicative(a in -300i64..300, b in -300i64..300, m in -300i64..300) {
        prop_assert_eq!(kronecker(a * b, m), kronecker(a, m) * kronecker(b, m));
    }

    /// Kronecker multiplicativity in the denominator.
    #[test]
    fn kronecker_multiplicative_denominator(a in -300i64..300, m1 in -120i64..120, m2 in -120i64..120) {
        prop_assert_eq!(kronecker(a, m1 * m2), kronecker(a, m1) * kronecker(a, m2));
    }

    /// Factored invariants on arbitrary inputs.
    #[test]
    fn factorization_invariants(n in 2u64..200_000) {
        if let Ok(f) = factor_odd_squarefree(n) {
            prop_assert_eq!(f.primes.iter().product::<u64>(), n);
            prop_assert_eq!(f.omega, f.omega1 + f.omega3);
            prop_assert!(f.primes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    /// Continued-fraction state invariants for arbitrary non-squares.
    #[test]
    fn cf_q_values_bounded(n in 2u64..500_000) {
        if let Ok(d) = cf_sqrt(n) {
            let bound = 2.0 * (n as f64).sqrt();
            prop_assert!(d.q_values.iter().all(|&(_, q)| q > 0 && (q as f64) < bound));
            prop_assert_eq!(d.unit_norm == 1, d.period % 2 == 0);
            prop_assert_eq!(d.partial_quotients.len(), d.period as usize + 1);
            // the closing quotient is twice the leading one
            prop_assert_eq!(
                *d.partial_quotients.last().unwrap(),
                2 * d.partial_quotients[0]
            );
        }
    }

    /// Composition laws on randomly generated forms of a shared
    /// discriminant.
    #[test]
    fn composition_laws_on_random_forms(
        n in 5u64..800,
        a1 in 1i64..60, b1 in -60i64..60,
        a2 in 1i64..60, b2 in -60i64..60,
    ) {
        use quadrank::forms::{compose, QuadForm};
        let Ok(f) = factor_odd_squarefree(n) else { return Ok(()) };
        let (_, dm) = fundamental_discriminants_of(&f);
        let make = |a: i64, b: i64| -> Option<QuadForm> {
            let b = if (b - dm).rem_euclid(2) == 0 { b } else { b + 1 };
            let num = b as i128 * b as i128 - dm as i128;
            (num % (4 * a as i128) == 0).then(|| QuadForm::new(a, b, (num / (4 * a as i128)) as i64))
        };
        let (Some(g1), Some(g2)) = (make(a1, b1), make(a2, b2)) else { return Ok(()) };
        let prod = compose(&g1, &g2).unwrap();
        prop_assert_eq!(prod.discriminant(), dm as i128);
        prop_assert!(prod.is_reduced());
        prop_assert_eq!(&prod, &compose(&g2, &g1).unwrap());
        // identity law and inverse law
        let e = QuadForm::identity(dm);
        prop_assert_eq!(&compose(&g1, &e).unwrap(), &g1.reduce().unwrap());
        prop_assert_eq!(compose(&g1, &g1.inverse()).unwrap(), e.reduce().unwrap());
        // associativity with the composite
        let left = compose(&compose(&g1, &g2).unwrap(), &g1).unwrap();
        let right = compose(&g1, &compose(&g2, &g1).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}
