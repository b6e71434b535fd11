//! Invariants of the biquadratic field K_n = Q(sqrt(n), sqrt(-n)): the
//! 2-rank of its class group computed two independent ways, the correction
//! terms delta(n) and epsilon(n), the 4-rank formula with its validity
//! bounds, and the 2-adic class-number identity used as the end-to-end
//! check.

use crate::arith::FactoredOddSquarefree;
use crate::error::{Error, Result};
use crate::gaussian::{gaussian_divisors_with_limit, DEFAULT_DIVISOR_LOG2_LIMIT};
use crate::pell::in_e_of;

/// rk2(Cl(K_n)) in closed form: 2 omega1 + omega3 - 1, minus one more when
/// some prime divisor is 5 mod 8.
pub fn rk2_biquad(f: &FactoredOddSquarefree) -> u32 {
    let base = 2 * f.omega1 + f.omega3;
    if f.has_p5mod8 {
        base - 2
    } else {
        base - 1
    }
}

/// F(n): the number of Gaussian divisors of n congruent to +-1 mod 4, by
/// direct enumeration. Must equal 2^(2 omega1 + omega3 + 1) (or one power
/// of two less when a prime 5 mod 8 divides n) and 4 * 2^rk2_biquad.
pub fn count_f(f: &FactoredOddSquarefree) -> Result<u64> {
    count_f_with_limit(f, DEFAULT_DIVISOR_LOG2_LIMIT)
}

/// As [`count_f`] with an explicit enumeration cap.
pub fn count_f_with_limit(f: &FactoredOddSquarefree, log2_limit: u32) -> Result<u64> {
    let divisors = gaussian_divisors_with_limit(f, log2_limit)?;
    Ok(divisors.iter().filter(|b| b.is_pm1_mod4()).count() as u64)
}

/// The closed form for F(n).
pub fn count_f_closed_form(f: &FactoredOddSquarefree) -> u64 {
    let exp = 2 * f.omega1 + f.omega3 + if f.has_p5mod8 { 0 } else { 1 };
    1u64 << exp
}

/// delta(n), the four-case correction keyed on (omega3 = 0?) x
/// (exists p | n with p = 5 mod 8?).
pub fn delta(f: &FactoredOddSquarefree) -> i32 {
    match (f.omega3 == 0, f.has_p5mod8) {
        (true, true) => 1,
        (true, false) => 0,
        (false, true) => 0,
        (false, false) => -1,
    }
}

/// epsilon(n) = 1 iff n lies in the exceptional set.
pub fn epsilon(f: &FactoredOddSquarefree) -> Result<i32> {
    Ok(if in_e_of(f)? { 1 } else { 0 })
}

/// The 4-rank formula omega3 + delta + epsilon - 1, applicable only when
/// the caller has established the vanishing-4-ranks hypothesis. The raw
/// value is returned unclamped; a negative value is an anomaly the caller
/// must surface, never hide.
pub fn rk4_biquad(f: &FactoredOddSquarefree, hypothesis_holds: bool) -> Result<Option<i64>> {
    if !hypothesis_holds {
        return Ok(None);
    }
    let value = f.omega3 as i64 + delta(f) as i64 + epsilon(f)? as i64 - 1;
    Ok(Some(value))
}

/// Unconditional bounds (max(omega3 - 2, 0), omega3 + 1) on the 4-rank
/// under the hypothesis.
pub fn rk4_bounds(f: &FactoredOddSquarefree) -> (u32, u32) {
    (f.omega3.saturating_sub(2), f.omega3 + 1)
}

/// Both sides of the 2-adic class-number identity for one n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub n: u64,
    pub v2_h_plus: u32,
    pub v2_h_minus: u32,
    pub log2_q: u32,
    pub rk2_k: u32,
    pub rk4_k: i64,
    /// v2(h(n)) + v2(h(-n)) + log2 Q(n) - 1.
    pub lhs: i64,
    /// rk2(Cl(K_n)) + rk4(Cl(K_n)).
    pub rhs: i64,
    pub pass: bool,
}

fn v2(mut x: u64) -> u32 {
    debug_assert!(x > 0);
    let mut v = 0;
    while x % 2 == 0 {
        x /= 2;
        v += 1;
    }
    v
}

/// Verify v2(h(n)) + v2(h(-n)) + log2 Q(n) - 1 = rk2(Cl(K_n)) + rk4(Cl(K_n))
/// for n in N, with the class numbers supplied by the oracle.
pub fn check_final_identity(
    f: &FactoredOddSquarefree,
    n_in_big_n: bool,
    h_plus: u64,
    h_minus: u64,
) -> Result<CheckReport> {
    if !n_in_big_n {
        return Err(Error::HypothesisNotChecked(f.n));
    }
    let in_e = in_e_of(f)?;
    let log2_q = if in_e { 1 } else { 0 };
    let rk2_k = rk2_biquad(f);
    let rk4_k = rk4_biquad(f, true)?.expect("hypothesis holds");
    let v2_h_plus = v2(h_plus);
    let v2_h_minus = v2(h_minus);
    let lhs = v2_h_plus as i64 + v2_h_minus as i64 + log2_q as i64 - 1;
    let rhs = rk2_k as i64 + rk4_k;
    Ok(CheckReport {
        n: f.n,
        v2_h_plus,
        v2_h_minus,
        log2_q,
        rk2_k,
        rk4_k,
        lhs,
        rhs,
        pass: lhs == rhs,
    })
}

/// The headline per-n bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiquadInvariants {
    pub n: u64,
    pub rk2_k: u32,
    pub f_count: u64,
    pub delta: i32,
    pub epsilon: i32,
    /// Hasse unit index, 1 + epsilon.
    pub q: u8,
    /// Present iff the hypothesis flag was supplied as true; raw, unclamped.
    pub rk4_k: Option<i64>,
    /// (max(omega3 - 2, 0), omega3 + 1).
    pub bounds: (u32, u32),
}

impl BiquadInvariants {
    pub fn compute(f: &FactoredOddSquarefree, hypothesis_holds: bool) -> Result<Self> {
        let eps = epsilon(f)?;
        Ok(Self {
            n: f.n,
            rk2_k: rk2_biquad(f),
            f_count: count_f(f)?,
            delta: delta(f),
            epsilon: eps,
            q: 1 + eps as u8,
            rk4_k: rk4_biquad(f, hypothesis_holds)?,
            bounds: rk4_bounds(f),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factor_odd_squarefree, Sieve};

    fn f(n: u64) -> FactoredOddSquarefree {
        factor_odd_squarefree(n).unwrap()
    }

    #[test]
    fn rk2_biquad_examples() {
        assert_eq!(rk2_biquad(&f(5)), 0);
        assert_eq!(rk2_biquad(&f(21)), 1);
        assert_eq!(rk2_biquad(&f(105)), 2);
    }

    #[test]
    fn count_f_examples() {
        assert_eq!(count_f(&f(5)).unwrap(), 4);
        assert_eq!(count_f(&f(17)).unwrap(), 8);
        assert_eq!(count_f(&f(13)).unwrap(), 4);
    }

    #[test]
    fn count_f_identity_small_range() {
        for fact in Sieve::new(2000).unwrap().odd_squarefree() {
            let enumerated = count_f(&fact).unwrap();
            assert_eq!(enumerated, count_f_closed_form(&fact), "n = {}", fact.n);
            assert_eq!(enumerated, 4 * (1u64 << rk2_biquad(&fact)), "n = {}", fact.n);
        }
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&f(5)), 1);
        assert_eq!(delta(&f(21)), -1);
        assert_eq!(delta(&f(105)), 0);
        assert_eq!(delta(&f(17)), 0); // omega3 = 0, no p = 5 mod 8
    }

    #[test]
    fn rk4_examples() {
        assert_eq!(rk4_biquad(&f(5), true).unwrap(), Some(0));
        assert_eq!(rk4_biquad(&f(105), true).unwrap(), Some(1));
        assert_eq!(rk4_biquad(&f(21), true).unwrap(), Some(0));
        assert_eq!(rk4_biquad(&f(21), false).unwrap(), None);
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(rk4_bounds(&f(105)), (0, 3));
        assert_eq!(rk4_bounds(&f(5)), (0, 1));
        assert_eq!(rk4_bounds(&f(3 * 7 * 11 * 19)), (2, 5));
    }

    #[test]
    fn final_identity_examples() {
        // class numbers h(n), h(-n) frozen from the oracle
        let r = check_final_identity(&f(105), true, 2, 8).unwrap();
        assert!(r.pass);
        assert_eq!((r.lhs, r.rhs), (3, 3));

        let r = check_final_identity(&f(21), true, 1, 4).unwrap();
        assert!(r.pass);
        assert_eq!((r.lhs, r.rhs), (1, 1));

        let r = check_final_identity(&f(5), true, 1, 2).unwrap();
        assert!(r.pass);
        assert_eq!((r.lhs, r.rhs), (0, 0));

        assert!(matches!(
            check_final_identity(&f(5), false, 1, 2),
            Err(Error::HypothesisNotChecked(5))
        ));
    }

    #[test]
    fn rk4_zero_when_rk2_zero() {
        // rank monotonicity sanity on a small range
        for fact in Sieve::new(500).unwrap().odd_squarefree() {
            if fact.n <= 3 || rk2_biquad(&fact) != 0 {
                continue;
            }
            if let Some(rk4) = rk4_biquad(&fact, true).unwrap() {
                assert_eq!(rk4, 0, "n = {}", fact.n);
            }
        }
    }

    #[test]
    fn invariants_bundle_consistent() {
        for fact in Sieve::new(800).unwrap().odd_squarefree() {
            if fact.n <= 3 {
                continue;
            }
            let b = BiquadInvariants::compute(&fact, true).unwrap();
            assert_eq!(b.f_count, 4 * (1u64 << b.rk2_k));
            assert_eq!(b.q, 1 + b.epsilon as u8);
            let rk4 = b.rk4_k.unwrap();
            let (lo, hi) = b.bounds;
            // the bounds hold whenever the formula value is a true 4-rank;
            // off-hypothesis values may escape, so only sanity-check range
            assert!(rk4 >= -2 && rk4 <= hi as i64 + 1, "n = {}", fact.n);
            assert!(lo <= hi);
        }
    }
}
