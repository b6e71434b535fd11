//! Gaussian integers and enumeration of the divisors of an odd squarefree n
//! in Z[i].
//!
//! A prime p = 1 mod 4 splits as (a+bi)(a-bi), a prime p = 3 mod 4 stays
//! inert, so n has exactly 2^(2*omega1 + omega3 + 2) divisors in Z[i] once
//! all four associates of each divisor class are counted.

use std::ops::Mul;

use crate::arith::{two_squares, FactoredOddSquarefree};
use crate::error::{Error, Result};

/// Default cap on log2(divisor count) for [`gaussian_divisors`].
pub const DEFAULT_DIVISOR_LOG2_LIMIT: u32 = 24;

/// An element re + im*i of Z[i].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussianInteger {
    pub re: i64,
    pub im: i64,
}

impl GaussianInteger {
    pub const ONE: Self = Self { re: 1, im: 0 };

    pub fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub fn norm(self) -> i128 {
        self.re as i128 * self.re as i128 + self.im as i128 * self.im as i128
    }

    /// Exact divisibility test in Z[i]: self | other.
    pub fn divides(self, other: Self) -> bool {
        let n = self.norm();
        if n == 0 {
            return other.re == 0 && other.im == 0;
        }
        // other * conj(self) must be divisible by norm(self)
        let re = other.re as i128 * self.re as i128 + other.im as i128 * self.im as i128;
        let im = other.im as i128 * self.re as i128 - other.re as i128 * self.im as i128;
        re % n == 0 && im % n == 0
    }

    /// True iff self = +1 or -1 modulo 4Z[i], i.e. re = +-1 mod 4 and
    /// im = 0 mod 4.
    pub fn is_pm1_mod4(self) -> bool {
        self.im.rem_euclid(4) == 0 && matches!(self.re.rem_euclid(4), 1 | 3)
    }
}

impl Mul for GaussianInteger {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        let re = self.re as i128 * other.re as i128 - self.im as i128 * other.im as i128;
        let im = self.re as i128 * other.im as i128 + self.im as i128 * other.re as i128;
        debug_assert!(re.abs() <= i64::MAX as i128 && im.abs() <= i64::MAX as i128);
        Self {
            re: re as i64,
            im: im as i64,
        }
    }
}

/// All divisors of n in Z[i], associates included; exactly
/// 2^(2*omega1 + omega3 + 2) elements.
pub fn gaussian_divisors(f: &FactoredOddSquarefree) -> Result<Vec<GaussianInteger>> {
    gaussian_divisors_with_limit(f, DEFAULT_DIVISOR_LOG2_LIMIT)
}

/// As [`gaussian_divisors`] with an explicit cap on log2 of the output size.
pub fn gaussian_divisors_with_limit(
    f: &FactoredOddSquarefree,
    log2_limit: u32,
) -> Result<Vec<GaussianInteger>> {
    let log2_count = 2 * f.omega1 + f.omega3 + 2;
    if log2_count > log2_limit {
        return Err(Error::ResourceLimit(format!(
            "2^{log2_count} Gaussian divisors of {} exceed the 2^{log2_limit} cap",
            f.n
        )));
    }
    let mut divs = vec![GaussianInteger::ONE];
    for &p in &f.primes {
        if p % 4 == 1 {
            let (a, b) = two_squares(p)?;
            let pi = GaussianInteger::new(a as i64, b as i64);
            let pibar = GaussianInteger::new(a as i64, -(b as i64));
            let whole = GaussianInteger::new(p as i64, 0);
            divs = divs
                .iter()
                .flat_map(|&d| {
                    [d, d * pi, d * pibar, d * whole]
                })
                .collect();
        } else {
            let whole = GaussianInteger::new(p as i64, 0);
            divs = divs.iter().flat_map(|&d| [d, d * whole]).collect();
        }
    }
    let units = [
        GaussianInteger::new(1, 0),
        GaussianInteger::new(0, 1),
        GaussianInteger::new(-1, 0),
        GaussianInteger::new(0, -1),
    ];
    let out: Vec<GaussianInteger> = divs
        .iter()
        .flat_map(|&d| units.iter().map(move |&u| d * u))
        .collect();
    debug_assert_eq!(out.len(), 1usize << log2_count);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factor_odd_squarefree;
    use std::collections::HashSet;

    /// Brute-force divisor enumeration: every beta with norm dividing n^2
    /// and beta | n exactly.
    fn divisors_brute(n: i64) -> HashSet<GaussianInteger> {
        let whole = GaussianInteger::new(n, 0);
        let mut out = HashSet::new();
        for re in -n..=n {
            for im in -n..=n {
                let b = GaussianInteger::new(re, im);
                if b.norm() != 0 && b.divides(whole) {
                    out.insert(b);
                }
            }
        }
        out
    }

    #[test]
    fn divisor_counts_match_brute_force() {
        for n in [5u64, 3, 15, 21, 13, 33] {
            let f = factor_odd_squarefree(n).unwrap();
            let divs = gaussian_divisors(&f).unwrap();
            let set: HashSet<_> = divs.iter().copied().collect();
            assert_eq!(set.len(), divs.len(), "duplicates for n={n}");
            assert_eq!(set, divisors_brute(n as i64), "divisor set for n={n}");
            assert_eq!(divs.len() as u64, 1 << (2 * f.omega1 + f.omega3 + 2));
        }
    }

    #[test]
    fn divisor_count_examples() {
        let count = |n: u64| gaussian_divisors(&factor_odd_squarefree(n).unwrap()).unwrap().len();
        assert_eq!(count(5), 16);
        assert_eq!(count(3), 8);
        assert_eq!(count(15), 32);
    }

    #[test]
    fn every_divisor_divides_n() {
        for n in [105u64, 65, 39] {
            let f = factor_odd_squarefree(n).unwrap();
            let whole = GaussianInteger::new(n as i64, 0);
            for d in gaussian_divisors(&f).unwrap() {
                assert!(d.divides(whole), "{d:?} does not divide {n}");
            }
        }
    }

    #[test]
    fn resource_limit_enforced() {
        // 195 = 3 * 5 * 13: omega1 = 2, omega3 = 1, exponent 2*2 + 1 + 2 = 7
        let f = factor_odd_squarefree(195).unwrap();
        assert!(gaussian_divisors_with_limit(&f, 6).is_err());
        assert_eq!(gaussian_divisors_with_limit(&f, 7).unwrap().len(), 128);
    }

    #[test]
    fn pm1_mod4_classification() {
        assert!(GaussianInteger::new(1, 0).is_pm1_mod4());
        assert!(GaussianInteger::new(-1, 0).is_pm1_mod4());
        assert!(GaussianInteger::new(5, 0).is_pm1_mod4());
        assert!(GaussianInteger::new(3, 4).is_pm1_mod4());
        assert!(GaussianInteger::new(-1, 4).is_pm1_mod4());
        assert!(!GaussianInteger::new(2, 1).is_pm1_mod4());
        assert!(!GaussianInteger::new(1, 2).is_pm1_mod4());
        assert!(!GaussianInteger::new(0, 1).is_pm1_mod4());
    }
}
