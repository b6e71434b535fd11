//! Exact integer arithmetic substrate: integer square roots, Kronecker
//! symbols, factorization of odd squarefree integers, a smallest-prime-factor
//! sieve for bulk enumeration, and the two-squares decomposition of primes
//! p = 1 mod 4.

use crate::error::{Error, Result};

/// Direct (sieve-free) factorization is limited to this bound; larger inputs
/// are rejected rather than factored slowly.
pub const MAX_DIRECT_FACTOR_N: u64 = 1_000_000_000_000;

/// Default memory budget for the sieve, in bytes.
pub const DEFAULT_SIEVE_BUDGET: usize = 100_000_000;

/// Floor of the square root, exact for all u64.
pub fn isqrt_u64(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    // float seed can be off by one in either direction; compare in u128
    while x as u128 * x as u128 > n as u128 {
        x -= 1;
    }
    while (x as u128 + 1) * (x as u128 + 1) <= n as u128 {
        x += 1;
    }
    x
}

/// Floor of the square root, exact for all u128.
pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128 + 1;
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    while x.checked_mul(x).map_or(true, |s| s > n) {
        x -= 1;
    }
    x
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = isqrt_u64(n);
    r * r == n
}

/// Kronecker symbol (a|b), the full extension of the Jacobi symbol to all
/// integer pairs.
pub fn kronecker(a: i64, b: i64) -> i32 {
    // work in i128 so |i64::MIN| and intermediate negations are safe
    let mut a = a as i128;
    let mut b = b as i128;
    if b == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut v = 0u32;
    while b % 2 == 0 {
        b /= 2;
        v += 1;
    }
    // (a|2)^v; (a|2) = +1 for a = +-1 mod 8, -1 for a = +-3 mod 8
    let mut k: i32 = if v % 2 == 0 {
        1
    } else {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => return 0, // a even and b even was excluded, so a odd here
        }
    };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    // Jacobi loop on odd positive b
    a = a.rem_euclid(b);
    while a != 0 {
        let mut v = 0u32;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 && matches!(b % 8, 3 | 5) {
            k = -k;
        }
        if a % 4 == 3 && b % 4 == 3 {
            k = -k;
        }
        let r = a;
        a = b % r;
        b = r;
    }
    if b == 1 {
        k
    } else {
        0
    }
}

/// An odd squarefree integer n > 1 together with its prime factorization and
/// the congruence counts used throughout the crate.
///
/// Invariants (enforced by the constructors): the primes are distinct, odd,
/// ascending and multiply to n; `omega = omega1 + omega3`; `has_p5mod8`
/// implies `omega1 >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredOddSquarefree {
    pub n: u64,
    /// Distinct odd prime divisors, ascending.
    pub primes: Vec<u64>,
    /// Number of distinct primes (= total number since n is squarefree).
    pub omega: u32,
    /// Count of prime divisors = 1 mod 4.
    pub omega1: u32,
    /// Count of prime divisors = 3 mod 4.
    pub omega3: u32,
    /// True iff some prime divisor is = 5 mod 8.
    pub has_p5mod8: bool,
}

impl FactoredOddSquarefree {
    /// Factor n by trial division. Errors with `NotOddSquarefree` when n is
    /// even, not squarefree or <= 1, and `ResourceLimit` beyond
    /// [`MAX_DIRECT_FACTOR_N`].
    pub fn new(n: u64) -> Result<Self> {
        if n > MAX_DIRECT_FACTOR_N {
            return Err(Error::ResourceLimit(format!(
                "n = {n} exceeds the direct factorization bound {MAX_DIRECT_FACTOR_N}"
            )));
        }
        if n <= 1 || n % 2 == 0 {
            return Err(Error::NotOddSquarefree(n as i64));
        }
        let mut primes = Vec::new();
        let mut m = n;
        let mut p = 3u64;
        while p * p <= m {
            if m % p == 0 {
                m /= p;
                if m % p == 0 {
                    return Err(Error::NotOddSquarefree(n as i64));
                }
                primes.push(p);
            }
            p += 2;
        }
        if m > 1 {
            primes.push(m);
        }
        Ok(Self::from_parts(n, primes))
    }

    fn from_parts(n: u64, primes: Vec<u64>) -> Self {
        debug_assert!(primes.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(primes.iter().product::<u64>(), n);
        let omega1 = primes.iter().filter(|&&p| p % 4 == 1).count() as u32;
        let omega3 = primes.iter().filter(|&&p| p % 4 == 3).count() as u32;
        let has_p5mod8 = primes.iter().any(|&p| p % 8 == 5);
        Self {
            n,
            omega: omega1 + omega3,
            primes,
            omega1,
            omega3,
            has_p5mod8,
        }
    }

    /// n mod 4, which decides both fundamental discriminants.
    pub fn n_mod4(&self) -> u64 {
        self.n % 4
    }
}

/// See [`FactoredOddSquarefree::new`].
pub fn factor_odd_squarefree(n: u64) -> Result<FactoredOddSquarefree> {
    FactoredOddSquarefree::new(n)
}

/// Decompose a prime p = 1 mod 4 as a^2 + b^2 with the canonical choice
/// a odd, b even, both positive.
pub fn two_squares(p: u64) -> Result<(u64, u64)> {
    if p % 4 != 1 || p < 5 {
        return Err(Error::BadInput(format!("{p} is not a prime = 1 mod 4")));
    }
    // square root of -1 mod p via a quadratic nonresidue
    let mut x = 0u64;
    for z in 2..p {
        match kronecker(z as i64, p as i64) {
            -1 => {
                x = mod_pow(z, (p - 1) / 4, p);
                break;
            }
            0 => return Err(Error::BadInput(format!("{p} is not prime"))),
            _ => {}
        }
    }
    if mod_mul(x, x, p) != p - 1 {
        return Err(Error::BadInput(format!("{p} is not prime")));
    }
    // Euclid descent: the first remainder below sqrt(p) is one leg
    let (mut a, mut b) = (p, x);
    while b * b > p {
        let r = a % b;
        a = b;
        b = r;
    }
    let c2 = p - b * b;
    let c = isqrt_u64(c2);
    if c * c != c2 {
        return Err(Error::BadInput(format!("{p} is not prime")));
    }
    let (odd, even) = if b % 2 == 1 { (b, c) } else { (c, b) };
    debug_assert_eq!(odd * odd + even * even, p);
    debug_assert_eq!(odd % 2, 1);
    Ok((odd, even))
}

fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Smallest-prime-factor sieve. Built once, then shared read-only; all
/// lookups are pure.
pub struct Sieve {
    limit: u64,
    spf: Vec<u32>,
}

impl Sieve {
    /// Build a sieve covering 2..=limit under the default memory budget.
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_SIEVE_BUDGET)
    }

    /// Build with an explicit memory budget in bytes (4 bytes per entry).
    pub fn with_budget(limit: u64, budget_bytes: usize) -> Result<Self> {
        if limit < 3 {
            return Err(Error::BadInput(format!("sieve limit {limit} < 3")));
        }
        let entries = limit as usize + 1;
        if entries.saturating_mul(4) > budget_bytes || limit > u32::MAX as u64 {
            return Err(Error::ResourceLimit(format!(
                "sieve to {limit} needs {} bytes, budget is {budget_bytes}",
                entries * 4
            )));
        }
        let mut spf: Vec<u32> = (0..=limit as u32).collect();
        let mut i = 2u64;
        while i * i <= limit {
            if spf[i as usize] == i as u32 {
                let mut j = i * i;
                while j <= limit {
                    if spf[j as usize] == j as u32 {
                        spf[j as usize] = i as u32;
                    }
                    j += i;
                }
            }
            i += 1;
        }
        Ok(Self { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Factor any 2 <= n <= limit into (prime, multiplicity) pairs, ascending.
    pub fn factor(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        if n < 2 || n > self.limit {
            return Err(Error::BadInput(format!(
                "{n} outside sieve range 2..={}",
                self.limit
            )));
        }
        let mut out = Vec::new();
        let mut m = n as u32;
        while m > 1 {
            let p = self.spf[m as usize];
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        Ok(out)
    }

    /// Factor an odd squarefree n in range, or `NotOddSquarefree`.
    pub fn factor_odd_squarefree(&self, n: u64) -> Result<FactoredOddSquarefree> {
        self.odd_squarefree_primes(n)
            .map(|ps| FactoredOddSquarefree::from_parts(n, ps))
            .ok_or(Error::NotOddSquarefree(n as i64))
    }

    fn odd_squarefree_primes(&self, n: u64) -> Option<Vec<u64>> {
        if n <= 1 || n % 2 == 0 || n > self.limit {
            return None;
        }
        let mut primes = Vec::new();
        let mut m = n as u32;
        while m > 1 {
            let p = self.spf[m as usize];
            m /= p;
            if m % p == 0 {
                return None;
            }
            primes.push(p as u64);
        }
        Some(primes)
    }

    /// Every odd squarefree 3 <= n <= limit, ascending, exactly once.
    pub fn odd_squarefree(&self) -> impl Iterator<Item = FactoredOddSquarefree> + '_ {
        (3..=self.limit).step_by(2).filter_map(move |n| {
            self.odd_squarefree_primes(n)
                .map(|ps| FactoredOddSquarefree::from_parts(n, ps))
        })
    }
}

/// See [`Sieve::odd_squarefree`]; builds a throwaway sieve.
pub fn sieve_odd_squarefree(
    limit: u64,
) -> Result<impl Iterator<Item = FactoredOddSquarefree>> {
    let sieve = Sieve::new(limit)?;
    let values: Vec<FactoredOddSquarefree> = sieve.odd_squarefree().collect();
    Ok(values.into_iter())
}
