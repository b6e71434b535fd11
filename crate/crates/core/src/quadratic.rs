//! Genus-theory 2-ranks and Redei 4-ranks for the quadratic class groups
//! attached to +-n, plus the membership predicates built from them.
//!
//! The 2-rank of the narrow class group of a fundamental discriminant D is
//! omega(|D|) - 1 (Gauss). The 4-rank comes from the Redei matrix: factor D
//! uniquely into prime discriminants D_1 ... D_t drawn from {-4, 8, -8,
//! (-1)^((p-1)/2) p}, set the off-diagonal entry (i, j) to 1 iff
//! (D_i | p_j) = -1, fix the diagonal so every column sums to zero over
//! GF(2); then rk4 = t - 1 - rank.

use crate::arith::{kronecker, FactoredOddSquarefree, MAX_DIRECT_FACTOR_N};
use crate::classgroup::Oracle;
use crate::error::{Error, Result};
use crate::pell::norm_fundamental_unit;

/// Which of the two quadratic fields Q(sqrt(n)), Q(sqrt(-n)) is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Fundamental discriminants of Q(sqrt(n)) and Q(sqrt(-n)).
pub fn fundamental_discriminants(n: u64) -> Result<(i64, i64)> {
    Ok(fundamental_discriminants_of(&FactoredOddSquarefree::new(n)?))
}

/// As [`fundamental_discriminants`], for already-factored n.
pub fn fundamental_discriminants_of(f: &FactoredOddSquarefree) -> (i64, i64) {
    let n = f.n as i64;
    if f.n % 4 == 1 {
        (n, -4 * n)
    } else {
        (4 * n, -n)
    }
}

/// Decomposition of a fundamental discriminant into prime discriminants,
/// with the GF(2) Redei matrix built on top of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedeiMatrix {
    /// Prime discriminants D_1 ... D_t; the 2-part (if any) comes first,
    /// odd parts ascend by their underlying prime.
    pub labels: Vec<i64>,
    /// The prime underlying each label (2 for -4 and +-8).
    pub primes: Vec<i64>,
    /// Row bitmasks; bit j of rows[i] is the (i, j) entry.
    pub rows: Vec<u32>,
}

impl RedeiMatrix {
    pub fn t(&self) -> usize {
        self.labels.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        ((self.rows[i] >> j) & 1) as u8
    }

    /// Rank over GF(2) by bit-row elimination.
    pub fn rank(&self) -> u32 {
        let mut rows = self.rows.clone();
        let mut rank = 0usize;
        for col in 0..self.t() {
            let Some(pivot) = (rank..rows.len()).find(|&i| (rows[i] >> col) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && (*row >> col) & 1 == 1 {
                    *row ^= pivot_row;
                }
            }
            rank += 1;
        }
        rank as u32
    }

    /// Every column sums to zero over GF(2) by construction.
    pub fn column_sums_zero(&self) -> bool {
        (0..self.t()).all(|j| self.rows.iter().fold(0u8, |s, r| s ^ ((r >> j) & 1) as u8) == 0)
    }
}

/// Factor a fundamental discriminant into its prime discriminants.
/// Returns (labels, underlying primes).
fn prime_discriminants(d: i64) -> Result<(Vec<i64>, Vec<i64>)> {
    if d == 0 || d == 1 {
        return Err(Error::NotFundamental(d));
    }
    if d.unsigned_abs() > 4 * MAX_DIRECT_FACTOR_N {
        return Err(Error::ResourceLimit(format!(
            "|{d}| exceeds the factorization bound"
        )));
    }
    let mut odd = d.unsigned_abs();
    let mut twos = 0u32;
    while odd % 2 == 0 {
        odd /= 2;
        twos += 1;
    }
    if twos == 1 || twos > 3 {
        return Err(Error::NotFundamental(d));
    }
    // trial-divide the odd part; a repeated factor disqualifies d
    let mut odd_primes = Vec::new();
    let mut m = odd;
    let mut p = 3u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return Err(Error::NotFundamental(d));
            }
            odd_primes.push(p);
        }
        p += 2;
    }
    if m > 1 {
        odd_primes.push(m);
    }
    let mut mstar = 1i64;
    for &p in &odd_primes {
        mstar *= if p % 4 == 1 { p as i64 } else { -(p as i64) };
    }
    let two_part = d / mstar;
    if d != two_part * mstar || !matches!(two_part, 1 | -4 | 8 | -8) {
        return Err(Error::NotFundamental(d));
    }
    let mut labels = Vec::with_capacity(odd_primes.len() + 1);
    let mut primes = Vec::with_capacity(odd_primes.len() + 1);
    if two_part != 1 {
        labels.push(two_part);
        primes.push(2);
    }
    for &p in &odd_primes {
        labels.push(if p % 4 == 1 { p as i64 } else { -(p as i64) });
        primes.push(p as i64);
    }
    debug_assert_eq!(labels.iter().product::<i64>(), d);
    Ok((labels, primes))
}

/// True iff d is a fundamental discriminant.
pub fn is_fundamental(d: i64) -> bool {
    prime_discriminants(d).is_ok()
}

/// Prime-discriminant labels for disc(+n) or disc(-n) straight from a
/// factorization, skipping the trial division of [`prime_discriminants`].
fn labels_of(f: &FactoredOddSquarefree, sign: Sign) -> (Vec<i64>, Vec<i64>) {
    let (dp, dm) = fundamental_discriminants_of(f);
    let d = match sign {
        Sign::Plus => dp,
        Sign::Minus => dm,
    };
    let mut mstar = 1i64;
    for &p in &f.primes {
        mstar *= if p % 4 == 1 { p as i64 } else { -(p as i64) };
    }
    let two_part = d / mstar;
    debug_assert!(matches!(two_part, 1 | -4));
    let mut labels = Vec::with_capacity(f.primes.len() + 1);
    let mut primes = Vec::with_capacity(f.primes.len() + 1);
    if two_part != 1 {
        labels.push(two_part);
        primes.push(2);
    }
    for &p in &f.primes {
        labels.push(if p % 4 == 1 { p as i64 } else { -(p as i64) });
        primes.push(p as i64);
    }
    (labels, primes)
}

fn build_redei(labels: Vec<i64>, primes: Vec<i64>) -> RedeiMatrix {
    let t = labels.len();
    debug_assert!(t <= 32);
    let mut rows = vec![0u32; t];
    for i in 0..t {
        for j in 0..t {
            if i != j && kronecker(labels[i], primes[j]) == -1 {
                rows[i] |= 1 << j;
            }
        }
    }
    for j in 0..t {
        let col_sum = rows
            .iter()
            .enumerate()
            .filter(|&(i, r)| i != j && (r >> j) & 1 == 1)
            .count();
        if col_sum % 2 == 1 {
            rows[j] |= 1 << j;
        }
    }
    RedeiMatrix { labels, primes, rows }
}

/// As [`redei_matrix`] but from an existing factorization.
pub fn redei_matrix_of(f: &FactoredOddSquarefree, sign: Sign) -> RedeiMatrix {
    let (labels, primes) = labels_of(f, sign);
    build_redei(labels, primes)
}

/// As [`rk4_narrow`] but from an existing factorization.
pub fn rk4_narrow_of(f: &FactoredOddSquarefree, sign: Sign) -> u32 {
    let m = redei_matrix_of(f, sign);
    m.t() as u32 - 1 - m.rank()
}

/// 2-rank of the narrow class group: omega(|D|) - 1.
pub fn rk2_narrow(d: i64) -> Result<u32> {
    let (labels, _) = prime_discriminants(d)?;
    Ok(labels.len() as u32 - 1)
}

/// The Redei matrix of a fundamental discriminant.
pub fn redei_matrix(d: i64) -> Result<RedeiMatrix> {
    let (labels, primes) = prime_discriminants(d)?;
    Ok(build_redei(labels, primes))
}

/// 4-rank of the narrow class group of D (equals the ordinary 4-rank for
/// D < 0): t - 1 - rank of the Redei matrix.
pub fn rk4_narrow(d: i64) -> Result<u32> {
    let m = redei_matrix(d)?;
    Ok(m.t() as u32 - 1 - m.rank())
}

/// 2-rank of the ordinary class group of Q(sqrt(n)) or Q(sqrt(-n)),
/// by the genus-theory case table.
pub fn rk2_ordinary(sign: Sign, f: &FactoredOddSquarefree) -> u32 {
    let omega = f.omega;
    match sign {
        Sign::Plus => match (f.n % 4, f.omega3) {
            (1, 0) => omega - 1,
            (1, _) => omega - 2,
            _ => omega - 1, // n = 3 mod 4
        },
        Sign::Minus => {
            if f.n % 4 == 3 {
                omega - 1
            } else {
                omega
            }
        }
    }
}

/// rk2(Cl(n)) + rk2(Cl(-n)) in closed form: 2 omega - 1 when omega3 = 0,
/// else 2 omega - 2. Coded independently of [`rk2_ordinary`] so the two
/// routes can be cross-checked.
pub fn rk2_sum(f: &FactoredOddSquarefree) -> u32 {
    if f.omega3 == 0 {
        2 * f.omega - 1
    } else {
        2 * f.omega - 2
    }
}

/// Index of the ordinary class group inside the narrow one for Q(sqrt(n)):
/// 2 iff the fundamental unit has norm +1.
pub fn index_i(f: &FactoredOddSquarefree) -> u8 {
    let norm = norm_fundamental_unit(f.n)
        .expect("odd squarefree n > 1 is never a perfect square");
    if norm == 1 {
        2
    } else {
        1
    }
}

/// Given index 2, the 2-rank drops from narrow to ordinary iff some prime
/// divisor of the discriminant is 3 mod 4.
pub fn rk2_drop_predicate(f: &FactoredOddSquarefree) -> Result<bool> {
    if index_i(f) != 2 {
        return Err(Error::PreconditionViolated(format!(
            "rk2_drop_predicate needs index 2, but the fundamental unit of Q(sqrt({})) has norm -1",
            f.n
        )));
    }
    Ok(f.omega3 >= 1)
}

/// Membership in the set N: both narrow 4-ranks vanish (computed via Redei
/// matrices, no oracle needed).
pub fn in_n(f: &FactoredOddSquarefree) -> bool {
    rk4_narrow_of(f, Sign::Plus) == 0 && rk4_narrow_of(f, Sign::Minus) == 0
}

/// The hypothesis of the 4-rank formula: both ORDINARY 4-ranks vanish,
/// decided from oracle group structures.
pub fn hypothesis_ordinary(f: &FactoredOddSquarefree, oracle: &Oracle) -> Result<bool> {
    let (dp, dm) = fundamental_discriminants_of(f);
    let plus = oracle.ordinary_class_group(dp)?;
    let minus = oracle.narrow_class_group(dm)?; // narrow = ordinary for D < 0
    Ok(plus.rk2k(2) == 0 && minus.rk2k(2) == 0)
}

/// The per-n bundle of quadratic invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadInvariants {
    pub n: u64,
    pub disc_plus: i64,
    pub disc_minus: i64,
    pub rk2_narrow_plus: u32,
    pub rk2_ordinary_plus: u32,
    pub rk2_minus: u32,
    pub rk4_narrow_plus: u32,
    pub rk4_minus: u32,
    /// Narrow-to-ordinary index of Q(sqrt(n)), 1 or 2.
    pub index_i: u8,
}

impl QuadInvariants {
    pub fn compute(f: &FactoredOddSquarefree) -> Self {
        let (disc_plus, disc_minus) = fundamental_discriminants_of(f);
        Self {
            n: f.n,
            disc_plus,
            disc_minus,
            rk2_narrow_plus: rk2_narrow(disc_plus).expect("disc_plus is fundamental"),
            rk2_ordinary_plus: rk2_ordinary(Sign::Plus, f),
            rk2_minus: rk2_ordinary(Sign::Minus, f),
            rk4_narrow_plus: rk4_narrow(disc_plus).expect("disc_plus is fundamental"),
            rk4_minus: rk4_narrow(disc_minus).expect("disc_minus is fundamental"),
            index_i: index_i(f),
        }
    }
}
