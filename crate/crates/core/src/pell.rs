//! Continued-fraction engine for sqrt(n): period and partial quotients, norm
//! of the fundamental unit, solvability of c^2 - n e^2 = +-2, and the Hasse
//! unit index Q(n) with its constructive witness.
//!
//! The expansion uses the integer-only (P, Q) recurrence
//!   a_k = floor((a_0 + P_k)/Q_k),  P_{k+1} = a_k Q_k - P_k,
//!   Q_{k+1} = (n - P_{k+1}^2)/Q_k,
//! and the classical identity p_k^2 - n q_k^2 = (-1)^{k+1} Q_{k+1} for the
//! convergents p_k/q_k. Any solution of |c^2 - n e^2| = m with m < sqrt(n)
//! appears among the convergents, so scanning one period decides
//! membership in the exceptional set. Witness convergents can exceed 128
//! bits even for small n, so they are carried as big integers; everything
//! else stays fixed-width.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{isqrt_u64, FactoredOddSquarefree};
use crate::error::{Error, Result};

/// One full period of the continued fraction of sqrt(n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellData {
    pub n: u64,
    pub period: u32,
    /// a_0 followed by the periodic part a_1 ..= a_period.
    pub partial_quotients: Vec<u64>,
    /// (sign, Q) pairs with sign * Q = p_k^2 - n q_k^2 at the k-th
    /// convergent, for k = 0 .. period-1.
    pub q_values: Vec<(i8, u64)>,
    /// Norm of the fundamental unit of Q(sqrt(n)): (-1)^period.
    pub unit_norm: i8,
}

/// A solution of c^2 - n e^2 = sign * 2 (c, e odd and positive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EWitness {
    pub n: u64,
    pub c: BigInt,
    pub e: BigInt,
    pub sign: i8,
}

impl EWitness {
    /// The derived norm-1 unit (a, b) = ((c^2 + n e^2)/2, c e), satisfying
    /// a^2 - n b^2 = 1.
    pub fn unit(&self) -> (BigInt, BigInt) {
        let n = BigInt::from(self.n);
        let a = (&self.c * &self.c + &n * &self.e * &self.e) / 2;
        let b = &self.c * &self.e;
        (a, b)
    }
}

/// Expand sqrt(n) through exactly one period.
pub fn cf_sqrt(n: u64) -> Result<PellData> {
    if n < 2 {
        return Err(Error::BadInput(format!("cf_sqrt needs n >= 2, got {n}")));
    }
    let a0 = isqrt_u64(n);
    if a0 * a0 == n {
        return Err(Error::PerfectSquare(n));
    }
    let mut quotients = vec![a0];
    let mut q_values = Vec::new();
    let (mut p, mut q) = (a0, n - a0 * a0);
    let first = (p, q);
    let mut k = 0u32;
    loop {
        // value of the k-th convergent is (-1)^{k+1} Q_{k+1}
        let sign = if k % 2 == 0 { -1 } else { 1 };
        q_values.push((sign, q));
        let a = (a0 + p) / q;
        quotients.push(a);
        let p_next = a * q - p;
        let q_next = (n - p_next * p_next) / q;
        p = p_next;
        q = q_next;
        k += 1;
        if (p, q) == first {
            break;
        }
    }
    let unit_norm = if k % 2 == 0 { 1 } else { -1 };
    debug_assert_eq!(*q_values.last().unwrap(), (unit_norm, 1));
    Ok(PellData {
        n,
        period: k,
        partial_quotients: quotients,
        q_values,
        unit_norm,
    })
}

/// Norm of the fundamental unit of Q(sqrt(n)), i.e. (-1)^period.
pub fn norm_fundamental_unit(n: u64) -> Result<i8> {
    let a0 = isqrt_u64(n);
    if n < 2 {
        return Err(Error::BadInput(format!("need n >= 2, got {n}")));
    }
    if a0 * a0 == n {
        return Err(Error::PerfectSquare(n));
    }
    let (mut p, mut q) = (a0, n - a0 * a0);
    let first = (p, q);
    let mut k = 0u32;
    loop {
        let a = (a0 + p) / q;
        let p_next = a * q - p;
        q = (n - p_next * p_next) / q;
        p = p_next;
        k += 1;
        if (p, q) == first {
            return Ok(if k % 2 == 0 { 1 } else { -1 });
        }
    }
}

/// Scan one period for Q_{k+1} = 2; returns the convergent index k and the
/// sign of the value there.
fn pm2_hit(n: u64) -> Option<(u64, i8)> {
    let a0 = isqrt_u64(n);
    let (mut p, mut q) = (a0, n - a0 * a0);
    let first = (p, q);
    let mut k = 0u64;
    loop {
        if q == 2 {
            return Some((k, if k % 2 == 0 { -1 } else { 1 }));
        }
        let a = (a0 + p) / q;
        let p_next = a * q - p;
        q = (n - p_next * p_next) / q;
        p = p_next;
        k += 1;
        if (p, q) == first {
            return None;
        }
    }
}

fn require_in_e_domain(f: &FactoredOddSquarefree) -> Result<()> {
    if f.n <= 3 {
        return Err(Error::PreconditionViolated(format!(
            "exceptional-set membership is defined for n > 3, got {}",
            f.n
        )));
    }
    Ok(())
}

/// Membership of n in the exceptional set, for already-factored n > 3.
pub fn in_e_of(f: &FactoredOddSquarefree) -> Result<bool> {
    require_in_e_domain(f)?;
    Ok(pm2_hit(f.n).is_some())
}

/// True iff c^2 - n e^2 = +-2 is solvable (n odd squarefree > 3).
pub fn in_e(n: u64) -> Result<bool> {
    in_e_of(&validated(n)?)
}

/// First solution of c^2 - n e^2 = +-2 along the continued fraction of
/// sqrt(n), if any.
pub fn solve_pm2(n: u64) -> Result<Option<EWitness>> {
    solve_pm2_of(&validated(n)?)
}

/// As [`solve_pm2`], for already-factored n.
pub fn solve_pm2_of(f: &FactoredOddSquarefree) -> Result<Option<EWitness>> {
    require_in_e_domain(f)?;
    let n = f.n;
    let Some((hit, sign)) = pm2_hit(n) else {
        return Ok(None);
    };
    // rebuild the convergent at the hit index; these grow exponentially,
    // hence big integers
    let a0 = isqrt_u64(n);
    let (mut p, mut q) = (a0, n - a0 * a0);
    let (mut c_prev, mut c) = (BigInt::one(), BigInt::from(a0));
    let (mut e_prev, mut e) = (BigInt::zero(), BigInt::one());
    for _ in 0..hit {
        let a = (a0 + p) / q;
        let p_next = a * q - p;
        q = (n - p_next * p_next) / q;
        p = p_next;
        let c_next = BigInt::from(a) * &c + &c_prev;
        c_prev = std::mem::replace(&mut c, c_next);
        let e_next = BigInt::from(a) * &e + &e_prev;
        e_prev = std::mem::replace(&mut e, e_next);
    }
    debug_assert_eq!(
        &c * &c - BigInt::from(n) * &e * &e,
        BigInt::from(2 * sign as i64)
    );
    Ok(Some(EWitness { n, c, e, sign }))
}

/// Hasse unit index Q(n) of the biquadratic field: 2 iff n is in the
/// exceptional set, else 1.
pub fn hasse_q(n: u64) -> Result<u8> {
    Ok(if in_e(n)? { 2 } else { 1 })
}

/// As [`hasse_q`], for already-factored n.
pub fn hasse_q_of(f: &FactoredOddSquarefree) -> Result<u8> {
    Ok(if in_e_of(f)? { 2 } else { 1 })
}

/// Certify a witness: checks c^2 - n e^2 = +-2 with c, e odd, and returns
/// the norm-1 unit (a, b) = ((c^2 + n e^2)/2, c e) it generates.
pub fn hasse_witness(w: &EWitness, n: u64) -> Result<(BigInt, BigInt)> {
    if w.n != n {
        return Err(Error::InvalidWitness(format!(
            "witness is for n = {}, not {n}",
            w.n
        )));
    }
    let value = &w.c * &w.c - BigInt::from(n) * &w.e * &w.e;
    if value.abs() != BigInt::from(2) || value.sign() != BigInt::from(w.sign).sign() {
        return Err(Error::InvalidWitness(format!(
            "c^2 - {n} e^2 = {value}, expected {}2",
            if w.sign > 0 { "+" } else { "-" }
        )));
    }
    let two = BigInt::from(2);
    if (&w.c % &two).is_zero() || (&w.e % &two).is_zero() {
        return Err(Error::InvalidWitness("c and e must both be odd".into()));
    }
    Ok(w.unit())
}

fn validated(n: u64) -> Result<FactoredOddSquarefree> {
    FactoredOddSquarefree::new(n).map_err(|e| match e {
        Error::NotOddSquarefree(_) => Error::PreconditionViolated(format!(
            "{n} is not odd squarefree"
        )),
        other => other,
    })
}
