//! The eta products, joint-density constants, and range statistics:
//! density of the set N, density of the exceptional set, histograms of
//! 4-ranks, and the concentration statistics of omega3.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Sieve;
use crate::biquad::rk4_biquad;
use crate::error::Result;
use crate::pell::in_e_of;
use crate::quadratic::{fundamental_discriminants_of, in_n, rk4_narrow};

/// eta_r(t) = prod_{j=1..r} (1 - t^-j).
pub fn eta(r: u32, t: f64) -> f64 {
    (1..=r).map(|j| 1.0 - t.powi(-(j as i32))).product()
}

/// eta_infinity(t), truncated once the factors are within 1e-15 of 1.
pub fn eta_inf(t: f64) -> f64 {
    let mut acc = 1.0;
    let mut j = 1i32;
    loop {
        let term = t.powi(-j);
        acc *= 1.0 - term;
        if term < 1e-15 {
            return acc;
        }
        j += 1;
    }
}

/// Joint density of (narrow 4-rank, imaginary 4-rank) both equal to r:
/// 2^(-r^2-r) (1 - 2^-(r+1)) eta_inf(2) / (eta_r(2) eta_{r+1}(2)).
pub fn fk_joint_density(r: u32) -> f64 {
    let pow = -((r * r + r) as i32);
    2f64.powi(pow) * (1.0 - 2f64.powi(-(r as i32 + 1))) * eta_inf(2.0)
        / (eta(r, 2.0) * eta(r + 1, 2.0))
}

/// Aggregate statistics over the odd squarefree 3 < n <= limit.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub limit: u64,
    pub count_odd_squarefree: u64,
    pub count_in_n: u64,
    pub fraction_in_n: f64,
    pub count_in_e: u64,
    pub fraction_in_e: f64,
    /// Histogram of the 4-rank of Cl(K_n) over n in N.
    pub rk4_histogram: BTreeMap<i64, u64>,
    pub omega3_mean: f64,
    pub omega3_variance: f64,
    /// (1/2) log log limit, the expected location of omega3.
    pub half_loglog: f64,
    /// Fraction of odd squarefree n that lie in N with
    /// |rk4 - (1/2) log log n| <= epsilon * log log n. Reported, never
    /// asserted.
    pub corollary_epsilon: f64,
    pub corollary_fraction: f64,
    /// Concentration window [0.1 L, 0.9 L] around (1/2) L, L = log log limit.
    pub omega3_window: (f64, f64),
    /// Fraction of odd squarefree n with omega3 outside that window.
    pub omega3_outside_frac: f64,
}

#[derive(Default, Clone)]
struct Accum {
    count: u64,
    in_n: u64,
    in_e: u64,
    rk4_hist: BTreeMap<i64, u64>,
    omega3_sum: u64,
    omega3_sq_sum: u64,
    corollary_hits: u64,
    omega3_outside: u64,
}

impl Accum {
    fn merge(mut self, other: Accum) -> Accum {
        self.count += other.count;
        self.in_n += other.in_n;
        self.in_e += other.in_e;
        self.omega3_sum += other.omega3_sum;
        self.omega3_sq_sum += other.omega3_sq_sum;
        self.corollary_hits += other.corollary_hits;
        self.omega3_outside += other.omega3_outside;
        for (k, v) in other.rk4_hist {
            *self.rk4_hist.entry(k).or_default() += v;
        }
        self
    }
}

/// One pass over 3 < n <= limit computing every statistic of the report.
pub fn density_report(sieve: &Sieve, limit: u64, epsilon: f64) -> Result<DensityReport> {
    if limit > sieve.limit() {
        return Err(crate::error::Error::ResourceLimit(format!(
            "limit {limit} exceeds the sieve bound {}",
            sieve.limit()
        )));
    }
    let loglog = (limit as f64).ln().ln();
    let window = (0.1 * loglog, 0.9 * loglog);
    let chunk = 1u64 << 15;
    let starts: Vec<u64> = (0..=(limit / chunk)).map(|i| i * chunk).collect();
    let total = starts
        .into_par_iter()
        .map(|start| {
            let mut acc = Accum::default();
            let lo = start.max(4);
            let hi = (start + chunk - 1).min(limit);
            let mut n = if lo % 2 == 0 { lo + 1 } else { lo };
            while n <= hi {
                if let Ok(f) = sieve.factor_odd_squarefree(n) {
                    acc.count += 1;
                    acc.omega3_sum += f.omega3 as u64;
                    acc.omega3_sq_sum += (f.omega3 as u64) * (f.omega3 as u64);
                    let w = f.omega3 as f64;
                    if w < window.0 || w > window.1 {
                        acc.omega3_outside += 1;
                    }
                    let member_n = in_n(&f);
                    let member_e = in_e_of(&f).expect("n > 3 odd squarefree");
                    if member_e {
                        acc.in_e += 1;
                    }
                    if member_n {
                        acc.in_n += 1;
                        let rk4 = rk4_biquad(&f, true)
                            .expect("epsilon is computable")
                            .expect("hypothesis holds");
                        *acc.rk4_hist.entry(rk4).or_default() += 1;
                        let loglog = (n as f64).ln().ln();
                        if (rk4 as f64 - 0.5 * loglog).abs() <= epsilon * loglog {
                            acc.corollary_hits += 1;
                        }
                    }
                }
                n += 2;
            }
            acc
        })
        .reduce(Accum::default, Accum::merge);

    let count = total.count.max(1) as f64;
    let mean = total.omega3_sum as f64 / count;
    Ok(DensityReport {
        limit,
        count_odd_squarefree: total.count,
        count_in_n: total.in_n,
        fraction_in_n: total.in_n as f64 / count,
        count_in_e: total.in_e,
        fraction_in_e: total.in_e as f64 / count,
        rk4_histogram: total.rk4_hist,
        omega3_mean: mean,
        omega3_variance: total.omega3_sq_sum as f64 / count - mean * mean,
        half_loglog: 0.5 * loglog,
        corollary_epsilon: epsilon,
        corollary_fraction: total.corollary_hits as f64 / count,
        omega3_window: window,
        omega3_outside_frac: total.omega3_outside as f64 / count,
    })
}

/// Empirical distribution of the quadratic 4-ranks over odd squarefree
/// n <= limit: rk4 of the narrow class group of disc(+n) and of the class
/// group of disc(-n), via Redei matrices.
pub fn rk4_quadratic_histogram(
    sieve: &Sieve,
    limit: u64,
) -> Result<(BTreeMap<u32, u64>, BTreeMap<u32, u64>)> {
    if limit > sieve.limit() {
        return Err(crate::error::Error::ResourceLimit(format!(
            "limit {limit} exceeds the sieve bound {}",
            sieve.limit()
        )));
    }
    let mut plus: BTreeMap<u32, u64> = BTreeMap::new();
    let mut minus: BTreeMap<u32, u64> = BTreeMap::new();
    for f in sieve.odd_squarefree() {
        if f.n > limit {
            break;
        }
        if f.n <= 3 {
            continue;
        }
        let (dp, dm) = fundamental_discriminants_of(&f);
        *plus
            .entry(rk4_narrow(dp).expect("fundamental"))
            .or_default() += 1;
        *minus
            .entry(rk4_narrow(dm).expect("fundamental"))
            .or_default() += 1;
    }
    Ok((plus, minus))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_examples() {
        assert_eq!(eta(0, 2.0), 1.0);
        assert!((eta(2, 2.0) - 0.375).abs() < 1e-15);
        assert!((eta_inf(2.0) - 0.288_788_095_086_602_4).abs() < 1e-12);
    }

    #[test]
    fn fk_density_examples() {
        // r = 0 and r = 1 both collapse to eta_inf(2)
        assert!((fk_joint_density(0) - eta_inf(2.0)).abs() < 1e-15);
        assert!((fk_joint_density(1) - eta_inf(2.0)).abs() < 1e-12);
        // r = 2 is eta_inf(2)/9
        assert!((fk_joint_density(2) - eta_inf(2.0) / 9.0).abs() < 1e-12);
        assert!((fk_joint_density(2) - 0.032_087_566).abs() < 1e-9);
    }

    #[test]
    fn report_small_range() {
        let sieve = Sieve::new(1000).unwrap();
        let r = density_report(&sieve, 1000, 0.5).unwrap();
        // 403 odd squarefree in 3..=1000, minus n = 3 itself
        assert_eq!(r.count_odd_squarefree, 402);
        assert_eq!(
            r.rk4_histogram.values().sum::<u64>(),
            r.count_in_n,
            "histogram conserves the N count"
        );
        assert!(r.fraction_in_n > 0.0 && r.fraction_in_n < 1.0);
        assert!(r.fraction_in_e > 0.0 && r.fraction_in_e < 1.0);
    }

    #[test]
    fn histogram_totals_conserved() {
        let sieve = Sieve::new(1000).unwrap();
        let (plus, minus) = rk4_quadratic_histogram(&sieve, 1000).unwrap();
        let n_count = sieve.odd_squarefree().filter(|f| f.n > 3).count() as u64;
        assert_eq!(plus.values().sum::<u64>(), n_count);
        assert_eq!(minus.values().sum::<u64>(), n_count);
        // the 4-rank frequencies decay with the rank
        let freqs: Vec<u64> = plus.values().copied().collect();
        assert!(freqs.windows(2).all(|w| w[0] > w[1]));
    }
}
