//! Binary quadratic forms: reduction (definite and indefinite) and Gauss
//! composition. This is the substrate of the class-group oracle.
//!
//! A form (a, b, c) stands for a x^2 + b x y + c y^2 with discriminant
//! D = b^2 - 4ac. Reduced means |b| <= a <= c (b >= 0 when |b| = a or
//! a = c) in the definite case, and |sqrt(D) - 2|a|| < b < sqrt(D) in the
//! indefinite case. All comparisons against sqrt(D) are done with exact
//! integer inequalities.

use crate::arith::isqrt_u64;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return (a.abs(), if a < 0 { -1 } else { 1 }, 0);
    }
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

fn to_i64(x: i128, what: &'static str) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(what))
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn discriminant(&self) -> i128 {
        self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128
    }

    /// Principal form of discriminant d.
    pub fn identity(d: i64) -> Self {
        let b = d.rem_euclid(2);
        Self::new(1, b, (b * b - d) / 4)
    }

    /// The class inverse (a, -b, c).
    pub fn inverse(&self) -> Self {
        Self::new(self.a, -self.b, self.c)
    }

    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant();
        if d < 0 {
            if self.a <= 0 {
                return false;
            }
            let (a, b, c) = (self.a, self.b, self.c);
            if b.abs() > a || a > c {
                return false;
            }
            if (b.abs() == a || a == c) && b < 0 {
                return false;
            }
            true
        } else {
            // 0 < b < sqrt(D) and |sqrt(D) - 2|a|| < b, integer-exact
            let (b, ta) = (self.b as i128, 2 * (self.a as i128).abs());
            if self.b <= 0 || b * b >= d {
                return false;
            }
            if d >= (b + ta) * (b + ta) {
                return false;
            }
            ta - b < 0 || (ta - b) * (ta - b) < d
        }
    }

    /// Reduced representative: the canonical one for definite forms, some
    /// member of the reduced cycle for indefinite forms.
    pub fn reduce(&self) -> Result<QuadForm> {
        let d = self.discriminant();
        if d < 0 {
            if self.a <= 0 {
                // only positive definite forms represent classes here
                return Err(Error::DegenerateForm {
                    a: self.a,
                    b: self.b,
                    c: self.c,
                });
            }
            self.reduce_definite()
        } else {
            let dd = to_i64(d, "discriminant")?;
            let sqrt_d = isqrt_u64(dd as u64) as i64;
            if sqrt_d * sqrt_d == dd {
                return Err(Error::DegenerateForm {
                    a: self.a,
                    b: self.b,
                    c: self.c,
                });
            }
            self.reduce_indefinite(dd, sqrt_d)
        }
    }

    fn reduce_definite(&self) -> Result<QuadForm> {
        let d = self.discriminant();
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            if c < a {
                (a, c) = (c, a);
                b = -b;
                continue;
            }
            if b > a || b <= -a {
                // shift b into (-a, a]
                let mut b2 = (b + a).rem_euclid(2 * a) - a;
                if b2 <= -a {
                    b2 += 2 * a;
                }
                c = (b2 * b2 - d) / (4 * a);
                b = b2;
                continue;
            }
            break;
        }
        if (b.abs() == a || a == c) && b < 0 {
            b = -b;
        }
        Ok(QuadForm::new(
            to_i64(a, "reduce")?,
            to_i64(b, "reduce")?,
            to_i64(c, "reduce")?,
        ))
    }

    fn reduce_indefinite(&self, d: i64, sqrt_d: i64) -> Result<QuadForm> {
        let mut f = *self;
        for _ in 0..100_000 {
            if f.is_reduced() {
                return Ok(f);
            }
            f = f.rho(d, sqrt_d)?;
        }
        Err(Error::DegenerateForm {
            a: self.a,
            b: self.b,
            c: self.c,
        })
    }

    /// One step around the cycle: (a, b, c) -> (c, b', c') with
    /// b' = -b mod 2|c| chosen in (sqrt(D) - 2|c|, sqrt(D)].
    pub(crate) fn rho(&self, d: i64, sqrt_d: i64) -> Result<QuadForm> {
        if self.c == 0 {
            return Err(Error::DegenerateForm {
                a: self.a,
                b: self.b,
                c: self.c,
            });
        }
        let two_c = 2 * (self.c as i128).abs();
        let r = (-(self.b as i128)).rem_euclid(two_c);
        let k = (sqrt_d as i128 - r).div_euclid(two_c);
        let b2 = r + k * two_c;
        let c2 = (b2 * b2 - d as i128) / (4 * self.c as i128);
        Ok(QuadForm::new(
            self.c,
            to_i64(b2, "rho")?,
            to_i64(c2, "rho")?,
        ))
    }
}

/// Gauss composition; the result is reduced and has the common discriminant.
pub fn compose(f: &QuadForm, g: &QuadForm) -> Result<QuadForm> {
    let d = f.discriminant();
    let dg = g.discriminant();
    if d != dg {
        return Err(Error::DiscriminantMismatch(d as i64, dg as i64));
    }
    let (a1, b1, _c1) = (f.a as i128, f.b as i128, f.c as i128);
    let (a2, b2, c2) = (g.a as i128, g.b as i128, g.c as i128);
    let s = (b1 + b2) / 2;
    let m = (b1 - b2) / 2;
    let (g0, u0, v0) = ext_gcd(a1, a2);
    let (gg, uu, w) = ext_gcd(g0, s);
    let _u = uu * u0;
    let v = uu * v0;
    let big_a = a1 * a2 / (gg * gg);
    debug_assert_eq!((2 * a2 * (v * m - w * c2)) % gg, 0);
    let mut big_b = (b2 + 2 * a2 * (v * m - w * c2) / gg).rem_euclid(2 * big_a);
    if big_b > big_a {
        big_b -= 2 * big_a;
    }
    let big_c = (big_b * big_b - d) / (4 * big_a);
    QuadForm::new(
        to_i64(big_a, "compose")?,
        to_i64(big_b, "compose")?,
        to_i64(big_c, "compose")?,
    )
    .reduce()
}
