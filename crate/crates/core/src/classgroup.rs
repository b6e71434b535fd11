//! Independent class-group oracle built on binary quadratic forms.
//!
//! For a fundamental discriminant D the narrow class group is realized as
//! the form class group: reduced forms for D < 0, cycles of reduced forms
//! for D > 0 (equivalent forms share a cycle, so no unit-sized integers
//! ever appear). The abelian group structure is reconstructed by picking
//! generators, computing relative orders by composition, and taking the
//! Smith normal form of the relation matrix. The ordinary class group of a
//! real field is the quotient by the class of a form with leading
//! coefficient -1.

use std::collections::HashMap;

use crate::arith::isqrt_u64;
use crate::error::{Error, Result};
use crate::forms::{compose, QuadForm};
use crate::quadratic::is_fundamental;
use crate::snf::smith_diagonal;

/// Default bound on |D| accepted by the oracle.
pub const DEFAULT_ORACLE_BOUND: i64 = 100_000;

/// Invariant-factor presentation d1 | d2 | ... | dk (each >= 2) of a finite
/// abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupStructure {
    pub invariant_factors: Vec<u64>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        Self {
            invariant_factors: Vec::new(),
        }
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    /// 2^k-rank: the number of invariant factors divisible by 2^k.
    pub fn rk2k(&self, k: u32) -> u32 {
        let q = 1u64 << k;
        self.invariant_factors
            .iter()
            .filter(|&&d| d % q == 0)
            .count() as u32
    }
}

/// Form class groups for fundamental discriminants up to a configured bound.
/// All computations are pure; independent discriminants can be processed in
/// parallel.
#[derive(Debug, Clone)]
pub struct Oracle {
    max_abs_disc: i64,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::new(DEFAULT_ORACLE_BOUND)
    }
}

impl Oracle {
    pub fn new(max_abs_disc: i64) -> Self {
        Self { max_abs_disc }
    }

    pub fn bound(&self) -> i64 {
        self.max_abs_disc
    }

    fn check(&self, d: i64) -> Result<()> {
        if d.unsigned_abs() > self.max_abs_disc.unsigned_abs() {
            return Err(Error::OracleRangeExceeded(d, self.max_abs_disc));
        }
        if !is_fundamental(d) {
            return Err(Error::NotFundamental(d));
        }
        Ok(())
    }

    /// Structure of the narrow class group Cl+(D) (= Cl(D) for D < 0).
    pub fn narrow_class_group(&self, d: i64) -> Result<AbelianGroupStructure> {
        self.check(d)?;
        let table = ClassTable::build(d)?;
        Ok(table.structure(&(0..table.h() as u32).collect::<Vec<_>>(), table.principal()))
    }

    /// Structure of the ordinary class group Cl(D); for D > 0 this is the
    /// quotient of Cl+(D) by the sign-flip class, for D < 0 the two groups
    /// coincide.
    pub fn ordinary_class_group(&self, d: i64) -> Result<AbelianGroupStructure> {
        self.check(d)?;
        let table = ClassTable::build(d)?;
        if d < 0 {
            let all: Vec<u32> = (0..table.h() as u32).collect();
            return Ok(table.structure(&all, table.principal()));
        }
        Ok(ordinary_from_table(&table)?.1)
    }

    /// Narrow and ordinary structure from a single class enumeration.
    pub fn narrow_and_ordinary(
        &self,
        d: i64,
    ) -> Result<(AbelianGroupStructure, AbelianGroupStructure)> {
        self.check(d)?;
        let table = ClassTable::build(d)?;
        let all: Vec<u32> = (0..table.h() as u32).collect();
        let narrow = table.structure(&all, table.principal());
        if d < 0 {
            let ordinary = narrow.clone();
            return Ok((narrow, ordinary));
        }
        let (_, ordinary) = ordinary_from_table(&table)?;
        Ok((narrow, ordinary))
    }

    /// h(D): the ordinary class number for D > 0, |Cl(D)| for D < 0.
    pub fn class_number(&self, d: i64) -> Result<u64> {
        Ok(self.ordinary_class_group(d)?.order())
    }

    /// h+(D): the narrow class number.
    pub fn narrow_class_number(&self, d: i64) -> Result<u64> {
        Ok(self.narrow_class_group(d)?.order())
    }
}

/// Quotient of the narrow group by the sign-flip class (D > 0 only);
/// returns (narrow-to-ordinary index, ordinary structure).
fn ordinary_from_table(table: &ClassTable) -> Result<(u8, AbelianGroupStructure)> {
    let all: Vec<u32> = (0..table.h() as u32).collect();
    let principal = table.principal();
    let sigma = table.sign_flip_class()?;
    if sigma == principal {
        return Ok((1, table.structure(&all, principal)));
    }
    debug_assert_eq!(table.compose(sigma, sigma), principal);
    // cosets {x, x*sigma}, represented by the smaller id
    let partner: Vec<u32> = all.iter().map(|&x| table.compose(x, sigma)).collect();
    let reps: Vec<u32> = all
        .iter()
        .copied()
        .filter(|&x| x <= partner[x as usize])
        .collect();
    let project = |x: u32| x.min(partner[x as usize]);
    let ordinary = abelian_structure(&reps, project(principal), |x, y| {
        project(table.compose(x, y))
    });
    Ok((2, ordinary))
}

/// All classes of one discriminant with O(1) class lookup for any reduced
/// form.
struct ClassTable {
    d: i64,
    reps: Vec<QuadForm>,
    lookup: HashMap<QuadForm, u32>,
}

impl ClassTable {
    fn build(d: i64) -> Result<Self> {
        if d < 0 {
            Self::build_definite(d)
        } else {
            Self::build_indefinite(d)
        }
    }

    fn build_definite(d: i64) -> Result<Self> {
        let mut reps = Vec::new();
        let abs_d = d.unsigned_abs();
        let a_max = isqrt_u64(abs_d / 3) as i64;
        for a in 1..=a_max.max(1) {
            for b in -a..=a {
                let num = b as i128 * b as i128 - d as i128;
                if num % (4 * a as i128) != 0 {
                    continue;
                }
                let c = (num / (4 * a as i128)) as i64;
                if c < a {
                    continue;
                }
                if (b.abs() == a || a == c) && b < 0 {
                    continue;
                }
                reps.push(QuadForm::new(a, b, c));
            }
        }
        reps.sort();
        let lookup = reps
            .iter()
            .enumerate()
            .map(|(i, &f)| (f, i as u32))
            .collect();
        Ok(Self { d, reps, lookup })
    }

    fn build_indefinite(d: i64) -> Result<Self> {
        let sqrt_d = isqrt_u64(d as u64) as i64;
        let mut reduced = Vec::new();
        let b_start = if d % 2 == 0 { 2 } else { 1 };
        let mut b = b_start;
        while b <= sqrt_d {
            let m = (d - b * b) / 4; // = -ac > 0
            let mut u = 1i64;
            while u * u <= m {
                if m % u == 0 {
                    let v = m / u;
                    for f in [
                        QuadForm::new(u, b, -v),
                        QuadForm::new(-u, b, v),
                        QuadForm::new(v, b, -u),
                        QuadForm::new(-v, b, u),
                    ] {
                        if f.is_reduced() {
                            reduced.push(f);
                        }
                    }
                }
                u += 1;
            }
            b += 2;
        }
        reduced.sort();
        reduced.dedup();
        // partition into rho-cycles; the first unvisited form is minimal in
        // its cycle, so representatives are canonical
        let mut lookup: HashMap<QuadForm, u32> = HashMap::with_capacity(reduced.len());
        let mut reps = Vec::new();
        for &start in &reduced {
            if lookup.contains_key(&start) {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(start);
            let mut f = start;
            loop {
                lookup.insert(f, id);
                f = f.rho(d, sqrt_d)?;
                debug_assert!(f.is_reduced());
                if f == start {
                    break;
                }
            }
        }
        Ok(Self { d, reps, lookup })
    }

    fn h(&self) -> usize {
        self.reps.len()
    }

    fn class_of(&self, f: &QuadForm) -> u32 {
        let r = f.reduce().expect("class representatives are nondegenerate");
        *self
            .lookup
            .get(&r)
            .expect("every reduced form of D was enumerated")
    }

    fn principal(&self) -> u32 {
        self.class_of(&QuadForm::identity(self.d))
    }

    /// Class of a form with leading coefficient -1 (only for D > 0); its
    /// cosets realize the narrow-to-ordinary quotient.
    fn sign_flip_class(&self) -> Result<u32> {
        let b = self.d.rem_euclid(2);
        let c = (self.d - b * b) / 4;
        let f = QuadForm::new(-1, b, c);
        debug_assert_eq!(f.discriminant(), self.d as i128);
        let r = f.reduce()?;
        Ok(self.class_of(&r))
    }

    fn compose(&self, i: u32, j: u32) -> u32 {
        let f = compose(&self.reps[i as usize], &self.reps[j as usize])
            .expect("class representatives share a discriminant");
        self.class_of(&f)
    }

    fn structure(&self, elements: &[u32], identity: u32) -> AbelianGroupStructure {
        abelian_structure(elements, identity, |i, j| self.compose(i, j))
    }

    #[cfg(test)]
    fn cycle_of(&self, f: &QuadForm) -> u32 {
        self.class_of(f)
    }
}

/// Reconstruct the invariant factors of a finite abelian group given its
/// element ids and composition law. Generators are taken in element order
/// (deterministic); each contributes one relation row, and the Smith normal
/// form of the relation matrix gives the factors.
fn abelian_structure<F: Fn(u32, u32) -> u32>(
    elements: &[u32],
    identity: u32,
    compose: F,
) -> AbelianGroupStructure {
    let h = elements.len();
    if h <= 1 {
        return AbelianGroupStructure::trivial();
    }
    // discrete logs over the generators found so far
    let mut dlog: HashMap<u32, Vec<i64>> = HashMap::with_capacity(h);
    dlog.insert(identity, Vec::new());
    let mut orders: Vec<i64> = Vec::new();
    let mut relations: Vec<Vec<i64>> = Vec::new();
    for &g in elements {
        if dlog.len() == h {
            break;
        }
        if dlog.contains_key(&g) {
            continue;
        }
        // relative order of g over the known subgroup
        let mut powers = vec![identity, g];
        let mut pw = g;
        while !dlog.contains_key(&pw) {
            pw = compose(pw, g);
            powers.push(pw);
        }
        let m = (powers.len() - 1) as i64;
        relations.push(dlog[&pw].clone());
        orders.push(m);
        // grow the subgroup: every known x times g^t is new
        let known: Vec<(u32, Vec<i64>)> =
            dlog.iter().map(|(&x, v)| (x, v.clone())).collect();
        let idx = orders.len() - 1;
        for (x, v) in known {
            for (t, &gt) in powers.iter().enumerate().take(m as usize).skip(1) {
                let y = compose(x, gt);
                let mut w = v.clone();
                w.resize(idx, 0);
                w.push(t as i64);
                let previously = dlog.insert(y, w);
                debug_assert!(previously.is_none());
            }
        }
    }
    debug_assert_eq!(dlog.len(), h);
    debug_assert_eq!(orders.iter().product::<i64>(), h as i64);
    // row i: m_i * e_i - (expression of g_i^{m_i} over earlier generators)
    let k = orders.len();
    let mut matrix = vec![vec![0i128; k]; k];
    for i in 0..k {
        matrix[i][i] = orders[i] as i128;
        for (j, &coeff) in relations[i].iter().enumerate() {
            matrix[i][j] -= coeff as i128;
        }
    }
    let mut factors: Vec<u64> = smith_diagonal(matrix)
        .into_iter()
        .filter(|&x| x > 1)
        .map(|x| x as u64)
        .collect();
    factors.sort_unstable();
    debug_assert_eq!(factors.iter().product::<u64>(), h as u64);
    AbelianGroupStructure {
        invariant_factors: factors,
    }
}
