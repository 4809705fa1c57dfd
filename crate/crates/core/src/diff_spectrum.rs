//! Brute-force c-differential analysis of power functions `f(x) = x^d`.
//!
//! For a power function `delta(a, b) = delta(1, b / a^d)` whenever `a != 0`,
//! so the whole differential table collapses to the single row
//! `delta(b) = #{x : (x + 1)^d - c x^d = b}`. Its histogram is the spectrum
//! `omega_i = #{b : delta(b) = i}`, and the uniformity is the larger of
//! `max delta(b)` and `gcd(d, q - 1)` (the latter from the `a = 0` row).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{BudgetKind, Error, Residue, Result};
use crate::finite_field::{FieldCtx, FieldElement, Sign};
use crate::num::gcd;

/// Histograms and power tables are dense arrays up to this many elements.
pub const DENSE_MAX_Q: u64 = 1 << 22;

/// The exponent `d = (q + 3) / 2` studied throughout this crate.
pub fn family_exponent(q: u64) -> u64 {
    (q + 3) / 2
}

/// A power function `x^d` together with the multiplier `c`.
#[derive(Debug, Clone, Copy)]
pub struct DiffConfig<'a> {
    field: &'a FieldCtx,
    d: u64,
    c: FieldElement,
    classical: bool,
}

impl<'a> DiffConfig<'a> {
    /// `c != 1`; use [`DiffConfig::classical`] for the ordinary derivative.
    pub fn new(field: &'a FieldCtx, d: u64, c: FieldElement) -> Result<Self> {
        if !field.belongs(c) {
            return Err(Error::MixedFields);
        }
        if c == field.one() {
            return Err(Error::InvalidMultiplier);
        }
        Self::checked(field, d, c, false)
    }

    /// `c = 1`, with `a = 0` excluded from every maximum.
    pub fn classical(field: &'a FieldCtx, d: u64) -> Result<Self> {
        Self::checked(field, d, field.one(), true)
    }

    /// `d = (q + 3) / 2` with the given multiplier.
    pub fn family(field: &'a FieldCtx, c: FieldElement) -> Result<Self> {
        Self::new(field, family_exponent(field.q()), c)
    }

    /// `d = (q + 3) / 2`, `c = -1`.
    pub fn family_minus_one(field: &'a FieldCtx) -> Result<Self> {
        Self::family(field, field.from_int(-1))
    }

    fn checked(field: &'a FieldCtx, d: u64, c: FieldElement, classical: bool) -> Result<Self> {
        if d == 0 || d >= field.q() {
            return Err(Error::InvalidExponent { d, q: field.q() });
        }
        Ok(DiffConfig {
            field,
            d,
            c,
            classical,
        })
    }

    pub fn field(&self) -> &'a FieldCtx {
        self.field
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn c(&self) -> FieldElement {
        self.c
    }

    pub fn is_classical(&self) -> bool {
        self.classical
    }

    pub fn gcd_term(&self) -> u64 {
        gcd(self.d, self.field.q() - 1)
    }
}

/// `x -> x^d` for every x, as ranks.
pub(crate) struct PowerTable {
    table: Option<Vec<u32>>,
}

impl PowerTable {
    pub(crate) fn new(field: &FieldCtx, d: u64) -> PowerTable {
        let table = (field.q() <= DENSE_MAX_Q)
            .then(|| (0..field.q()).map(|x| field.pow_raw(x, d) as u32).collect());
        PowerTable { table }
    }

    #[inline]
    fn get(&self, field: &FieldCtx, d: u64, x: u64) -> u64 {
        match &self.table {
            Some(t) => t[x as usize] as u64,
            None => field.pow_raw(x, d),
        }
    }

    /// `(x + 1)^d - c x^d` with everything as ranks.
    #[inline]
    pub(crate) fn derivative(&self, field: &FieldCtx, d: u64, c: u64, x: u64) -> u64 {
        let shifted = self.get(field, d, field.succ_raw(x));
        let scaled = field.mul_raw(c, self.get(field, d, x));
        field.sub_raw(shifted, scaled)
    }
}

/// `b -> delta(b)` for every b.
#[derive(Debug, Clone)]
pub struct DeltaHistogram {
    q: u64,
    counts: Counts,
}

#[derive(Debug, Clone)]
enum Counts {
    Dense(Vec<u32>),
    Sparse(BTreeMap<u64, u32>),
}

impl DeltaHistogram {
    fn build(field: &FieldCtx, values: impl Iterator<Item = u64>) -> DeltaHistogram {
        let q = field.q();
        let counts = if q <= DENSE_MAX_Q {
            let mut dense = vec![0u32; q as usize];
            for b in values {
                dense[b as usize] += 1;
            }
            Counts::Dense(dense)
        } else {
            let mut sparse = BTreeMap::new();
            for b in values {
                *sparse.entry(b).or_insert(0) += 1;
            }
            Counts::Sparse(sparse)
        };
        DeltaHistogram { q, counts }
    }

    /// delta at the element of rank `b`.
    pub fn get(&self, b: u64) -> u64 {
        match &self.counts {
            Counts::Dense(v) => v.get(b as usize).copied().unwrap_or(0) as u64,
            Counts::Sparse(m) => m.get(&b).copied().unwrap_or(0) as u64,
        }
    }

    pub fn max(&self) -> u64 {
        match &self.counts {
            Counts::Dense(v) => v.iter().copied().max().unwrap_or(0) as u64,
            Counts::Sparse(m) => m.values().copied().max().unwrap_or(0) as u64,
        }
    }

    pub fn total(&self) -> u64 {
        match &self.counts {
            Counts::Dense(v) => v.iter().map(|&c| c as u64).sum(),
            Counts::Sparse(m) => m.values().map(|&c| c as u64).sum(),
        }
    }

    /// `omega[i] = #{b : delta(b) = i}` for `i = 0..=max`.
    pub fn omega(&self) -> Vec<u64> {
        let mut omega = vec![0u64; self.max() as usize + 1];
        match &self.counts {
            Counts::Dense(v) => v.iter().for_each(|&c| omega[c as usize] += 1),
            Counts::Sparse(m) => {
                m.values().for_each(|&c| omega[c as usize] += 1);
                omega[0] += self.q - m.len() as u64;
            }
        }
        omega
    }

    /// Number of b whose count is odd.
    pub fn odd_count(&self) -> u64 {
        match &self.counts {
            Counts::Dense(v) => v.iter().filter(|&&c| c % 2 == 1).count() as u64,
            Counts::Sparse(m) => m.values().filter(|&&c| c % 2 == 1).count() as u64,
        }
    }
}

/// The c-differential spectrum of one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumRecord {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub d: u64,
    pub c: FieldElement,
    pub classical: bool,
    /// `omega[i]` for `0 <= i <= uniformity`, zero-filled.
    pub omega: Vec<u64>,
    pub uniformity: u64,
    pub gcd_term: u64,
    pub n4: u128,
}

impl SpectrumRecord {
    pub fn omega_at(&self, i: usize) -> u64 {
        self.omega.get(i).copied().unwrap_or(0)
    }

    /// The multiset notation: only the nonzero counts, keyed by index.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.omega
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, w)| w > 0)
    }

    pub fn second_moment(&self) -> u128 {
        self.omega
            .iter()
            .enumerate()
            .map(|(i, &w)| (i as u128) * (i as u128) * w as u128)
            .sum()
    }
}

/// delta(b) by direct enumeration.
pub fn c_delta(b: FieldElement, config: &DiffConfig) -> Result<u64> {
    let field = config.field;
    if !field.belongs(b) {
        return Err(Error::MixedFields);
    }
    field.limits().check(BudgetKind::BruteForce, field.q())?;
    let table = PowerTable::new(field, config.d);
    let c = config.c.rank();
    Ok((0..field.q())
        .filter(|&x| table.derivative(field, config.d, c, x) == b.rank())
        .count() as u64)
}

/// `delta(a, b) = #{x : (x + a)^d - c x^d = b}` without the scaling reduction.
pub fn general_delta(a: FieldElement, b: FieldElement, config: &DiffConfig) -> Result<u64> {
    let field = config.field;
    if !field.belongs(a) || !field.belongs(b) {
        return Err(Error::MixedFields);
    }
    field.limits().check(BudgetKind::BruteForce, field.q())?;
    let (d, c) = (config.d, config.c.rank());
    Ok((0..field.q())
        .filter(|&x| {
            let lhs = field.pow_raw(field.add_raw(x, a.rank()), d);
            field.sub_raw(lhs, field.mul_raw(c, field.pow_raw(x, d))) == b.rank()
        })
        .count() as u64)
}

/// The full row `b -> delta(b)`.
pub fn delta_histogram(config: &DiffConfig) -> Result<DeltaHistogram> {
    let field = config.field;
    field.limits().check(BudgetKind::BruteForce, field.q())?;
    let table = PowerTable::new(field, config.d);
    Ok(histogram_from_table(config, &table))
}

fn histogram_from_table(config: &DiffConfig, table: &PowerTable) -> DeltaHistogram {
    let field = config.field;
    let (d, c) = (config.d, config.c.rank());
    DeltaHistogram::build(
        field,
        (0..field.q()).map(|x| table.derivative(field, d, c, x)),
    )
}

pub fn spectrum(config: &DiffConfig) -> Result<SpectrumRecord> {
    let hist = delta_histogram(config)?;
    record_from_histogram(config, &hist)
}

pub(crate) fn spectrum_from_table(
    config: &DiffConfig,
    table: &PowerTable,
) -> Result<SpectrumRecord> {
    record_from_histogram(config, &histogram_from_table(config, table))
}

fn record_from_histogram(config: &DiffConfig, hist: &DeltaHistogram) -> Result<SpectrumRecord> {
    let field = config.field;
    let q = field.q();
    if hist.total() != q {
        return Err(Error::InvariantViolated("row sum of delta differs from q"));
    }
    let gcd_term = config.gcd_term();
    let mut omega = hist.omega();
    let uniformity = if config.classical {
        hist.max()
    } else {
        hist.max().max(gcd_term)
    };
    omega.resize(uniformity as usize + 1, 0);
    let n4 = if config.classical {
        n4_classical_from_spectrum(&omega, q)?
    } else {
        n4_from_spectrum(&omega, q, gcd_term)?
    };
    let record = SpectrumRecord {
        p: field.p(),
        n: field.n(),
        q,
        d: config.d,
        c: config.c,
        classical: config.classical,
        omega,
        uniformity,
        gcd_term,
        n4,
    };
    if !config.classical && (n4 - 1) / (q as u128 - 1) - gcd_term as u128 != record.second_moment()
    {
        return Err(Error::InvariantViolated("second moment identity"));
    }
    Ok(record)
}

fn check_moments(omega: &[u64], q: u64) -> Result<()> {
    let count: u128 = omega.iter().map(|&w| w as u128).sum();
    let first: u128 = omega
        .iter()
        .enumerate()
        .map(|(i, &w)| i as u128 * w as u128)
        .sum();
    if count != q as u128 || first != q as u128 {
        return Err(Error::InvariantViolated("spectrum counts must sum to q"));
    }
    Ok(())
}

/// `N4 = 1 + (q - 1) (sum i^2 omega_i + gcd(d, q - 1))`, valid for `c != 1`.
pub fn n4_from_spectrum(omega: &[u64], q: u64, gcd_term: u64) -> Result<u128> {
    check_moments(omega, q)?;
    let overflow = Error::Overflow("N4 from spectrum");
    let mut moment = 0u128;
    for (i, &w) in omega.iter().enumerate() {
        let term = (i as u128 * i as u128)
            .checked_mul(w as u128)
            .ok_or(overflow.clone())?;
        moment = moment.checked_add(term).ok_or(overflow.clone())?;
    }
    moment
        .checked_add(gcd_term as u128)
        .and_then(|m| m.checked_mul(q as u128 - 1))
        .and_then(|m| m.checked_add(1))
        .ok_or(overflow)
}

/// With `c = 1` the `a = 0` slice contributes `q^2` instead.
fn n4_classical_from_spectrum(omega: &[u64], q: u64) -> Result<u128> {
    let moment = n4_from_spectrum(omega, q, 0)? - 1;
    Ok(moment + q as u128 * q as u128)
}

/// Direct count of `(x1, x2, x3, x4)` with `x1 - x2 + x3 - x4 = 0` and
/// `x1^d - c x2^d + c x3^d - x4^d = 0`. The first equation fixes `x4`, so the
/// cost is `q^3` table lookups.
pub fn n4_bruteforce(config: &DiffConfig) -> Result<u128> {
    let field = config.field;
    let q = field.q();
    field.limits().check(BudgetKind::N4, q)?;
    let qs = q as usize;
    let mut add = vec![0u32; qs * qs];
    for a in 0..q {
        for b in 0..q {
            add[a as usize * qs + b as usize] = field.add_raw(a, b) as u32;
        }
    }
    let neg: Vec<usize> = (0..q).map(|x| field.neg_raw(x) as usize).collect();
    let pow: Vec<u32> = (0..q).map(|x| field.pow_raw(x, config.d) as u32).collect();
    let cpow: Vec<usize> = pow
        .iter()
        .map(|&y| field.mul_raw(config.c.rank(), y as u64) as usize)
        .collect();

    let mut total = 0u128;
    for x1 in 0..qs {
        let row1 = &add[x1 * qs..(x1 + 1) * qs];
        let pow_row = &add[pow[x1] as usize * qs..(pow[x1] as usize + 1) * qs];
        let mut count = 0u64;
        for x2 in 0..qs {
            // x4 = t + x3 and we need base + c x3^d = x4^d.
            let t = row1[neg[x2]] as usize;
            let base = pow_row[neg[cpow[x2]]] as usize;
            let t_row = &add[t * qs..(t + 1) * qs];
            let base_row = &add[base * qs..(base + 1) * qs];
            for x3 in 0..qs {
                count += (base_row[cpow[x3]] == pow[t_row[x3] as usize]) as u64;
            }
        }
        total += count as u128;
    }
    Ok(total)
}

/// `max delta(a, b)` over every admissible `a` and every `b`.
pub fn full_uniformity(config: &DiffConfig) -> Result<u64> {
    let field = config.field;
    let q = field.q();
    field.limits().check(BudgetKind::FullUniformity, q)?;
    let pow: Vec<u32> = (0..q).map(|x| field.pow_raw(x, config.d) as u32).collect();
    let cpow: Vec<u64> = pow
        .iter()
        .map(|&y| field.mul_raw(config.c.rank(), y as u64))
        .collect();
    let mut hist = vec![0u32; q as usize];
    let mut best = 0u32;
    let first_a = if config.classical { 1 } else { 0 };
    for a in first_a..q {
        hist.iter_mut().for_each(|h| *h = 0);
        for x in 0..q {
            let shifted = pow[field.add_raw(x, a) as usize] as u64;
            let b = field.sub_raw(shifted, cpow[x as usize]);
            hist[b as usize] += 1;
        }
        best = best.max(*hist.iter().max().unwrap());
    }
    Ok(best as u64)
}

/// Membership census for the four character-condition sets that classify
/// the solutions of `(x + 1)^d + x^d = b` when q = 3 mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DSetReport {
    /// eta(2b - 1) = eta(2b - 2) = 1
    pub d1: u64,
    /// eta(2b - 2) = 1, eta(2b + 2) = -1
    pub d2: u64,
    /// eta(2b - 2) = -1, eta(2b + 2) = 1
    pub d3: u64,
    /// eta(2b + 1) = eta(2b + 2) = -1
    pub d4: u64,
    pub d1_d2_d4: u64,
    pub d1_d2_minus_d4: u64,
    pub d2_d4_minus_d1: u64,
    /// |D3 & (D1 | D2 | D4)|, expected empty.
    pub d3_overlap: u64,
    /// `cyclotomic[i][j]`: x outside {0, -1} with x in class i and x + 1 in
    /// class j (0 = squares, 1 = nonsquares).
    pub cyclotomic: [[u64; 2]; 2],
}

impl DSetReport {
    pub fn cyclotomic_total(&self) -> u64 {
        self.cyclotomic.iter().flatten().sum()
    }
}

pub fn d_set_report(field: &FieldCtx) -> Result<DSetReport> {
    if field.p() == 3 {
        return Err(Error::CharacteristicThree);
    }
    if field.p() < 5 {
        return Err(Error::CharacteristicTooSmall(field.p()));
    }
    if Residue::of(field.q()) != Residue::ThreeMod4 {
        return Err(Error::WrongResidue {
            expected: Residue::ThreeMod4,
            q: field.q(),
        });
    }
    field.limits().check(BudgetKind::BruteForce, field.q())?;
    let two = field.from_int(2);
    let ones: [FieldElement; 4] = [
        field.from_int(-1),
        field.from_int(-2),
        field.one(),
        field.from_int(2),
    ];
    let mut r = DSetReport::default();
    for b in field.elements() {
        let tb = field.mul(two, b);
        // eta(2b - 1), eta(2b - 2), eta(2b + 1), eta(2b + 2)
        let [m1, m2, p1, p2] = ones.map(|k| field.eta(field.add(tb, k)));
        let in1 = m1 == Sign::Plus && m2 == Sign::Plus;
        let in2 = m2 == Sign::Plus && p2 == Sign::Minus;
        let in3 = m2 == Sign::Minus && p2 == Sign::Plus;
        let in4 = p1 == Sign::Minus && p2 == Sign::Minus;
        r.d1 += in1 as u64;
        r.d2 += in2 as u64;
        r.d3 += in3 as u64;
        r.d4 += in4 as u64;
        r.d1_d2_d4 += (in1 && in2 && in4) as u64;
        r.d1_d2_minus_d4 += (in1 && in2 && !in4) as u64;
        r.d2_d4_minus_d1 += (in2 && in4 && !in1) as u64;
        r.d3_overlap += (in3 && (in1 || in2 || in4)) as u64;
    }
    let minus_one = field.from_int(-1);
    for x in field.elements() {
        if x == field.zero() || x == minus_one {
            continue;
        }
        let i = (field.eta(x) == Sign::Minus) as usize;
        let j = (field.eta(field.add(x, field.one())) == Sign::Minus) as usize;
        r.cyclotomic[i][j] += 1;
    }
    Ok(r)
}
