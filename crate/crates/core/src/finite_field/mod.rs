//! Exact arithmetic in F_{p^n} for odd p.
//!
//! An element is stored as its *rank*: the position of its coefficient
//! sequence `(a_0, ..., a_{n-1})` (constant term first) in lexicographic
//! order. Rank 0 is zero, enumeration is simply `0..q`, and comparing ranks is
//! comparing coefficient sequences. Multiplication reduces modulo a monic
//! irreducible polynomial fixed at construction.

mod poly;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;
use core::ops::Mul;

use crate::error::{BudgetKind, Error, Result};
use crate::num::{checked_pow, is_prime};

/// Largest degree representable below [`HARD_MAX_Q`] (3^20 < 2^32 < 3^21).
pub const MAX_DEGREE: usize = 20;

/// Ranks must fit the `u32` lookup tables used by the enumeration code.
pub const HARD_MAX_Q: u64 = u32::MAX as u64;

/// Size limits consulted by every operation that enumerates the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest q accepted by field construction.
    pub max_q: u64,
    /// A square table is built when q is at most this.
    pub square_table_max: u64,
    /// Full enumeration: character sums and spectra, O(q log d).
    pub brute_force_max: u64,
    /// Direct N4 count, O(q^3).
    pub n4_max: u64,
    /// Maximum over every (a, b), O(q^2).
    pub full_uniformity_max: u64,
    /// Spectrum for every multiplier c, O(q^2).
    pub c_bound_max: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_q: 1 << 31,
            square_table_max: 1 << 22,
            brute_force_max: 1 << 22,
            n4_max: 512,
            full_uniformity_max: 1 << 16,
            c_bound_max: 1 << 12,
        }
    }
}

impl Limits {
    pub(crate) fn check(&self, kind: BudgetKind, q: u64) -> Result<()> {
        let limit = match kind {
            BudgetKind::FieldSize => self.max_q,
            BudgetKind::BruteForce => self.brute_force_max,
            BudgetKind::N4 => self.n4_max,
            BudgetKind::FullUniformity => self.full_uniformity_max,
            BudgetKind::CBound => self.c_bound_max,
        };
        if q > limit {
            Err(Error::BudgetExceeded { kind, q, limit })
        } else {
            Ok(())
        }
    }
}

/// Value of the quadratic character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Zero => 0,
            Sign::Plus => 1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            -1 => Some(Sign::Minus),
            0 => Some(Sign::Zero),
            1 => Some(Sign::Plus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_value(self.value() * rhs.value()).unwrap()
    }
}

/// One element of a particular [`FieldCtx`].
///
/// Equality and ordering compare coefficient sequences lexicographically.
/// The tag identifies the owning field so mixed-field arithmetic is caught.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    rank: u64,
    tag: u32,
}

impl FieldElement {
    /// Lexicographic index of the coefficient sequence, in `0..q`.
    pub fn rank(self) -> u64 {
        self.rank
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A constructed field F_{p^n}. Immutable once built.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u64,
    n: u32,
    q: u64,
    /// Monic, constant term first, length n + 1.
    modulus: Vec<u64>,
    /// Weight of coefficient i in the rank, p^(n-1-i).
    weights: Vec<u64>,
    tag: u32,
    limits: Limits,
    squares: Option<Vec<u64>>,
    nonsquare: u64,
}

/// Builds F_{p^n} with the default [`Limits`].
pub fn make_field(p: u64, n: u32, modulus: Option<&[u64]>) -> Result<FieldCtx> {
    FieldCtx::new(p, n, modulus, Limits::default())
}

impl FieldCtx {
    /// Builds F_{p^n}. Without an explicit modulus the lexicographically
    /// smallest monic irreducible of degree `n` is used (`x` when `n = 1`).
    pub fn new(p: u64, n: u32, modulus: Option<&[u64]>, limits: Limits) -> Result<FieldCtx> {
        if p.is_multiple_of(2) {
            return Err(Error::EvenCharacteristic(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = checked_pow(p, n).ok_or(Error::Overflow("q = p^n"))?;
        let max_q = limits.max_q.min(HARD_MAX_Q);
        if q > max_q {
            return Err(Error::BudgetExceeded {
                kind: BudgetKind::FieldSize,
                q,
                limit: max_q,
            });
        }
        if n as usize > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(n));
        }

        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 {
                    return Err(Error::ModulusWrongDegree {
                        expected: n,
                        found: m.len().saturating_sub(1),
                    });
                }
                if let Some(&bad) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::CoefficientOutOfRange { value: bad, p });
                }
                if m[n as usize] != 1 {
                    return Err(Error::ModulusNotMonic);
                }
                if !poly::is_irreducible(m, p) {
                    return Err(Error::ModulusReducible);
                }
                m.to_vec()
            }
            None => poly::smallest_irreducible(p, n),
        };

        let weights = (0..n).map(|i| p.pow(n - 1 - i)).collect();
        let tag = field_tag(p, n, &modulus);
        let mut ctx = FieldCtx {
            p,
            n,
            q,
            modulus,
            weights,
            tag,
            limits,
            squares: None,
            nonsquare: 0,
        };
        if q <= limits.square_table_max {
            ctx.squares = Some(ctx.build_square_table());
        }
        ctx.nonsquare = (1..q)
            .find(|&r| ctx.eta_raw(r) == Sign::Minus)
            .expect("odd q has nonsquares");
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn has_square_table(&self) -> bool {
        self.squares.is_some()
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(self.weights[0])
    }

    /// Image of an integer under Z -> F_p -> F_{p^n}.
    pub fn from_int(&self, k: i64) -> FieldElement {
        self.wrap(self.int_raw(k))
    }

    /// Element with the given coefficients, constant term first. Missing
    /// high coefficients are zero.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.n as usize {
            return Err(Error::ModulusWrongDegree {
                expected: self.n,
                found: coeffs.len(),
            });
        }
        let mut rank = 0u64;
        for i in 0..self.n as usize {
            let c = coeffs.get(i).copied().unwrap_or(0);
            if c >= self.p {
                return Err(Error::CoefficientOutOfRange {
                    value: c,
                    p: self.p,
                });
            }
            rank += c * self.weights[i];
        }
        Ok(self.wrap(rank))
    }

    /// The element of the given rank, if `rank < q`.
    pub fn from_rank(&self, rank: u64) -> Option<FieldElement> {
        (rank < self.q).then(|| self.wrap(rank))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        self.check(x);
        self.digits(x.rank)[..self.n as usize].to_vec()
    }

    /// `"3"` in a prime field, `"a0,a1,...,a{n-1}"` otherwise.
    pub fn format(&self, x: FieldElement) -> String {
        let mut s = String::new();
        for (i, c) in self.coeffs(x).iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{c}");
        }
        s
    }

    /// Every element once, in rank order starting at zero.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |r| self.wrap(r))
    }

    pub fn belongs(&self, x: FieldElement) -> bool {
        x.tag == self.tag && x.rank < self.q
    }

    /// Arithmetic that reports mixed-field operands and zero divisors as
    /// errors instead of panicking.
    pub fn arith(&self, a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement> {
        if !self.belongs(a) || !self.belongs(b) {
            return Err(Error::MixedFields);
        }
        Ok(match op {
            ArithOp::Add => self.wrap(self.add_raw(a.rank, b.rank)),
            ArithOp::Sub => self.wrap(self.sub_raw(a.rank, b.rank)),
            ArithOp::Mul => self.wrap(self.mul_raw(a.rank, b.rank)),
            ArithOp::Div => return self.div(a, b),
        })
    }

    /// # Panics
    /// If either operand belongs to another field; see [`FieldCtx::arith`].
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.wrap(self.add_raw(a.rank, b.rank))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.wrap(self.sub_raw(a.rank, b.rank))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        self.wrap(self.neg_raw(a.rank))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.wrap(self.mul_raw(a.rank, b.rank))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        self.check(a);
        self.wrap(self.pow_raw(a.rank, k))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if !self.belongs(a) {
            return Err(Error::MixedFields);
        }
        if a.rank == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.wrap(self.inv_raw(a.rank)))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        if !self.belongs(a) {
            return Err(Error::MixedFields);
        }
        let b_inv = self.inv(b)?;
        Ok(self.wrap(self.mul_raw(a.rank, b_inv.rank)))
    }

    /// Quadratic character, from the square table when one was built.
    pub fn eta(&self, x: FieldElement) -> Sign {
        self.check(x);
        self.eta_raw(x.rank)
    }

    /// Quadratic character as x^((q-1)/2), never consulting the table.
    pub fn eta_by_power(&self, x: FieldElement) -> Sign {
        self.check(x);
        self.eta_pow_raw(x.rank)
    }

    /// Quadratic character from the square table, if there is one.
    pub fn eta_by_table(&self, x: FieldElement) -> Option<Sign> {
        self.check(x);
        self.squares.as_ref().map(|t| self.eta_table_raw(t, x.rank))
    }

    /// The square root with the lexicographically smaller coefficient
    /// sequence. Tonelli-Shanks against the first nonsquare in rank order,
    /// or a single power when q = 3 mod 4.
    pub fn sqrt(&self, x: FieldElement) -> Result<FieldElement> {
        self.check(x);
        if x.rank == 0 {
            return Ok(x);
        }
        if self.eta_raw(x.rank) == Sign::Minus {
            return Err(Error::NotASquare);
        }
        let one = self.weights[0];
        let q = self.q;
        let r = if q % 4 == 3 {
            self.pow_raw(x.rank, (q + 1) / 4)
        } else {
            let s = (q - 1).trailing_zeros();
            let t = (q - 1) >> s;
            let mut m = s;
            let mut c = self.pow_raw(self.nonsquare, t);
            let mut tt = self.pow_raw(x.rank, t);
            let mut r = self.pow_raw(x.rank, t.div_ceil(2));
            while tt != one {
                let mut i = 0;
                let mut probe = tt;
                while probe != one {
                    probe = self.mul_raw(probe, probe);
                    i += 1;
                }
                let mut b = c;
                for _ in 0..(m - i - 1) {
                    b = self.mul_raw(b, b);
                }
                m = i;
                c = self.mul_raw(b, b);
                tt = self.mul_raw(tt, c);
                r = self.mul_raw(r, b);
            }
            r
        };
        if self.mul_raw(r, r) != x.rank {
            return Err(Error::InvariantViolated("square root does not square back"));
        }
        Ok(self.wrap(r.min(self.neg_raw(r))))
    }

    /// Integer-coefficient polynomial (constant term first) mapped into the field.
    pub fn poly_from_ints(&self, coeffs: &[i64]) -> Vec<FieldElement> {
        coeffs.iter().map(|&k| self.from_int(k)).collect()
    }

    pub fn poly_mul(&self, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            self.check(x);
            for (j, &y) in b.iter().enumerate() {
                self.check(y);
                out[i + j] = self.add_raw(out[i + j], self.mul_raw(x.rank, y.rank));
            }
        }
        out.into_iter().map(|r| self.wrap(r)).collect()
    }

    /// Product of integer-coefficient factors, each constant term first.
    pub fn poly_product(&self, factors: &[&[i64]]) -> Vec<FieldElement> {
        factors.iter().fold(alloc::vec![self.one()], |acc, f| {
            self.poly_mul(&acc, &self.poly_from_ints(f))
        })
    }

    pub fn poly_eval(&self, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
        self.check(x);
        let ranks: Vec<u64> = coeffs
            .iter()
            .map(|&c| {
                self.check(c);
                c.rank
            })
            .collect();
        self.wrap(self.poly_eval_raw(&ranks, x.rank))
    }

    pub(crate) fn poly_eval_raw(&self, coeffs: &[u64], x: u64) -> u64 {
        coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| self.add_raw(self.mul_raw(acc, x), c))
    }

    fn wrap(&self, rank: u64) -> FieldElement {
        FieldElement {
            rank,
            tag: self.tag,
        }
    }

    fn check(&self, x: FieldElement) {
        assert!(
            self.belongs(x),
            "element does not belong to F_{}^{}",
            self.p,
            self.n
        );
    }

    fn build_square_table(&self) -> Vec<u64> {
        let mut bits = vec![0u64; (self.q as usize).div_ceil(64)];
        for r in 1..self.q {
            let s = self.mul_raw(r, r) as usize;
            bits[s / 64] |= 1 << (s % 64);
        }
        bits
    }

    // Rank-level arithmetic. Callers guarantee ranks are below q.

    pub(crate) fn int_raw(&self, k: i64) -> u64 {
        (k.rem_euclid(self.p as i64) as u64) * self.weights[0]
    }

    fn digits(&self, mut r: u64) -> [u64; MAX_DEGREE] {
        let mut d = [0u64; MAX_DEGREE];
        for i in (0..self.n as usize).rev() {
            d[i] = r % self.p;
            r /= self.p;
        }
        d
    }

    fn compose(&self, d: &[u64]) -> u64 {
        d[..self.n as usize]
            .iter()
            .fold(0u64, |acc, &c| acc * self.p + c)
    }

    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        if self.n == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut w = 1u64;
        let mut out = 0u64;
        for _ in 0..self.n {
            let s = a % p + b % p;
            out += if s >= p { s - p } else { s } * w;
            a /= p;
            b /= p;
            w *= p;
        }
        out
    }

    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        let p = self.p;
        if self.n == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut w = 1u64;
        let mut out = 0u64;
        for _ in 0..self.n {
            let c = a % p;
            out += if c == 0 { 0 } else { p - c } * w;
            a /= p;
            w *= p;
        }
        out
    }

    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        self.add_raw(a, self.neg_raw(b))
    }

    /// x + 1, touching only the constant coefficient.
    pub(crate) fn succ_raw(&self, a: u64) -> u64 {
        let w = self.weights[0];
        if a / w == self.p - 1 {
            a - (self.p - 1) * w
        } else {
            a + w
        }
    }

    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        if self.n == 1 {
            return a * b % p;
        }
        let n = self.n as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        // p < 2^16 whenever n >= 2, so these sums stay far below 2^64.
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            if da[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] += da[i] * db[j];
            }
        }
        // x^n = -(m_0 + m_1 x + ... + m_{n-1} x^{n-1})
        for k in (n..2 * n - 1).rev() {
            let t = prod[k] % p;
            if t == 0 {
                continue;
            }
            for i in 0..n {
                prod[k - n + i] += t * (p - self.modulus[i]);
            }
        }
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..n {
            out[i] = prod[i] % p;
        }
        self.compose(&out)
    }

    pub(crate) fn pow_raw(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = self.weights[0];
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul_raw(b, b);
            }
        }
        acc
    }

    pub(crate) fn inv_raw(&self, a: u64) -> u64 {
        self.pow_raw(a, self.q - 2)
    }

    pub(crate) fn eta_raw(&self, r: u64) -> Sign {
        match &self.squares {
            Some(t) => self.eta_table_raw(t, r),
            None => self.eta_pow_raw(r),
        }
    }

    fn eta_pow_raw(&self, r: u64) -> Sign {
        if r == 0 {
            Sign::Zero
        } else if self.pow_raw(r, (self.q - 1) / 2) == self.weights[0] {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    fn eta_table_raw(&self, t: &[u64], r: u64) -> Sign {
        if r == 0 {
            Sign::Zero
        } else if (t[(r / 64) as usize] >> (r % 64)) & 1 == 1 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

fn field_tag(p: u64, n: u32, modulus: &[u64]) -> u32 {
    const OFFSET: u32 = 0x811c_9dc5;
    const PRIME: u32 = 0x0100_0193;
    let mut h = OFFSET;
    for word in [p, n as u64].iter().chain(modulus) {
        for byte in word.to_le_bytes() {
            h ^= byte as u32;
            h = h.wrapping_mul(PRIME);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = make_field(7, 1, None).unwrap();
        assert_eq!(f.modulus(), [0, 1]);
        let three = f.from_int(3);
        assert_eq!(f.pow(three, 5), f.from_int(5));
        assert_eq!(f.from_int(-1), f.from_int(6));
        let ranks: Vec<u64> = make_field(5, 1, None)
            .unwrap()
            .elements()
            .map(|x| x.rank())
            .collect();
        assert_eq!(ranks, [0, 1, 2, 3, 4]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            make_field(4, 1, None).unwrap_err(),
            Error::EvenCharacteristic(4)
        );
        assert_eq!(make_field(9, 1, None).unwrap_err(), Error::NotPrime(9));
        assert_eq!(make_field(7, 0, None).unwrap_err(), Error::ZeroDegree);
        assert_eq!(
            make_field(7, 2, Some(&[6, 0, 1])).unwrap_err(),
            Error::ModulusReducible
        );
        assert_eq!(
            make_field(7, 2, Some(&[1, 0, 2])).unwrap_err(),
            Error::ModulusNotMonic
        );
        assert!(matches!(
            make_field(7, 2, Some(&[1, 1])),
            Err(Error::ModulusWrongDegree { .. })
        ));
        assert!(matches!(
            make_field(65521, 2, None),
            Err(Error::BudgetExceeded {
                kind: BudgetKind::FieldSize,
                ..
            })
        ));
    }

    #[test]
    fn x_squared_plus_x_plus_one_over_f5_is_accepted() {
        // No roots in F_5: values at 0..5 are 1, 3, 2, 3, 1.
        let f = make_field(5, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f.q(), 25);
    }

    #[test]
    fn division_and_mixed_fields() {
        let f = make_field(7, 2, None).unwrap();
        let g = make_field(11, 1, None).unwrap();
        assert_eq!(f.inv(f.zero()).unwrap_err(), Error::DivisionByZero);
        assert_eq!(
            f.arith(f.one(), g.one(), ArithOp::Add).unwrap_err(),
            Error::MixedFields
        );
        assert_eq!(
            f.arith(f.one(), f.zero(), ArithOp::Div).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn sqrt_tie_break_and_nonsquares() {
        let f = make_field(7, 1, None).unwrap();
        assert_eq!(f.sqrt(f.from_int(4)).unwrap(), f.from_int(2));
        assert_eq!(f.sqrt(f.one()).unwrap(), f.one());
        assert_eq!(f.sqrt(f.from_int(3)).unwrap_err(), Error::NotASquare);
        let g = make_field(13, 1, None).unwrap();
        // 13 = 1 mod 4 exercises Tonelli-Shanks; roots of -1 are 5 and 8.
        assert_eq!(g.sqrt(g.from_int(-1)).unwrap(), g.from_int(5));
    }

    #[test]
    fn eta_paths_agree_without_table() {
        let limits = Limits {
            square_table_max: 0,
            ..Limits::default()
        };
        let f = FieldCtx::new(5, 3, None, limits).unwrap();
        assert!(!f.has_square_table());
        let g = make_field(5, 3, None).unwrap();
        for (a, b) in f.elements().zip(g.elements()) {
            assert_eq!(f.eta(a), g.eta_by_table(b).unwrap());
        }
    }

    #[test]
    fn format_lists_coefficients() {
        let f = make_field(7, 3, None).unwrap();
        let x = f.from_coeffs(&[1, 2]).unwrap();
        assert_eq!(f.format(x), "1,2,0");
        assert_eq!(
            f.from_coeffs(&[7]).unwrap_err(),
            Error::CoefficientOutOfRange { value: 7, p: 7 }
        );
    }
}
