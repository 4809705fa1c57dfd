//! Quadratic character sums over F_{p^n}.
//!
//! The two cubic sums
//!
//! ```text
//! lambda1(p, n) = sum_x eta(x (x + 1) (x - 3))
//! lambda2(p, n) = sum_x eta(x (x + 1) (x - 2))
//! ```
//!
//! are Frobenius traces of elliptic curves defined over F_p, so they are
//! evaluated over the prime field once and lifted to F_{p^n} with the integer
//! recurrence `s_k = -lambda(p,1) s_{k-1} - p s_{k-2}`, `lambda(p,n) = -s_n`.
//! [`eta_sum_poly`] is the brute-force reference every closed form here is
//! tested against.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{BudgetKind, Error, Residue, Result};
use crate::finite_field::{FieldCtx, FieldElement, Limits};
use crate::num::{checked_pow, is_prime, legendre};

/// One of the two curves `y^2 = x (x + 1) (x - r)` with `r = 3` or `r = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveId {
    /// `x (x + 1) (x - 3)`
    Curve1,
    /// `x (x + 1) (x - 2)`
    Curve2,
}

impl CurveId {
    pub const ALL: [CurveId; 2] = [CurveId::Curve1, CurveId::Curve2];

    fn root(self) -> i64 {
        match self {
            CurveId::Curve1 => 3,
            CurveId::Curve2 => 2,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            CurveId::Curve1 => 1,
            CurveId::Curve2 => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<CurveId> {
        match i {
            1 => Some(CurveId::Curve1),
            2 => Some(CurveId::Curve2),
            _ => None,
        }
    }

    /// The defining cubic with integer coefficients embedded in `field`.
    pub fn polynomial(self, field: &FieldCtx) -> Vec<FieldElement> {
        field.poly_product(&[&[0, 1], &[1, 1], &[-self.root(), 1]])
    }
}

/// Base trace of a curve over F_p and its lift to F_{p^n}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveTrace {
    pub curve: CurveId,
    pub p: u64,
    pub n: u32,
    pub lambda_p1: i64,
    pub lambda_pn: i64,
    /// `s_k = alpha^k + beta^k` for `k = 0..=n`.
    pub s_sequence: Vec<i64>,
}

impl CurveTrace {
    /// `4 p^n - lambda_pn^2`; nonnegative exactly when the Hasse bound holds.
    pub fn hasse_slack(&self) -> Result<i128> {
        let q = checked_pow(self.p, self.n).ok_or(Error::Overflow("p^n"))? as i128;
        let l = self.lambda_pn as i128;
        Ok(4 * q - l * l)
    }

    /// Rational points over F_{p^n} including the point at infinity.
    pub fn point_count(&self) -> Result<i128> {
        let q = checked_pow(self.p, self.n).ok_or(Error::Overflow("p^n"))? as i128;
        Ok(q + 1 + self.lambda_pn as i128)
    }
}

/// `sum_x eta(a2 x^2 + a1 x + a0)` from the discriminant alone.
pub fn eta_sum_quadratic(
    a2: FieldElement,
    a1: FieldElement,
    a0: FieldElement,
    field: &FieldCtx,
) -> Result<i64> {
    let disc = discriminant(a2, a1, a0, field)?;
    let e = field.eta(a2).value();
    if disc == field.zero() {
        Ok((field.q() as i64 - 1) * e)
    } else {
        Ok(-e)
    }
}

/// Number of roots of `a2 x^2 + a1 x + a0`, i.e. `1 + eta(discriminant)`.
pub fn quadratic_root_count(
    a2: FieldElement,
    a1: FieldElement,
    a0: FieldElement,
    field: &FieldCtx,
) -> Result<u32> {
    let disc = discriminant(a2, a1, a0, field)?;
    Ok((1 + field.eta(disc).value()) as u32)
}

fn discriminant(
    a2: FieldElement,
    a1: FieldElement,
    a0: FieldElement,
    field: &FieldCtx,
) -> Result<FieldElement> {
    if ![a2, a1, a0].iter().all(|&x| field.belongs(x)) {
        return Err(Error::MixedFields);
    }
    if a2 == field.zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let four = field.from_int(4);
    Ok(field.sub(field.mul(a1, a1), field.mul(four, field.mul(a0, a2))))
}

/// `sum_x eta(f(x))` by enumerating the whole field.
pub fn eta_sum_poly(coeffs: &[FieldElement], field: &FieldCtx) -> Result<i64> {
    field.limits().check(BudgetKind::BruteForce, field.q())?;
    if !coeffs.iter().all(|&c| field.belongs(c)) {
        return Err(Error::MixedFields);
    }
    let ranks: Vec<u64> = coeffs.iter().map(|c| c.rank()).collect();
    Ok((0..field.q())
        .map(|x| field.eta_raw(field.poly_eval_raw(&ranks, x)).value())
        .sum())
}

fn check_characteristic(p: u64) -> Result<()> {
    if p == 3 {
        return Err(Error::CharacteristicThree);
    }
    if p < 5 {
        return Err(Error::CharacteristicTooSmall(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// `lambda(p, 1)` by direct summation over F_p.
pub fn lambda_base(curve: CurveId, p: u64) -> Result<i64> {
    check_characteristic(p)?;
    Limits::default().check(BudgetKind::BruteForce, p)?;
    let r = curve.root() as u64;
    let pp = p as u128;
    Ok((0..p)
        .map(|x| {
            let x = x as u128;
            let v = x * (x + 1) % pp * ((x + pp - r as u128) % pp) % pp;
            legendre(v as i64, p)
        })
        .sum())
}

/// Lifts the base trace to F_{p^n}.
pub fn lambda_lift(curve: CurveId, p: u64, n: u32) -> Result<CurveTrace> {
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    let lambda_p1 = lambda_base(curve, p)?;
    let overflow = Error::Overflow("trace recurrence");
    let mut s: Vec<i128> = vec![2, -(lambda_p1 as i128)];
    for k in 2..=n as usize {
        let a = (lambda_p1 as i128)
            .checked_mul(s[k - 1])
            .ok_or(overflow.clone())?;
        let b = (p as i128).checked_mul(s[k - 2]).ok_or(overflow.clone())?;
        s.push(
            a.checked_neg()
                .and_then(|a| a.checked_sub(b))
                .ok_or(overflow.clone())?,
        );
    }
    s.truncate(n as usize + 1);
    let s_sequence = s
        .iter()
        .map(|&v| i64::try_from(v).map_err(|_| overflow.clone()))
        .collect::<Result<Vec<i64>>>()?;
    let trace = CurveTrace {
        curve,
        p,
        n,
        lambda_p1,
        lambda_pn: -s_sequence[n as usize],
        s_sequence,
    };
    if trace.hasse_slack()? < 0 || (lambda_p1 as i128).pow(2) > 4 * p as i128 {
        return Err(Error::InvariantViolated("Hasse bound"));
    }
    if trace.point_count()? < 0 {
        return Err(Error::InvariantViolated("negative point count"));
    }
    Ok(trace)
}

/// Whether an identity has a derivation behind it or rests on this
/// numerical check alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    Derived,
    NumericOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub label: &'static str,
    pub lhs: i64,
    pub rhs: i64,
    pub support: Support,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub p: u64,
    pub n: u32,
    pub lambda1: i64,
    pub lambda2: i64,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(IdentityCheck::holds)
    }
}

fn identity_preconditions(field: &FieldCtx, expected: Residue) -> Result<(i64, i64)> {
    check_characteristic(field.p())?;
    if Residue::of(field.q()) != expected {
        return Err(Error::WrongResidue {
            expected,
            q: field.q(),
        });
    }
    field.limits().check(BudgetKind::BruteForce, field.q())?;
    let l1 = lambda_lift(CurveId::Curve1, field.p(), field.n())?.lambda_pn;
    let l2 = lambda_lift(CurveId::Curve2, field.p(), field.n())?.lambda_pn;
    Ok((l1, l2))
}

fn run_checks(
    field: &FieldCtx,
    items: &[(&'static str, &[&[i64]], i64, Support)],
) -> Result<Vec<IdentityCheck>> {
    items
        .iter()
        .map(|&(label, factors, rhs, support)| {
            let lhs = eta_sum_poly(&field.poly_product(factors), field)?;
            Ok(IdentityCheck {
                label,
                lhs,
                rhs,
                support,
            })
        })
        .collect()
}

/// The five cubic/quartic sums that reduce to the curve traces when
/// q = 3 mod 4.
pub fn trace_identities_3mod4(field: &FieldCtx) -> Result<IdentityReport> {
    let (l1, l2) = identity_preconditions(field, Residue::ThreeMod4)?;
    const A: &[i64] = &[-2, 2]; // 2x - 2
    const B: &[i64] = &[-1, 2]; // 2x - 1
    const C: &[i64] = &[1, 2]; // 2x + 1
    const D: &[i64] = &[2, 2]; // 2x + 2
    let checks = run_checks(
        field,
        &[
            ("(2x-2)(2x+1)(2x+2) = l1", &[A, C, D], l1, Support::Derived),
            (
                "(2x-2)(2x-1)(2x+2) = -l1",
                &[A, B, D],
                -l1,
                Support::Derived,
            ),
            (
                "(2x-2)(2x-1)(2x+1)(2x+2) = l1 - 1",
                &[A, B, C, D],
                l1 - 1,
                Support::Derived,
            ),
            (
                "(2x-1)(2x+1)(2x+2) = l2",
                &[B, C, D],
                l2,
                Support::NumericOnly,
            ),
            (
                "(2x-2)(2x-1)(2x+1) = -l2",
                &[A, B, C],
                -l2,
                Support::Derived,
            ),
        ],
    )?;
    Ok(IdentityReport {
        p: field.p(),
        n: field.n(),
        lambda1: l1,
        lambda2: l2,
        checks,
    })
}

/// The six sums over `x^2 + x + 1` and `3x^2 + 2x + 3` used for N4 when
/// q = 1 mod 4.
pub fn trace_identities_1mod4(field: &FieldCtx) -> Result<IdentityReport> {
    let (l1, l2) = identity_preconditions(field, Residue::OneMod4)?;
    let eta3 = field.eta(field.from_int(3)).value();
    const X: &[i64] = &[0, 1];
    const X1: &[i64] = &[1, 1];
    const T: &[i64] = &[1, 1, 1]; // x^2 + x + 1
    const U: &[i64] = &[3, 2, 3]; // 3x^2 + 2x + 3
    const XX1: &[i64] = &[0, 1, 1]; // x^2 + x
    let n = Support::NumericOnly;
    let checks = run_checks(
        field,
        &[
            ("x(x^2+x+1) = l1", &[X, T], l1, n),
            ("(x+1)(x^2+x+1) = l1", &[X1, T], l1, n),
            ("(x^2+x)(x^2+x+1) = l1 - 1", &[XX1, T], l1 - 1, n),
            ("x(3x^2+2x+3) = l2", &[X, U], l2, n),
            ("(x^2+x+1)(3x^2+2x+3) = l2 - eta(3)", &[T, U], l2 - eta3, n),
            ("x(x^2+x+1)(3x^2+2x+3) = 2 l1", &[X, T, U], 2 * l1, n),
        ],
    )?;
    Ok(IdentityReport {
        p: field.p(),
        n: field.n(),
        lambda1: l1,
        lambda2: l2,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::make_field;

    #[test]
    fn quadratic_closed_form_examples() {
        let f = make_field(7, 1, None).unwrap();
        let (z, o) = (f.zero(), f.one());
        assert_eq!(eta_sum_quadratic(o, z, z, &f).unwrap(), 6);
        assert_eq!(eta_sum_quadratic(o, z, o, &f).unwrap(), -1);
        assert_eq!(
            eta_sum_quadratic(z, o, o, &f).unwrap_err(),
            Error::ZeroLeadingCoefficient
        );
    }

    #[test]
    fn root_counts_over_f7() {
        let f = make_field(7, 1, None).unwrap();
        let (z, o) = (f.zero(), f.one());
        assert_eq!(quadratic_root_count(o, z, f.from_int(-1), &f).unwrap(), 2);
        assert_eq!(quadratic_root_count(o, z, z, &f).unwrap(), 1);
        assert_eq!(quadratic_root_count(o, z, o, &f).unwrap(), 0);
    }

    #[test]
    fn constant_polynomial_sum() {
        let f = make_field(11, 1, None).unwrap();
        for k in 1..11 {
            let c = f.from_int(k);
            assert_eq!(eta_sum_poly(&[c], &f).unwrap(), 11 * f.eta(c).value());
        }
    }

    #[test]
    fn base_traces() {
        assert_eq!(lambda_base(CurveId::Curve1, 5).unwrap(), 2);
        assert_eq!(lambda_base(CurveId::Curve2, 13).unwrap(), 2);
        // Over F_5 only x = 1 and x = 3 give nonzero values, both nonsquares.
        assert_eq!(lambda_base(CurveId::Curve2, 5).unwrap(), -2);
        assert_eq!(
            lambda_base(CurveId::Curve1, 3).unwrap_err(),
            Error::CharacteristicThree
        );
        assert_eq!(
            lambda_base(CurveId::Curve1, 2).unwrap_err(),
            Error::CharacteristicTooSmall(2)
        );
        assert_eq!(
            lambda_base(CurveId::Curve1, 9).unwrap_err(),
            Error::NotPrime(9)
        );
    }

    #[test]
    fn lift_over_f25() {
        let t = lambda_lift(CurveId::Curve1, 5, 2).unwrap();
        assert_eq!(t.s_sequence, [2, -2, -6]);
        assert_eq!(t.lambda_pn, 6);
        let f = make_field(5, 2, None).unwrap();
        assert_eq!(
            eta_sum_poly(&CurveId::Curve1.polynomial(&f), &f).unwrap(),
            6
        );
        assert_eq!(t.point_count().unwrap(), 32);
    }

    #[test]
    fn identity_residue_gates() {
        let f13 = make_field(13, 1, None).unwrap();
        let f7 = make_field(7, 1, None).unwrap();
        assert!(matches!(
            trace_identities_3mod4(&f13),
            Err(Error::WrongResidue { .. })
        ));
        assert!(matches!(
            trace_identities_1mod4(&f7),
            Err(Error::WrongResidue { .. })
        ));
        assert!(trace_identities_3mod4(&f7).unwrap().all_hold());
        assert!(trace_identities_1mod4(&f13).unwrap().all_hold());
    }
}
