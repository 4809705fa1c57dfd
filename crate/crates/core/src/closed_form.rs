//! Closed-form (-1)-differential spectra of `x^((q+3)/2)` and the harness
//! that checks them against brute force.
//!
//! Writing `l1 = lambda1(p, n)` and `l2 = lambda2(p, n)`:
//!
//! For q = 3 mod 4
//!
//! ```text
//! omega0 = (q + l1 + 1) / 4
//! omega1 = (9q - 5 l1 + 2 l2 - 7) / 16
//! omega2 = (q - l1 - 2 l2 + 1) / 8
//! omega3 = (q + 3 l1 + 2 l2 + 1) / 16
//! ```
//!
//! For q = 1 mod 4, with `A = 37q + 7 l1 - 2 l2`, `B = 11q - 7 l1 + 2 l2`,
//! `C = 5q + 7 l1 - 2 l2`, the branch depends on `g = gcd(d, q - 1)` and on
//! whether `b = eta(2)/2` has three solutions (see [`special_b_delta`]):
//!
//! | g | three solutions | omega0     | omega1 | omega2     | omega3 | omega4     |
//! |---|-----------------|------------|--------|------------|--------|------------|
//! | 2 | yes             | (A + 5)/64 | 0      | (B - 21)/32 | 1     | (C - 27)/64 |
//! | 4 | yes             | (A - 11)/64 | 0     | (B - 5)/32 | 1      | (C - 43)/64 |
//! | 2 | no              | (A - 27)/64 | 1     | (B - 21)/32 | 0     | (C + 5)/64 |
//! | 4 | no              | (A - 43)/64 | 1     | (B - 5)/32 | 0      | (C - 11)/64 |
//!
//! Every division must be exact; a remainder is reported as an error.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::char_sum::{
    lambda_lift, trace_identities_1mod4, trace_identities_3mod4, CurveId, CurveTrace,
};
use crate::diff_spectrum::{
    d_set_report, delta_histogram, family_exponent, full_uniformity, n4_bruteforce,
    spectrum_from_table, DiffConfig, PowerTable, SpectrumRecord,
};
use crate::error::{BudgetKind, Error, Residue, Result};
use crate::finite_field::{make_field, FieldCtx, FieldElement, Sign};
use crate::num::{checked_pow, gcd, is_prime};

/// Fields with q = 3 mod 4 on which the function is APcN.
pub const APCN_FIELDS: [u64; 3] = [7, 19, 23];

/// Upper bound on the c-differential uniformity for every `c` other than `1, -1`.
pub const C_UNIFORMITY_BOUND: u64 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BranchId {
    pub residue: Residue,
    /// `gcd(d, q - 1)`: always 1 when q = 3 mod 4, 2 or 4 otherwise.
    pub gcd_value: u64,
    /// `delta(eta(2)/2) = 3`; always false when q = 3 mod 4.
    pub special_condition: bool,
}

impl fmt::Display for BranchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.residue {
            Residue::ThreeMod4 => f.write_str("3mod4"),
            Residue::OneMod4 => {
                let tag = if self.special_condition {
                    "three"
                } else {
                    "one"
                };
                write!(f, "1mod4-g{}-{}", self.gcd_value, tag)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub branch: BranchId,
    /// Predicted `omega[i]`, zero-filled up to index 3 or 4.
    pub omega: Vec<u64>,
    pub predicted_uniformity: u64,
    pub lambda1: CurveTrace,
    pub lambda2: CurveTrace,
}

impl Prediction {
    /// Whether the predicted counts equal `observed`, ignoring trailing zeros.
    pub fn matches(&self, observed: &[u64]) -> bool {
        let len = self.omega.len().max(observed.len());
        (0..len).all(|i| {
            self.omega.get(i).copied().unwrap_or(0) == observed.get(i).copied().unwrap_or(0)
        })
    }
}

fn check_p(p: u64) -> Result<()> {
    if p.is_multiple_of(2) {
        return Err(Error::EvenCharacteristic(p));
    }
    if p == 3 {
        return Err(Error::CharacteristicThree);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::CharacteristicTooSmall(p));
    }
    Ok(())
}

fn field_size(p: u64, n: u32, expected: Residue) -> Result<u64> {
    check_p(p)?;
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    let q = checked_pow(p, n).ok_or(Error::Overflow("q = p^n"))?;
    if Residue::of(q) != expected {
        return Err(Error::WrongResidue { expected, q });
    }
    Ok(q)
}

fn exact_div(what: &'static str, numerator: i128, divisor: i128) -> Result<u64> {
    if numerator % divisor != 0 {
        return Err(Error::InexactDivision {
            what,
            numerator,
            divisor,
        });
    }
    u64::try_from(numerator / divisor)
        .map_err(|_| Error::InvariantViolated("negative predicted count"))
}

fn traces(p: u64, n: u32) -> Result<(CurveTrace, CurveTrace)> {
    Ok((
        lambda_lift(CurveId::Curve1, p, n)?,
        lambda_lift(CurveId::Curve2, p, n)?,
    ))
}

fn check_prediction_sums(omega: &[u64], q: u64) -> Result<()> {
    let count: u128 = omega.iter().map(|&w| w as u128).sum();
    let first: u128 = omega
        .iter()
        .enumerate()
        .map(|(i, &w)| i as u128 * w as u128)
        .sum();
    if count != q as u128 || first != q as u128 {
        return Err(Error::InvariantViolated("predicted counts must sum to q"));
    }
    Ok(())
}

/// Predicted spectrum when q = 3 mod 4.
pub fn predict_3mod4(p: u64, n: u32) -> Result<Prediction> {
    let q = field_size(p, n, Residue::ThreeMod4)?;
    let (t1, t2) = traces(p, n)?;
    let (qi, l1, l2) = (q as i128, t1.lambda_pn as i128, t2.lambda_pn as i128);
    let omega = vec![
        exact_div("omega0", qi + l1 + 1, 4)?,
        exact_div("omega1", 9 * qi - 5 * l1 + 2 * l2 - 7, 16)?,
        exact_div("omega2", qi - l1 - 2 * l2 + 1, 8)?,
        exact_div("omega3", qi + 3 * l1 + 2 * l2 + 1, 16)?,
    ];
    check_prediction_sums(&omega, q)?;
    let predicted_uniformity = omega.iter().rposition(|&w| w > 0).unwrap_or(0) as u64;
    Ok(Prediction {
        branch: BranchId {
            residue: Residue::ThreeMod4,
            gcd_value: 1,
            special_condition: false,
        },
        omega,
        predicted_uniformity,
        lambda1: t1,
        lambda2: t2,
    })
}

/// The quantities deciding whether `b = eta(2)/2` has one or three solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecialDelta {
    /// 1 or 3.
    pub value: u64,
    pub b: FieldElement,
    pub eta2: Sign,
    pub eta3: Sign,
    /// `eta((-1 + r)/2)` for `r = sqrt(-2)`, when `eta(2) = 1`.
    pub eta_special: Option<Sign>,
    /// The same character at the other root `-r`.
    pub eta_special_other_root: Option<Sign>,
}

/// Predicted `delta(eta(2)/2)` for q = 1 mod 4.
pub fn special_b_delta(field: &FieldCtx) -> Result<SpecialDelta> {
    check_p(field.p())?;
    if Residue::of(field.q()) != Residue::OneMod4 {
        return Err(Error::WrongResidue {
            expected: Residue::OneMod4,
            q: field.q(),
        });
    }
    let eta2 = field.eta(field.from_int(2));
    let eta3 = field.eta(field.from_int(3));
    let half = field.inv(field.from_int(2))?;
    let b = field.mul(field.from_int(eta2.value()), half);
    let (eta_special, eta_special_other_root) = if eta2 == Sign::Plus {
        // q = 1 mod 4 gives eta(-2) = eta(2), so the root exists.
        let r = field.sqrt(field.from_int(-2))?;
        let at = |root: FieldElement| {
            let v = field.mul(field.add(field.from_int(-1), root), half);
            field.eta(v)
        };
        (Some(at(r)), Some(at(field.neg(r))))
    } else {
        (None, None)
    };
    let three = match (eta2, eta3) {
        (Sign::Plus, Sign::Plus) => eta_special == Some(Sign::Minus),
        (Sign::Minus, Sign::Minus) => true,
        _ => false,
    };
    Ok(SpecialDelta {
        value: if three { 3 } else { 1 },
        b,
        eta2,
        eta3,
        eta_special,
        eta_special_other_root,
    })
}

/// `N4 = 1 + (q - 1)(21q + 7 l1 - 2 l2 + 13) / 8` for c = -1, q = 1 mod 4.
pub fn n4_closed_form(p: u64, n: u32) -> Result<u128> {
    let q = field_size(p, n, Residue::OneMod4)?;
    let (t1, t2) = traces(p, n)?;
    let inner = 21 * q as i128 + 7 * t1.lambda_pn as i128 - 2 * t2.lambda_pn as i128 + 13;
    let prod = (q as i128 - 1)
        .checked_mul(inner)
        .ok_or(Error::Overflow("N4 closed form"))?;
    let quotient = exact_div("N4", prod, 8)?;
    Ok(1 + quotient as u128)
}

/// Predicted spectrum when q = 1 mod 4, inside a field built with the
/// default modulus.
pub fn predict_1mod4(p: u64, n: u32) -> Result<Prediction> {
    field_size(p, n, Residue::OneMod4)?;
    let field = make_field(p, n, None)?;
    predict_1mod4_in(&field)
}

/// As [`predict_1mod4`], using an already constructed field.
pub fn predict_1mod4_in(field: &FieldCtx) -> Result<Prediction> {
    let (p, n) = (field.p(), field.n());
    let q = field_size(p, n, Residue::OneMod4)?;
    let g = gcd(family_exponent(q), q - 1);
    if g != 2 && g != 4 {
        return Err(Error::InvariantViolated("gcd(d, q - 1) must be 2 or 4"));
    }
    let special = special_b_delta(field)?.value == 3;
    let (t1, t2) = traces(p, n)?;
    let (qi, l1, l2) = (q as i128, t1.lambda_pn as i128, t2.lambda_pn as i128);
    let a = 37 * qi + 7 * l1 - 2 * l2;
    let b = 11 * qi - 7 * l1 + 2 * l2;
    let c = 5 * qi + 7 * l1 - 2 * l2;
    // Constant offsets (omega0, omega2, omega4) for each branch.
    let (k0, k2, k4) = match (special, g) {
        (true, 2) => (5, -21, -27),
        (true, _) => (-11, -5, -43),
        (false, 2) => (-27, -21, 5),
        (false, _) => (-43, -5, -11),
    };
    let omega = vec![
        exact_div("omega0", a + k0, 64)?,
        if special { 0 } else { 1 },
        exact_div("omega2", b + k2, 32)?,
        if special { 1 } else { 0 },
        exact_div("omega4", c + k4, 64)?,
    ];
    check_prediction_sums(&omega, q)?;
    Ok(Prediction {
        branch: BranchId {
            residue: Residue::OneMod4,
            gcd_value: g,
            special_condition: special,
        },
        omega,
        predicted_uniformity: 4,
        lambda1: t1,
        lambda2: t2,
    })
}

/// Predicted (-1)-differential uniformity.
pub fn predict_uniformity(p: u64, n: u32) -> Result<u64> {
    check_p(p)?;
    let q = checked_pow(p, n).ok_or(Error::Overflow("q = p^n"))?;
    Ok(match Residue::of(q) {
        Residue::ThreeMod4 if APCN_FIELDS.contains(&q) => 2,
        Residue::ThreeMod4 => 3,
        Residue::OneMod4 => 4,
    })
}

/// Largest c-differential uniformity over every `c` outside `{1, -1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CBoundRecord {
    pub max_uniformity: u64,
    /// The smallest c (in rank order) attaining the maximum.
    pub worst_c: FieldElement,
    pub within_bound: bool,
}

pub fn c_bound_check(field: &FieldCtx) -> Result<CBoundRecord> {
    check_p(field.p())?;
    field.limits().check(BudgetKind::CBound, field.q())?;
    let d = family_exponent(field.q());
    let table = PowerTable::new(field, d);
    let (one, minus_one) = (field.one(), field.from_int(-1));
    let mut best: Option<(u64, FieldElement)> = None;
    for c in field.elements().filter(|&c| c != one && c != minus_one) {
        let cfg = DiffConfig::new(field, d, c)?;
        let u = spectrum_from_table(&cfg, &table)?.uniformity;
        if best.is_none_or(|(b, _)| u > b) {
            best = Some((u, c));
        }
    }
    let (max_uniformity, worst_c) = best.ok_or(Error::InvariantViolated("no admissible c"))?;
    Ok(CBoundRecord {
        max_uniformity,
        worst_c,
        within_bound: max_uniformity <= C_UNIFORMITY_BOUND,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimStatus {
    Pass,
    Fail,
    Skipped,
}

/// One comparison, with both sides rendered for diagnosis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub name: &'static str,
    pub status: ClaimStatus,
    pub expected: String,
    pub actual: String,
}

impl Claim {
    fn compare<T: PartialEq + fmt::Debug>(name: &'static str, expected: T, actual: T) -> Claim {
        let status = if expected == actual {
            ClaimStatus::Pass
        } else {
            ClaimStatus::Fail
        };
        Claim {
            name,
            status,
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
        }
    }

    fn skipped(name: &'static str, reason: String) -> Claim {
        Claim {
            name,
            status: ClaimStatus::Skipped,
            expected: reason,
            actual: String::new(),
        }
    }

    fn failed(name: &'static str, expected: String, err: &Error) -> Claim {
        Claim {
            name,
            status: ClaimStatus::Fail,
            expected,
            actual: format!("error: {err}"),
        }
    }
}

/// Caps on the expensive checks run by [`verify_field`]; a check above its
/// cap is recorded as skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub n4_max: u64,
    pub c_bound_max: u64,
    pub full_uniformity_max: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n4_max: 343,
            c_bound_max: 343,
            full_uniformity_max: 343,
        }
    }
}

impl VerifyOptions {
    /// Only the O(q log q) checks.
    pub fn fast() -> Self {
        VerifyOptions {
            n4_max: 0,
            c_bound_max: 0,
            full_uniformity_max: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub d: u64,
    pub spectrum: SpectrumRecord,
    pub prediction: Option<Prediction>,
    pub claims: Vec<Claim>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.status != ClaimStatus::Fail)
    }

    pub fn count(&self, status: ClaimStatus) -> usize {
        self.claims.iter().filter(|c| c.status == status).count()
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }
}

/// Brute-force spectrum of `x^((q+3)/2)` at `c = -1` checked against every
/// closed form that applies to F_{p^n}.
pub fn verify_field(p: u64, n: u32, opts: &VerifyOptions) -> Result<Verdict> {
    check_p(p)?;
    let field = make_field(p, n, None)?;
    verify_in(&field, opts)
}

/// As [`verify_field`], using an already constructed field.
pub fn verify_in(field: &FieldCtx, opts: &VerifyOptions) -> Result<Verdict> {
    let (p, n, q) = (field.p(), field.n(), field.q());
    check_p(p)?;
    let cfg = DiffConfig::family_minus_one(field)?;
    let hist = delta_histogram(&cfg)?;
    let spec = crate::diff_spectrum::spectrum(&cfg)?;
    let residue = Residue::of(q);
    let mut claims = Vec::new();

    let predicted = match residue {
        Residue::ThreeMod4 => predict_3mod4(p, n),
        Residue::OneMod4 => predict_1mod4_in(field),
    };
    let prediction = match predicted {
        Ok(pred) => {
            let status = if pred.matches(&spec.omega) {
                ClaimStatus::Pass
            } else {
                ClaimStatus::Fail
            };
            claims.push(Claim {
                name: "spectrum",
                status,
                expected: format!("{:?}", pred.omega),
                actual: format!("{:?}", spec.omega),
            });
            Some(pred)
        }
        Err(e) => {
            claims.push(Claim::failed("spectrum", format!("{:?}", spec.omega), &e));
            None
        }
    };

    let moments = (
        spec.omega.iter().sum::<u64>(),
        spec.omega
            .iter()
            .enumerate()
            .map(|(i, &w)| i as u64 * w)
            .sum::<u64>(),
    );
    claims.push(Claim::compare("moments", (q, q), moments));

    match predict_uniformity(p, n) {
        Ok(u) => claims.push(Claim::compare("uniformity", u, spec.uniformity)),
        Err(e) => claims.push(Claim::failed("uniformity", String::new(), &e)),
    }

    let cap = |opt: u64, kind: BudgetKind| {
        let hard = match kind {
            BudgetKind::N4 => field.limits().n4_max,
            BudgetKind::CBound => field.limits().c_bound_max,
            BudgetKind::FullUniformity => field.limits().full_uniformity_max,
            _ => u64::MAX,
        };
        opt.min(hard)
    };

    if q <= cap(opts.n4_max, BudgetKind::N4) {
        let direct = n4_bruteforce(&cfg)?;
        claims.push(Claim::compare("n4-direct", spec.n4, direct));
        let lhs = spec.second_moment() as i128;
        let rhs = if (direct - 1) % (q as u128 - 1) == 0 {
            ((direct - 1) / (q as u128 - 1)) as i128 - spec.gcd_term as i128
        } else {
            -1
        };
        claims.push(Claim::compare("second-moment", rhs, lhs));
    } else {
        claims.push(Claim::skipped("n4-direct", format!("q = {q} above N4 cap")));
    }

    if q <= cap(opts.full_uniformity_max, BudgetKind::FullUniformity) {
        claims.push(Claim::compare(
            "full-uniformity",
            spec.uniformity,
            full_uniformity(&cfg)?,
        ));
    } else {
        claims.push(Claim::skipped(
            "full-uniformity",
            format!("q = {q} above cap"),
        ));
    }

    match residue {
        Residue::OneMod4 => {
            match n4_closed_form(p, n) {
                Ok(v) => claims.push(Claim::compare("n4-closed-form", v, spec.n4)),
                Err(e) => claims.push(Claim::failed("n4-closed-form", format!("{}", spec.n4), &e)),
            }
            let special = special_b_delta(field)?;
            claims.push(Claim::compare(
                "special-b",
                special.value,
                hist.get(special.b.rank()),
            ));
            claims.push(Claim::compare("odd-delta-count", 1, hist.odd_count()));
            claims.push(identity_claim("identities", trace_identities_1mod4(field)));
        }
        Residue::ThreeMod4 => {
            let dsets = d_set_report(field)?;
            claims.push(Claim::compare(
                "d-sets",
                (spec.omega_at(3), spec.omega_at(2)),
                (dsets.d1_d2_d4, dsets.d1_d2_minus_d4 + dsets.d2_d4_minus_d1),
            ));
            claims.push(identity_claim("identities", trace_identities_3mod4(field)));
        }
    }

    if q <= cap(opts.c_bound_max, BudgetKind::CBound) {
        let bound = c_bound_check(field)?;
        let status = if bound.within_bound {
            ClaimStatus::Pass
        } else {
            ClaimStatus::Fail
        };
        claims.push(Claim {
            name: "c-bound",
            status,
            expected: format!("<= {C_UNIFORMITY_BOUND}"),
            actual: format!(
                "{} at c = {}",
                bound.max_uniformity,
                field.format(bound.worst_c)
            ),
        });
    } else {
        claims.push(Claim::skipped(
            "c-bound",
            format!("q = {q} above c-bound cap"),
        ));
    }

    Ok(Verdict {
        p,
        n,
        q,
        d: cfg.d(),
        spectrum: spec,
        prediction,
        claims,
    })
}

fn identity_claim(name: &'static str, report: Result<crate::char_sum::IdentityReport>) -> Claim {
    match report {
        Ok(r) => {
            let lhs: Vec<i64> = r.checks.iter().map(|c| c.lhs).collect();
            let rhs: Vec<i64> = r.checks.iter().map(|c| c.rhs).collect();
            Claim::compare(name, rhs, lhs)
        }
        Err(e) => Claim::failed(name, String::new(), &e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn spectra_with_three_mod_four() {
        assert_eq!(predict_3mod4(7, 1).unwrap().omega, [2, 3, 2, 0]);
        assert_eq!(predict_3mod4(19, 1).unwrap().omega, [4, 11, 4, 0]);
        assert_eq!(predict_3mod4(7, 3).unwrap().omega, [86, 195, 38, 24]);
        assert!(matches!(
            predict_3mod4(13, 1),
            Err(Error::WrongResidue { .. })
        ));
        assert_eq!(predict_3mod4(3, 1).unwrap_err(), Error::CharacteristicThree);
    }

    #[test]
    fn spectra_with_one_mod_four() {
        let five = predict_1mod4(5, 1).unwrap();
        assert_eq!(five.omega, [3, 0, 1, 1, 0]);
        assert_eq!(five.branch.gcd_value, 4);
        assert_eq!(five.predicted_uniformity, 4);
        assert_eq!(predict_1mod4(29, 1).unwrap().omega, [16, 0, 11, 1, 1]);
        assert_eq!(predict_1mod4(7, 4).unwrap().omega, [1374, 1, 852, 0, 174]);
    }

    #[test]
    fn uniformity_predictions() {
        assert_eq!(predict_uniformity(23, 1).unwrap(), 2);
        assert_eq!(predict_uniformity(11, 1).unwrap(), 3);
        assert_eq!(predict_uniformity(13, 1).unwrap(), 4);
        assert_eq!(
            predict_uniformity(3, 2).unwrap_err(),
            Error::CharacteristicThree
        );
        assert_eq!(
            predict_uniformity(2, 3).unwrap_err(),
            Error::EvenCharacteristic(2)
        );
    }

    #[test]
    fn special_b() {
        let f29 = make_field(29, 1, None).unwrap();
        let s = special_b_delta(&f29).unwrap();
        assert_eq!((s.eta2, s.eta3, s.value), (Sign::Minus, Sign::Minus, 3));
        let f5 = make_field(5, 1, None).unwrap();
        assert_eq!(special_b_delta(&f5).unwrap().value, 3);
        let f2401 = make_field(7, 4, None).unwrap();
        assert_eq!(special_b_delta(&f2401).unwrap().value, 1);
        let f7 = make_field(7, 1, None).unwrap();
        assert!(matches!(
            special_b_delta(&f7),
            Err(Error::WrongResidue { .. })
        ));
    }

    #[test]
    fn branch_names() {
        assert_eq!(predict_3mod4(7, 1).unwrap().branch.to_string(), "3mod4");
        assert_eq!(
            predict_1mod4(29, 1).unwrap().branch.to_string(),
            "1mod4-g4-three"
        );
    }

    #[test]
    fn verify_small_fields() {
        for (p, n) in [(7, 1), (29, 1), (5, 1), (13, 1)] {
            let v = verify_field(p, n, &VerifyOptions::default()).unwrap();
            assert!(v.passed(), "{:?}", v.claims);
            assert_eq!(v.count(ClaimStatus::Skipped), 0);
        }
    }
}
