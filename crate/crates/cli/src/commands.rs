use std::time::Instant;

use cdiff_core::char_sum::{eta_sum_poly, lambda_lift, CurveId};
use cdiff_core::closed_form::{
    c_bound_check, predict_1mod4_in, predict_3mod4, verify_in, ClaimStatus, Prediction, Verdict,
    VerifyOptions, C_UNIFORMITY_BOUND,
};
use cdiff_core::diff_spectrum::{family_exponent, spectrum, DiffConfig, SpectrumRecord};
use cdiff_core::finite_field::HARD_MAX_Q;
use cdiff_core::num::{admissible_prime_powers, gcd};
use cdiff_core::{BudgetKind, Error, FieldCtx, FieldElement, Limits, Residue};
use rayon::prelude::*;

use crate::args::{Budgets, CharsumArgs, FieldArgs, ScanArgs, SpectrumArgs, VerifyArgs};
use crate::report::{BoundRow, CharsumRow, ReportRow, RowVerdict};
use crate::CliError;

fn elapsed_ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

pub fn limits(max_q: Option<u64>) -> Result<Limits, CliError> {
    let mut limits = Limits::default();
    if let Some(m) = max_q {
        if m > HARD_MAX_Q {
            return Err(CliError::Usage(format!(
                "max q {m} exceeds the hard limit {HARD_MAX_Q}"
            )));
        }
        limits.max_q = m;
        limits.brute_force_max = m;
    }
    Ok(limits)
}

fn field(args: &FieldArgs, limits: Limits) -> Result<FieldCtx, CliError> {
    Ok(FieldCtx::new(args.p, args.n, None, limits)?)
}

/// An integer embedded through the prime subfield, or `a0,a1,...` coefficients.
pub fn parse_c(f: &FieldCtx, text: Option<&str>) -> Result<FieldElement, CliError> {
    let Some(text) = text else {
        return Ok(f.from_int(-1));
    };
    let bad = || CliError::Usage(format!("cannot parse multiplier {text:?}"));
    if text.contains(',') {
        let coeffs = text
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(f.from_coeffs(&coeffs)?);
    }
    Ok(f.from_int(text.trim().parse::<i64>().map_err(|_| bad())?))
}

fn traces(p: u64, n: u32) -> (Option<i64>, Option<i64>) {
    let lift = |c| lambda_lift(c, p, n).ok().map(|t| t.lambda_pn);
    (lift(CurveId::Curve1), lift(CurveId::Curve2))
}

fn row_from(
    spec: &SpectrumRecord,
    prediction: Option<&Prediction>,
    verdict: RowVerdict,
    t: Instant,
) -> ReportRow {
    let (lambda1, lambda2) = match prediction {
        Some(pred) => (Some(pred.lambda1.lambda_pn), Some(pred.lambda2.lambda_pn)),
        None => traces(spec.p, spec.n),
    };
    ReportRow {
        p: spec.p,
        n: spec.n,
        q: spec.q,
        d: spec.d,
        gcd: spec.gcd_term,
        branch: prediction.map(|pred| pred.branch.to_string()),
        lambda1,
        lambda2,
        omega: spec.omega.clone(),
        uniformity: Some(spec.uniformity),
        n4: Some(spec.n4),
        verdict,
        wall_ms: elapsed_ms(t),
    }
}

pub fn spectrum_row(args: &SpectrumArgs, limits: Limits) -> Result<ReportRow, CliError> {
    let t = Instant::now();
    let f = field(&args.field, limits)?;
    let d = args.d.unwrap_or_else(|| family_exponent(f.q()));
    let c = parse_c(&f, args.c.as_deref())?;
    let cfg = if c == f.one() {
        DiffConfig::classical(&f, d)?
    } else {
        DiffConfig::new(&f, d, c)?
    };
    let spec = spectrum(&cfg)?;
    let in_family = d == family_exponent(f.q()) && c == f.from_int(-1) && f.p() != 3;
    let prediction = if in_family {
        Some(match Residue::of(f.q()) {
            Residue::ThreeMod4 => predict_3mod4(f.p(), f.n())?,
            Residue::OneMod4 => predict_1mod4_in(&f)?,
        })
    } else {
        None
    };
    let verdict = match &prediction {
        Some(pred) if pred.matches(&spec.omega) => RowVerdict::Pass,
        Some(_) => RowVerdict::Fail,
        None => RowVerdict::Skipped,
    };
    Ok(row_from(&spec, prediction.as_ref(), verdict, t))
}

pub fn charsum_row(args: &CharsumArgs, limits: Limits) -> Result<CharsumRow, CliError> {
    let t = Instant::now();
    let curve = CurveId::from_index(args.curve)
        .ok_or_else(|| CliError::Usage("curve must be 1 or 2".into()))?;
    let (p, n) = (args.field.p, args.field.n);
    let f = field(&args.field, limits)?;
    let trace = lambda_lift(curve, p, n)?;
    let direct = if f.q() <= limits.brute_force_max {
        Some(eta_sum_poly(&curve.polynomial(&f), &f)?)
    } else {
        None
    };
    let verdict = match direct {
        Some(v) if v == trace.lambda_pn => RowVerdict::Pass,
        Some(_) => RowVerdict::Fail,
        None => RowVerdict::Skipped,
    };
    Ok(CharsumRow {
        curve: args.curve,
        p,
        n,
        q: f.q(),
        lambda_p1: trace.lambda_p1,
        s_sequence: trace.s_sequence.clone(),
        lambda_pn: trace.lambda_pn,
        direct,
        hasse_margin: trace.hasse_slack()?,
        points: trace.point_count()?,
        verdict,
        wall_ms: elapsed_ms(t),
    })
}

fn options(b: &Budgets) -> VerifyOptions {
    VerifyOptions {
        n4_max: b.n4_max,
        c_bound_max: b.c_bound_max,
        full_uniformity_max: b.full_uniformity_max,
    }
}

fn verdict_row(v: &Verdict, t: Instant) -> ReportRow {
    let verdict = if v.passed() {
        RowVerdict::Pass
    } else {
        RowVerdict::Fail
    };
    row_from(&v.spectrum, v.prediction.as_ref(), verdict, t)
}

pub fn verify(args: &VerifyArgs, limits: Limits) -> Result<(ReportRow, Verdict), CliError> {
    let t = Instant::now();
    let f = field(&args.field, limits)?;
    let v = verify_in(&f, &options(&args.budgets))?;
    Ok((verdict_row(&v, t), v))
}

pub fn claim_lines(v: &Verdict) -> Vec<String> {
    v.claims
        .iter()
        .map(|c| {
            let status = match c.status {
                ClaimStatus::Pass => "pass",
                ClaimStatus::Fail => "FAIL",
                ClaimStatus::Skipped => "skip",
            };
            if c.status == ClaimStatus::Skipped {
                format!("{status:>4}  {:<16} {}", c.name, c.expected)
            } else {
                format!(
                    "{status:>4}  {:<16} expected {} got {}",
                    c.name, c.expected, c.actual
                )
            }
        })
        .collect()
}

fn scan_one(p: u64, n: u32, opts: &VerifyOptions, limits: Limits) -> (ReportRow, Option<String>) {
    let t = Instant::now();
    let result = FieldCtx::new(p, n, None, limits).and_then(|f| verify_in(&f, opts));
    match result {
        Ok(v) => (verdict_row(&v, t), None),
        Err(e) => {
            let q = p.pow(n);
            let d = family_exponent(q);
            let verdict = match e {
                Error::BudgetExceeded { .. } => RowVerdict::Skipped,
                _ => RowVerdict::Fail,
            };
            let (lambda1, lambda2) = traces(p, n);
            let row = ReportRow {
                p,
                n,
                q,
                d,
                gcd: gcd(d, q - 1),
                branch: None,
                lambda1,
                lambda2,
                omega: Vec::new(),
                uniformity: None,
                n4: None,
                verdict,
                wall_ms: elapsed_ms(t),
            };
            (row, Some(format!("q = {q}: {e}")))
        }
    }
}

/// Rows in ascending (q, p) order with any per-field diagnostics.
pub fn scan(args: &ScanArgs, limits: Limits) -> Result<Vec<(ReportRow, Option<String>)>, CliError> {
    if args.q_max > limits.max_q {
        return Err(Error::BudgetExceeded {
            kind: BudgetKind::FieldSize,
            q: args.q_max,
            limit: limits.max_q,
        }
        .into());
    }
    let fields = admissible_prime_powers(args.q_max);
    let opts = options(&args.budgets);
    let work = || {
        fields
            .par_iter()
            .map(|&(p, n)| scan_one(p, n, &opts, limits))
            .collect::<Vec<_>>()
    };
    let rows = match args.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(rows)
}

pub fn bound_row(args: &FieldArgs, limits: Limits) -> Result<BoundRow, CliError> {
    let t = Instant::now();
    let f = field(args, limits)?;
    let r = c_bound_check(&f)?;
    Ok(BoundRow {
        p: f.p(),
        n: f.n(),
        q: f.q(),
        d: family_exponent(f.q()),
        max_uniformity: r.max_uniformity,
        worst_c: f.format(r.worst_c),
        bound: C_UNIFORMITY_BOUND,
        verdict: if r.within_bound {
            RowVerdict::Pass
        } else {
            RowVerdict::Fail
        },
        wall_ms: elapsed_ms(t),
    })
}
