//! Executable checks of the closed-form claims behind the expansions.
//!
//! Checks over exact rings compare with `==`; floating checks state the number
//! of agreeing digits they require.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cf::{
    convergents, equivalence_transform, estimate_limit, estimate_limit_two_precision,
    DEFAULT_DEPTH_CAP,
};
use crate::expansions::{
    exp_n_shifted_tail, make_classical, make_confluent_1f1, make_e_euler, make_exp_inv_n,
    make_exp_n, make_exp_n_shifted, make_inc_gamma, make_m_fraction_diagonal, make_rat_exp,
    same_convergents, FamilyId,
};
use crate::numeric::{
    agree_to_digits, factorial, format_decimal, format_fraction, log10_abs_rational,
    pochhammer_int, rational_from_i64 as int, BigInt, BigRational, HighPrecComplex, HighPrecReal,
    PrecisionContext, Scalar,
};
use crate::oracle::{
    exp_series, hyp_1f1, hyp_2f2, inc_gamma_ratio, rational_exp_integral, remainder_integral,
    taylor_remainder,
};
use crate::{Error, Result};

/// Printed value for `C_3 - C_2` of the `n = 1` fraction in the reference table.
pub const REFERENCE_TABLE_DIFF3: &str = "-1/784";

/// Sample points of the complex-variable checks, as literals.
pub const Z_SAMPLES: [&str; 7] = ["1/2", "1", "2", "7/2", "1+1i", "2+3i", "-1+2i"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckId {
    Recurrence2,
    Recurrence4,
    Qform,
    Diff,
    Rate,
    Lemma23,
    Lemma42,
    Thm21,
    Thm31,
    Thm41,
    Integrals,
    Nonequiv,
    Props,
}

impl CheckId {
    pub const ALL: [CheckId; 13] = [
        CheckId::Recurrence2,
        CheckId::Recurrence4,
        CheckId::Qform,
        CheckId::Diff,
        CheckId::Rate,
        CheckId::Lemma23,
        CheckId::Lemma42,
        CheckId::Thm21,
        CheckId::Thm31,
        CheckId::Thm41,
        CheckId::Integrals,
        CheckId::Nonequiv,
        CheckId::Props,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::Recurrence2 => "recurrence2",
            CheckId::Recurrence4 => "recurrence4",
            CheckId::Qform => "qform",
            CheckId::Diff => "diff",
            CheckId::Rate => "rate",
            CheckId::Lemma23 => "lemma23",
            CheckId::Lemma42 => "lemma42",
            CheckId::Thm21 => "thm21",
            CheckId::Thm31 => "thm31",
            CheckId::Thm41 => "thm41",
            CheckId::Integrals => "integrals",
            CheckId::Nonequiv => "nonequiv",
            CheckId::Props => "props",
        }
    }

    /// Parses `all` or a comma-separated list of ids.
    pub fn parse_selection(s: &str) -> Result<Vec<CheckId>> {
        if s == "all" {
            return Ok(Self::ALL.to_vec());
        }
        let mut out: Vec<CheckId> = s
            .split(',')
            .filter(|p| !p.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one check at one parameter point.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub check: CheckId,
    pub claim: String,
    pub parameters: BTreeMap<String, String>,
    pub expected: String,
    pub actual: String,
    /// Required agreement for floating checks; `None` means exact equality.
    pub digits: Option<u32>,
    pub passed: bool,
    pub witness: BTreeMap<String, String>,
    pub note: Option<String>,
    #[serde(skip)]
    order: Vec<i64>,
}

impl VerificationReport {
    fn new(check: CheckId, claim: &str) -> Self {
        Self {
            check,
            claim: claim.to_string(),
            parameters: BTreeMap::new(),
            expected: String::new(),
            actual: String::new(),
            digits: None,
            passed: false,
            witness: BTreeMap::new(),
            note: None,
            order: Vec::new(),
        }
    }

    fn param(mut self, name: &str, value: impl fmt::Display, order: i64) -> Self {
        self.parameters.insert(name.to_string(), value.to_string());
        self.order.push(order);
        self
    }

    fn witness(mut self, name: &str, value: impl fmt::Display) -> Self {
        self.witness.insert(name.to_string(), value.to_string());
        self
    }

    fn outcome(
        mut self,
        expected: impl Into<String>,
        actual: impl Into<String>,
        passed: bool,
    ) -> Self {
        self.expected = expected.into();
        self.actual = actual.into();
        self.passed = passed;
        self
    }

    fn failed_with(self, err: &Error) -> Self {
        let expected = self.expected.clone();
        self.outcome(expected, format!("error: {err}"), false)
    }
}

/// Parameter grid for [`run_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteGrid {
    pub max_n: u64,
    pub k_max: u64,
    pub digits: u32,
}

impl Default for SuiteGrid {
    fn default() -> Self {
        Self {
            max_n: 6,
            k_max: 50,
            digits: 40,
        }
    }
}

fn report_or_error(
    base: VerificationReport,
    f: impl FnOnce(VerificationReport) -> Result<VerificationReport>,
) -> VerificationReport {
    let fallback = base.clone();
    f(base).unwrap_or_else(|e| fallback.failed_with(&e))
}

/// `X_k = (k+2n+2) X_{k-1} - n(k+n) X_{k-2}` against `X_k = (k+2)(k+n+1)!`.
pub fn check_recurrence_solution_thm2(n: u64, k_max: u64) -> VerificationReport {
    let base = VerificationReport::new(CheckId::Recurrence2, "recurrence-solution")
        .param("n", n, n as i64)
        .param("k_max", k_max, k_max as i64);
    let x = |k: u64| BigInt::from(k + 2) * factorial(k + n + 1);
    let (nb, mut first_bad) = (BigInt::from(n), None);
    for k in 2..=k_max {
        let kb = BigInt::from(k);
        let rhs = (&kb + 2u32 * &nb + 2u32) * x(k - 1) - &nb * (&kb + &nb) * x(k - 2);
        if rhs != x(k) {
            first_bad = Some(k);
            break;
        }
    }
    let mut r = base.witness("x_max", x(k_max));
    if k_max >= 3 {
        r = r.witness("x_3", x(3));
    }
    match first_bad {
        None => r.outcome("recurrence holds for 2 <= k <= k_max", "holds", true),
        Some(k) => r.outcome(
            "recurrence holds for 2 <= k <= k_max",
            format!("fails at k = {k}"),
            false,
        ),
    }
}

/// `X_k = (k + z(n+1) + 2) X_{k-1} - z(k + nz) X_{k-2}` for
/// `X_k = Gamma(k+2+nz)(k+2+(n-1)z)`, checked through the ratios
/// `X_k / X_{k-1} = (k+1+nz)(k+2+(n-1)z) / (k+1+(n-1)z)` so everything stays rational.
pub fn check_recurrence_solution_sec4(
    z: &BigRational,
    n: u64,
    k_max: u64,
) -> Result<VerificationReport> {
    let nq = int(n as i64);
    let zn = nq.clone() * z;
    let zn1 = (nq.clone() - int(1)) * z;
    let ratio = |k: u64| -> Result<BigRational> {
        let kq = int(k as i64);
        let num = (kq.clone() + int(1) + &zn) * (kq.clone() + int(2) + &zn1);
        let den = kq + int(1) + &zn1;
        if den.is_zero() || num.is_zero() {
            return Err(Error::Parameter(format!(
                "ratio X_{k}/X_{} hits a pole or zero",
                k - 1
            )));
        }
        Ok(num / den)
    };
    let order = (z * BigRational::from_integer(BigInt::from(1_000_000)))
        .to_integer()
        .to_i64()
        .unwrap_or(0);
    let r = VerificationReport::new(CheckId::Recurrence4, "recurrence-solution")
        .param("z", format_fraction(z), order)
        .param("n", n, n as i64)
        .param("k_max", k_max, k_max as i64);
    let mut prev = ratio(1)?;
    for k in 2..=k_max {
        let cur = ratio(k)?;
        let kq = int(k as i64);
        // divide the recurrence by X_{k-2}
        let lhs = cur.clone() * &prev;
        let rhs = (kq.clone() + z * (nq.clone() + int(1)) + int(2)) * &prev - z * (kq + &zn);
        if lhs != rhs {
            return Ok(r.outcome(
                "recurrence holds for 2 <= k <= k_max",
                format!("fails at k = {k}"),
                false,
            ));
        }
        prev = cur;
    }
    Ok(r.outcome("recurrence holds for 2 <= k <= k_max", "holds", true))
}

/// Raw `Q_k` of the `e^n` fraction equals `(1/n)(k+1)(n)_{k+1}`.
pub fn check_q_closed_form(n: u64, k_max: u64) -> Result<VerificationReport> {
    let spec = make_exp_n(n)?.core();
    let r = VerificationReport::new(CheckId::Qform, "denominator-closed-form")
        .param("n", n, n as i64)
        .param("k_max", k_max, k_max as i64);
    let nb = BigInt::from(n);
    let cs = convergents(&spec, k_max)?;
    for c in &cs {
        let closed = BigInt::from(c.k + 1) * pochhammer_int(&nb, c.k + 1) / &nb;
        if c.q != BigRational::from_integer(closed.clone()) {
            return Ok(r
                .witness("k", c.k)
                .witness("q_raw", format_fraction(&c.q))
                .outcome(closed.to_string(), format_fraction(&c.q), false));
        }
    }
    let last = cs.last().expect("depth 0 is always present");
    Ok(r.witness("q_raw_max", format_fraction(&last.q)).outcome(
        "Q_k = (k+1)(n)_{k+1}/n for 0 <= k <= k_max",
        "holds",
        true,
    ))
}

/// `-n^(n+k+1) / ((n-1)! (n)_{k+1} (k+1) k)`.
pub fn difference_formula(n: u64, k: u64) -> BigRational {
    let nb = BigInt::from(n);
    let num = -num_traits::pow(nb.clone(), (n + k + 1) as usize);
    let den = factorial(n - 1) * pochhammer_int(&nb, k + 1) * BigInt::from((k + 1) * k);
    BigRational::new(num, den)
}

/// Exact equality of `C_k - C_{k-1}` with [`difference_formula`], plus the sign,
/// divisibility and telescoping consequences.
pub fn check_difference_formula(n: u64, k_max: u64) -> Result<VerificationReport> {
    let spec = make_exp_n(n)?;
    let mut r = VerificationReport::new(CheckId::Diff, "difference-formula")
        .param("n", n, n as i64)
        .param("k_max", k_max, k_max as i64);
    let values: Vec<BigRational> = convergents(&spec, k_max)?
        .into_iter()
        .map(|c| {
            c.value
                .ok_or_else(|| Error::Singular(format!("C_{} is singular", c.k)))
        })
        .collect::<Result<_>>()?;
    let nb = BigInt::from(n);
    let mut telescoped = values[0].clone();
    for k in 1..=k_max {
        let diff = values[k as usize].clone() - &values[k as usize - 1];
        let formula = difference_formula(n, k);
        if k <= 4 {
            r = r.witness(&format!("diff_{k}"), format_fraction(&diff));
        }
        let numerator = num_traits::pow(nb.clone(), (n + k + 1) as usize);
        if diff != formula || !diff.is_negative() || !numerator.is_multiple_of(&nb) {
            return Ok(r.outcome(
                format_fraction(&formula),
                format!("k = {k}: {}", format_fraction(&diff)),
                false,
            ));
        }
        telescoped += formula;
    }
    if telescoped != values[k_max as usize] {
        return Ok(r.outcome(
            "C_K = C_0 + sum of formula values",
            "telescoping fails",
            false,
        ));
    }
    if n == 1 && k_max >= 3 {
        let d3 = values[3].clone() - &values[2];
        r.note = Some(format!(
            "reference table prints {REFERENCE_TABLE_DIFF3} for C_3 - C_2; exact value is {} (87/32 - 49/18)",
            format_fraction(&d3)
        ));
        r = r.witness("reference_diff_3", REFERENCE_TABLE_DIFF3);
    }
    Ok(r.outcome("C_k - C_{k-1} = formula for 1 <= k <= k_max", "holds", true))
}

/// `n^(k+1) / ((k+1)(k+2)(n)_{k+2})`.
pub fn rate_bound(n: u64, k: u64) -> BigRational {
    let nb = BigInt::from(n);
    BigRational::new(
        num_traits::pow(nb.clone(), (k + 1) as usize),
        BigInt::from((k + 1) * (k + 2)) * pochhammer_int(&nb, k + 2),
    )
}

/// Default constant of the rate bound.
pub const RATE_CONSTANT: i64 = 10;

/// `|e^n - C_k| <= A n^(k+1) / ((k+1)(k+2)(n)_{k+2})` for `1 <= k <= k_max`. The
/// oracle precision is raised until its error is below 1% of the smallest bound.
pub fn check_rate_bound(
    n: u64,
    k_max: u64,
    digits: u32,
    constant: i64,
) -> Result<VerificationReport> {
    let spec = make_exp_n(n)?;
    let r = VerificationReport::new(CheckId::Rate, "rate-bound")
        .param("n", n, n as i64)
        .param("k_max", k_max, k_max as i64)
        .param("constant", constant, constant);
    let smallest = rate_bound(n, k_max);
    let needed = (-log10_abs_rational(&smallest)).ceil().max(0.0) as u32 + 3;
    let oracle_digits = digits.max(needed);
    let oracle = exp_series(&int(n as i64), oracle_digits)?;
    let tail = oracle.tail_bound.to_rational();
    let a = int(constant);
    let mut max_ratio = 0f64;
    let mut violation = None;
    let values = convergents(&spec, k_max)?;
    for c in values.iter().skip(1) {
        let value = c
            .value
            .clone()
            .ok_or_else(|| Error::Singular(format!("C_{} is singular", c.k)))?;
        let err = (oracle.value.clone() - value).abs();
        let bound = rate_bound(n, c.k);
        let ratio = (err.clone() / &bound).to_f64().unwrap_or(f64::INFINITY);
        max_ratio = max_ratio.max(ratio);
        if violation.is_none() && err + &tail > a.clone() * &bound {
            violation = Some(c.k);
        }
    }
    // the ratio tends to n^(n+1)/(n-1)!, so a fixed constant only covers small n
    let limit = BigRational::new(BigInt::from(n).pow(n as u32 + 1), factorial(n - 1));
    let r = r
        .witness("max_ratio", format!("{max_ratio:.6}"))
        .witness(
            "limit_ratio",
            format!("{:.6}", limit.to_f64().unwrap_or(f64::INFINITY)),
        )
        .witness("oracle_digits", oracle_digits);
    Ok(match violation {
        Some(k) => r.outcome(
            format!("error <= {constant} * bound"),
            format!("violated from k = {k}"),
            false,
        ),
        None => r.outcome(
            format!("error <= {constant} * bound for 1 <= k <= k_max"),
            "holds",
            true,
        ),
    })
}

/// `(k+1)(k+2)(1)_{k+2} = k! (k+1)^2 (k+2)^2`, the `n = 1` shape of the rate bound.
pub fn check_rate_shape(k_max: u64) -> VerificationReport {
    let r =
        VerificationReport::new(CheckId::Rate, "rate-shape").param("k_max", k_max, k_max as i64);
    let one = BigInt::one();
    for k in 0..=k_max {
        let lhs = BigInt::from((k + 1) * (k + 2)) * pochhammer_int(&one, k + 2);
        let rhs = factorial(k) * BigInt::from((k + 1) * (k + 1)) * BigInt::from((k + 2) * (k + 2));
        if lhs != rhs {
            return r.outcome(
                "identity for 0 <= k <= k_max",
                format!("fails at k = {k}"),
                false,
            );
        }
    }
    r.witness("k_5", BigInt::from(42) * factorial(7)).outcome(
        "identity for 0 <= k <= k_max",
        "holds",
        true,
    )
}

/// Parses a sample literal: a fraction `p/q` or a complex literal.
pub fn parse_sample(s: &str, ctx: PrecisionContext) -> Result<HighPrecComplex> {
    if s.contains('/') {
        return Ok(HighPrecComplex::from_rational(
            &crate::numeric::parse_fraction(s)?,
            ctx,
        ));
    }
    HighPrecComplex::parse(s, ctx)
}

fn agreement(a: &HighPrecComplex, b: &HighPrecComplex) -> f64 {
    let d = (a.clone() - b).log10_abs();
    b.log10_abs().max(0.0) - d
}

fn float_outcome(
    r: VerificationReport,
    expected: &HighPrecComplex,
    actual: &HighPrecComplex,
    digits: u32,
) -> VerificationReport {
    let places = digits + 2;
    let ok = (actual.clone() - expected).is_negligible(expected, digits);
    let mut r = r.witness(
        "agreement_digits",
        format!("{:.1}", agreement(actual, expected).min(999.0)),
    );
    r.digits = Some(digits);
    r.outcome(expected.to_decimal(places), actual.to_decimal(places), ok)
}

fn sample_report(check: CheckId, claim: &str, index: usize) -> VerificationReport {
    VerificationReport::new(check, claim).param("z", Z_SAMPLES[index], index as i64)
}

/// `2F2(1,1;3,z+2;z) = (2(z+1)/z^2)(1 + z - gamma(z,z)/(z^(z-1) e^(-z)))`.
pub fn check_lemma23(index: usize, working: u32, digits: u32) -> VerificationReport {
    report_or_error(
        sample_report(CheckId::Lemma23, "two-f-two-closed-form", index),
        |r| {
            let ctx = PrecisionContext::with_digits(working);
            let z = parse_sample(Z_SAMPLES[index], ctx)?;
            let one = z.one_like();
            let lhs = hyp_2f2(
                &one,
                &one,
                &z.from_i64_like(3),
                &(z.clone() + &z.from_i64_like(2)),
                &z,
                working,
            )?
            .value;
            let ratio = inc_gamma_ratio(&z, working)?;
            let front = z.from_i64_like(2) * &(z.clone() + &one) / &(z.clone() * &z);
            let rhs = front * &(one + &z - &ratio);
            Ok(float_outcome(r, &rhs, &lhs, digits))
        },
    )
}

/// Fraction for `gamma(z,z)/(z^(z-1)e^(-z))` against the series, and the same
/// fraction read as `1F1(1; z+1; z)`.
pub fn check_thm31(index: usize, working: u32, digits: u32) -> Vec<VerificationReport> {
    let ctx = PrecisionContext::with_digits(working);
    let build = |c: PrecisionContext| make_inc_gamma(&parse_sample(Z_SAMPLES[index], c)?);
    let limit = estimate_limit_two_precision(build, ctx, digits + 2, DEFAULT_DEPTH_CAP);
    let cf = report_or_error(
        sample_report(CheckId::Thm31, "incomplete-gamma-fraction", index),
        |r| {
            let limit = limit.clone()?;
            let z = parse_sample(Z_SAMPLES[index], ctx)?;
            let oracle = inc_gamma_ratio(&z, working)?;
            Ok(float_outcome(
                r.witness("depth", limit.depth),
                &oracle,
                &limit.value,
                digits,
            ))
        },
    );
    let confluent = report_or_error(
        sample_report(CheckId::Thm31, "confluent-series", index),
        |r| {
            let limit = limit.clone()?;
            let z = parse_sample(Z_SAMPLES[index], ctx)?;
            let series = hyp_1f1(&(z.clone() + &z.one_like()), &z, working)?.value;
            Ok(float_outcome(
                r.witness("depth", limit.depth),
                &series,
                &limit.value,
                digits,
            ))
        },
    );
    vec![cf, confluent]
}

/// The incomplete-gamma fraction must reject the branch cut.
pub fn check_thm31_domain() -> VerificationReport {
    let r = VerificationReport::new(CheckId::Thm31, "branch-cut-rejected").param("z", "-3+0i", -1);
    let z = HighPrecComplex::parse("-3+0i", PrecisionContext::default()).expect("literal");
    match make_inc_gamma(&z) {
        Err(Error::Domain(msg)) => r.outcome("domain error", format!("domain error: {msg}"), true),
        Err(e) => r.outcome("domain error", format!("error: {e}"), false),
        Ok(_) => r.outcome("domain error", "accepted", false),
    }
}

/// `2F2((n-1)l/n + 1, 1; l+2, (n-1)l/n + 3; l/n)` against its closed form in `e^(l/n)`.
pub fn check_lemma42(l: u64, n: u64, working: u32, digits: u32) -> VerificationReport {
    let r = VerificationReport::new(CheckId::Lemma42, "two-f-two-rational-closed-form")
        .param("l", l, l as i64)
        .param("n", n, n as i64);
    report_or_error(r, |r| {
        if l == 0 || l >= n {
            return Err(Error::Parameter(format!(
                "requires 1 <= l < n, got ({l}, {n})"
            )));
        }
        let (lq, nq) = (int(l as i64), int(n as i64));
        let z = lq.clone() / &nq;
        let w = (nq.clone() - int(1)) * &z;
        let lhs = hyp_2f2(
            &(w.clone() + int(1)),
            &int(1),
            &(lq.clone() + int(2)),
            &(w.clone() + int(3)),
            &z,
            working,
        )?;
        let e = exp_series(&z, working)?;
        let partial = (0..=l).fold(BigRational::zero(), |acc, k| {
            acc + BigRational::new(
                num_traits::pow(BigInt::from(l), k as usize),
                factorial(k) * num_traits::pow(BigInt::from(n), k as usize),
            )
        });
        let c = BigRational::new(
            factorial(l + 1) * num_traits::pow(BigInt::from(n), (l + 1) as usize),
            num_traits::pow(BigInt::from(l), (l + 1) as usize),
        ) * (w.clone() + int(1))
            * (w + int(2));
        let s = BigRational::new(
            num_traits::pow(BigInt::from(l), (l - 1) as usize),
            factorial(l - 1) * num_traits::pow(BigInt::from(n), (l - 1) as usize),
        );
        let tail = int(1) / ((nq.clone() + int(1)) * (lq.clone() + int(1)) - int(1) - int(2) * &lq);
        let rhs = c * ((nq / lq) * (partial - e.value) + s * tail);
        let mut r = r;
        r.digits = Some(digits);
        let ok = agree_to_digits(&lhs.value, &rhs, digits);
        let places = digits + 2;
        Ok(r.outcome(
            format_decimal(&rhs, places),
            format_decimal(&lhs.value, places),
            ok,
        ))
    })
}

/// Fraction for `e^n` against the exponential series, and the depth it needs.
pub fn check_thm21(n: u64, digits: u32, max_depth: u64) -> VerificationReport {
    let r = VerificationReport::new(CheckId::Thm21, "exp-integer-fraction")
        .param("n", n, n as i64)
        .param("max_depth", max_depth, max_depth as i64);
    report_or_error(r, |mut r| {
        let spec = make_exp_n(n)?;
        let oracle = exp_series(&int(n as i64), digits + 5)?.value;
        let mut reached = None;
        for c in spec.convergents().take(max_depth as usize + 1) {
            let c = c?;
            if let Some(v) = &c.value {
                if agree_to_digits(v, &oracle, digits) {
                    reached = Some((c.k, v.clone()));
                    break;
                }
            }
        }
        r.digits = Some(digits);
        let places = digits + 2;
        Ok(match reached {
            Some((k, v)) => r.witness("depth", k).outcome(
                format_decimal(&oracle, places),
                format_decimal(&v, places),
                true,
            ),
            None => r.outcome(
                format_decimal(&oracle, places),
                format!("not reached by depth {max_depth}"),
                false,
            ),
        })
    })
}

/// Fraction for `e^(l/n)` against `exp_series(l/n)`.
pub fn check_thm41(l: u64, n: u64, digits: u32) -> VerificationReport {
    let r = VerificationReport::new(CheckId::Thm41, "exp-rational-fraction")
        .param("l", l, l as i64)
        .param("n", n, n as i64);
    report_or_error(r, |mut r| {
        let spec = make_rat_exp(l, n)?;
        let limit = estimate_limit(&spec, digits + 3, DEFAULT_DEPTH_CAP)?;
        let oracle = exp_series(
            &BigRational::new(BigInt::from(l), BigInt::from(n)),
            digits + 5,
        )?
        .value;
        r.digits = Some(digits);
        let places = digits + 2;
        let ok = agree_to_digits(&limit.value, &oracle, digits);
        Ok(r.witness("depth", limit.depth).outcome(
            format_decimal(&oracle, places),
            format_decimal(&limit.value, places),
            ok,
        ))
    })
}

/// The `l = 1` specialization built on its own has the same convergents as the general family.
pub fn check_inverse_root_identical(n: u64, depth: u64) -> VerificationReport {
    let r = VerificationReport::new(CheckId::Thm41, "inverse-root-fraction")
        .param("l", 1, 1)
        .param("n", n, n as i64)
        .param("depth", depth, depth as i64);
    report_or_error(r, |r| {
        let cmp = same_convergents(&make_exp_inv_n(n)?, &make_rat_exp(1, n)?, depth)?;
        let actual = match cmp.first_difference {
            None => "identical".to_string(),
            Some(k) => format!("differ at k = {k}"),
        };
        Ok(r.outcome("identical", actual, cmp.same))
    })
}

fn real_outcome(
    r: VerificationReport,
    expected: &HighPrecReal,
    actual: &HighPrecReal,
    digits: u32,
) -> VerificationReport {
    float_outcome(
        r,
        &HighPrecComplex::from_real(expected.clone()),
        &HighPrecComplex::from_real(actual.clone()),
        digits,
    )
}

/// `int_0^1 (1-t)^(n-1) e^(tn) dt = (1 + n + K)/n` by quadrature.
pub fn check_remainder_integral(n: u64, digits: u32) -> VerificationReport {
    let r =
        VerificationReport::new(CheckId::Integrals, "remainder-integral").param("n", n, n as i64);
    report_or_error(r, |r| {
        let ctx = PrecisionContext::with_digits(digits + 5);
        let integral = remainder_integral(n, ctx, digits + 2)?;
        let cf = estimate_limit(
            &make_inc_gamma(&int(n as i64))?,
            digits + 3,
            DEFAULT_DEPTH_CAP,
        )?;
        let rhs = HighPrecReal::from_rational(&(cf.value / int(n as i64)), ctx);
        Ok(real_outcome(
            r.witness("depth", cf.depth),
            &rhs,
            &integral,
            digits,
        ))
    })
}

/// `int_0^1 t^(-l/n) e^(tl/n) (l(t-1) + n) dt = n e^(l/n)` by quadrature.
pub fn check_rational_integral(l: u64, n: u64, digits: u32) -> VerificationReport {
    let r = VerificationReport::new(CheckId::Integrals, "rational-exponent-integral")
        .param("l", l, l as i64)
        .param("n", n, n as i64);
    report_or_error(r, |r| {
        let ctx = PrecisionContext::with_digits(digits + 5);
        let integral = rational_exp_integral(l, n, ctx, digits + 2)?;
        let x =
            HighPrecReal::from_rational(&BigRational::new(BigInt::from(l), BigInt::from(n)), ctx);
        let rhs = HighPrecReal::from_i64(n as i64, ctx) * &exp_series(&x, digits + 5)?.value;
        Ok(real_outcome(r, &rhs, &integral, digits))
    })
}

/// Integral and series forms of the Taylor remainder of `e^x` at `x = n`.
pub fn check_taylor_remainder(n: u64, digits: u32) -> VerificationReport {
    let r = VerificationReport::new(CheckId::Integrals, "taylor-remainder").param("n", n, n as i64);
    report_or_error(r, |r| {
        let ctx = PrecisionContext::with_digits(digits + 5);
        let t = taylor_remainder(n, ctx, digits)?;
        Ok(real_outcome(r, &t.series.value, &t.integral, digits))
    })
}

/// Two expansions of the same constant: convergent sequences differ while the
/// limits agree to `digits`.
pub fn check_nonequivalent(
    a: &crate::cf::ExpansionSpec<BigRational>,
    b: &crate::cf::ExpansionSpec<BigRational>,
    depth: u64,
    digits: u32,
    order: i64,
) -> VerificationReport {
    let r = VerificationReport::new(CheckId::Nonequiv, "distinct-convergents")
        .param("pair", format!("{},{}", a.name(), b.name()), order)
        .param("depth", depth, depth as i64);
    report_or_error(r, |mut r| {
        let cmp = same_convergents(a, b, depth)?;
        let la = estimate_limit(a, digits + 3, DEFAULT_DEPTH_CAP)?;
        let lb = estimate_limit(b, digits + 3, DEFAULT_DEPTH_CAP)?;
        let limits_agree = agree_to_digits(&la.value, &lb.value, digits);
        r.digits = Some(digits);
        let first = cmp
            .first_difference
            .map_or("none".to_string(), |k| k.to_string());
        let actual = format!("first difference at k = {first}; limits agree: {limits_agree}");
        Ok(r.witness("first_difference", first)
            .witness("limit", format_decimal(&la.value, digits))
            .outcome(
                "convergents differ, limits agree",
                actual,
                !cmp.same && limits_agree,
            ))
    })
}

/// All pairs of fixed expansions of `e`, plus the two `1F1(1; z+1; z)` fractions at `z = 1`.
pub fn nonequivalence_reports(depth: u64, digits: u32) -> Vec<VerificationReport> {
    let ids = FamilyId::E_EXPANSIONS;
    let build = |id: FamilyId| match id {
        FamilyId::EEuler => Ok(make_e_euler()),
        other => make_classical(other, None),
    };
    let mut out = Vec::new();
    let mut order = 0;
    for (i, &x) in ids.iter().enumerate() {
        for &y in &ids[i + 1..] {
            out.push(match (build(x), build(y)) {
                (Ok(a), Ok(b)) => check_nonequivalent(&a, &b, depth, digits, order),
                (Err(e), _) | (_, Err(e)) => {
                    VerificationReport::new(CheckId::Nonequiv, "distinct-convergents")
                        .failed_with(&e)
                }
            });
            order += 1;
        }
    }
    let one = int(1);
    out.push(
        match (make_confluent_1f1(&one), make_m_fraction_diagonal(&one)) {
            (Ok(a), Ok(b)) => check_nonequivalent(&a, &b, depth, digits, order),
            (Err(e), _) | (_, Err(e)) => {
                VerificationReport::new(CheckId::Nonequiv, "distinct-convergents").failed_with(&e)
            }
        },
    );
    out
}

/// `P_k Q_{k-1} - P_{k-1} Q_k = (-1)^(k-1) a_1 ... a_k` exactly.
pub fn check_determinant_identity(
    spec: &crate::cf::ExpansionSpec<BigRational>,
    k_max: u64,
    order: i64,
) -> VerificationReport {
    let r = VerificationReport::new(CheckId::Props, "determinant-identity")
        .param("expansion", spec.name(), order)
        .param("k_max", k_max, k_max as i64);
    report_or_error(r, |r| {
        let cs = convergents(spec, k_max)?;
        let mut product = int(-1);
        let (mut p_prev, mut q_prev) = (int(1), int(0));
        for c in &cs {
            if c.k > 0 {
                let (a, _) = spec
                    .coefficients(c.k)?
                    .ok_or_else(|| Error::Precondition("finite rule".into()))?;
                product = -product * a;
            }
            let det = c.p.clone() * &q_prev - p_prev.clone() * &c.q;
            if det != product {
                return Ok(r.outcome("identity holds", format!("fails at k = {}", c.k), false));
            }
            p_prev = c.p.clone();
            q_prev = c.q.clone();
        }
        Ok(r.outcome("identity holds for 0 <= k <= k_max", "holds", true))
    })
}

/// `t_{j-1} (b_j + t_j) = a_j` for the shifted `e^n` fraction.
pub fn check_tail_recursion(n: u64, j_max: u64) -> VerificationReport {
    let r = VerificationReport::new(CheckId::Props, "tail-recursion")
        .param("n", n, n as i64)
        .param("j_max", j_max, j_max as i64);
    report_or_error(r, |r| {
        let spec = make_exp_n_shifted(n)?;
        Ok(
            match exp_n_shifted_tail(n).first_violation(spec.rule(), j_max)? {
                None => r.outcome("recursion holds for 1 <= j <= j_max", "holds", true),
                Some(j) => r.outcome(
                    "recursion holds for 1 <= j <= j_max",
                    format!("fails at j = {j}"),
                    false,
                ),
            },
        )
    })
}

/// Rescaling by `r_m = (m + 1)/(2m + 3)` leaves every convergent value unchanged.
pub fn check_equivalence_invariance(
    spec: &crate::cf::ExpansionSpec<BigRational>,
    depth: u64,
    order: i64,
) -> VerificationReport {
    let r = VerificationReport::new(CheckId::Props, "equivalence-invariance")
        .param("expansion", spec.name(), order)
        .param("depth", depth, depth as i64);
    report_or_error(r, |r| {
        let scaled = equivalence_transform(spec, |m| {
            BigRational::new(BigInt::from(m + 1), BigInt::from(2 * m + 3))
        });
        let cmp = same_convergents(spec, &scaled, depth)?;
        let actual = match cmp.first_difference {
            None => "identical".to_string(),
            Some(k) => format!("differ at k = {k}"),
        };
        Ok(r.outcome("identical values", actual, cmp.same))
    })
}

fn props_specs() -> Vec<crate::cf::ExpansionSpec<BigRational>> {
    let mut v = vec![make_e_euler()];
    v.extend(make_exp_n(3));
    v.extend(make_rat_exp(2, 5));
    v.extend(make_classical(FamilyId::ERegular, None));
    v
}

type Task = Box<dyn Fn() -> Vec<VerificationReport> + Send + Sync>;

fn tasks(check: CheckId, grid: SuiteGrid) -> Vec<Task> {
    let SuiteGrid {
        max_n,
        k_max,
        digits,
    } = grid;
    let ns = 1..=max_n;
    let pairs = move || (2..=max_n).flat_map(|n| (1..n).map(move |l| (l, n)));
    let one = |f: Box<dyn Fn() -> VerificationReport + Send + Sync>| -> Task {
        Box::new(move || vec![f()])
    };
    let err = |e: Error, check: CheckId| VerificationReport::new(check, "error").failed_with(&e);
    match check {
        CheckId::Recurrence2 => ns
            .map(|n| one(Box::new(move || check_recurrence_solution_thm2(n, k_max))))
            .collect(),
        CheckId::Recurrence4 => pairs()
            .map(|(l, n)| {
                one(Box::new(move || {
                    let z = BigRational::new(BigInt::from(l), BigInt::from(n));
                    check_recurrence_solution_sec4(&z, n, k_max).unwrap_or_else(|e| err(e, check))
                }))
            })
            .collect(),
        CheckId::Qform => ns
            .map(|n| {
                one(Box::new(move || {
                    check_q_closed_form(n, k_max).unwrap_or_else(|e| err(e, check))
                }))
            })
            .collect(),
        CheckId::Diff => ns
            .map(|n| {
                one(Box::new(move || {
                    check_difference_formula(n, k_max).unwrap_or_else(|e| err(e, check))
                }))
            })
            .collect(),
        CheckId::Rate => {
            let mut v: Vec<Task> = ns
                .map(|n| {
                    one(Box::new(move || {
                        check_rate_bound(n, k_max, digits, RATE_CONSTANT)
                            .unwrap_or_else(|e| err(e, check))
                    }))
                })
                .collect();
            v.push(one(Box::new(move || check_rate_shape(k_max))));
            v
        }
        CheckId::Lemma23 => (0..Z_SAMPLES.len())
            .map(|i| one(Box::new(move || check_lemma23(i, digits, digits - 5))))
            .collect(),
        CheckId::Lemma42 => pairs()
            .map(|(l, n)| one(Box::new(move || check_lemma42(l, n, digits, digits - 5))))
            .collect(),
        CheckId::Thm21 => ns
            .map(|n| one(Box::new(move || check_thm21(n, digits, 120))))
            .collect(),
        CheckId::Thm31 => {
            let mut v: Vec<Task> = (0..Z_SAMPLES.len())
                .map(|i| -> Task { Box::new(move || check_thm31(i, digits, digits - 10)) })
                .collect();
            v.push(one(Box::new(check_thm31_domain)));
            v
        }
        CheckId::Thm41 => {
            let mut v: Vec<Task> = pairs()
                .map(|(l, n)| one(Box::new(move || check_thm41(l, n, 30))))
                .collect();
            v.extend(
                (3..=max_n.max(3))
                    .map(|n| one(Box::new(move || check_inverse_root_identical(n, k_max)))),
            );
            v
        }
        CheckId::Integrals => {
            let mut v: Vec<Task> = ns
                .clone()
                .map(|n| one(Box::new(move || check_remainder_integral(n, 25))))
                .collect();
            v.extend(ns.map(|n| one(Box::new(move || check_taylor_remainder(n, 25)))));
            v.extend(
                pairs().map(|(l, n)| one(Box::new(move || check_rational_integral(l, n, 25)))),
            );
            v
        }
        CheckId::Nonequiv => vec![Box::new(move || nonequivalence_reports(k_max, 25))],
        CheckId::Props => {
            let mut v: Vec<Task> = Vec::new();
            for (i, _) in props_specs().iter().enumerate() {
                let i_ord = i as i64;
                v.push(one(Box::new(move || {
                    check_determinant_identity(&props_specs()[i], 200, i_ord)
                })));
                v.push(one(Box::new(move || {
                    check_equivalence_invariance(&props_specs()[i], 50, i_ord)
                })));
            }
            v.extend(ns.map(|n| one(Box::new(move || check_tail_recursion(n, 200)))));
            v
        }
    }
}

/// Runs the selected checks over `grid` in parallel and returns the reports
/// sorted by check, claim and parameters.
pub fn run_suite(selection: &[CheckId], grid: SuiteGrid) -> Vec<VerificationReport> {
    let all: Vec<Task> = selection.iter().flat_map(|&c| tasks(c, grid)).collect();
    let mut reports: Vec<VerificationReport> = all.par_iter().flat_map_iter(|t| t()).collect();
    reports.sort_by(|a, b| (a.check, &a.claim, &a.order).cmp(&(b.check, &b.claim, &b.order)));
    reports
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
