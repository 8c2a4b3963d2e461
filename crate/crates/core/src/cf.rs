//! Generalized continued fractions `b0 + K(a_m / b_m)` and their convergents.
//!
//! Convergents come from the Euler–Wallis recurrence
//! `P_k = b_k P_{k-1} + a_k P_{k-2}`, `Q_k = b_k Q_{k-1} + a_k Q_{k-2}` with
//! `P_{-1} = 1, Q_{-1} = 0, P_0 = b0, Q_0 = 1`. The raw `P_k, Q_k` are kept
//! unreduced next to the folded value of the whole expansion.

use std::fmt;
use std::sync::Arc;

use crate::numeric::{BigRational, PrecisionContext, Scalar};
use crate::{Error, Result};

pub const DEFAULT_DEPTH_CAP: u64 = 1_000_000;
pub const DEPTH_CAP_ENV: &str = "CFX_MAX_DEPTH";

/// The depth cap, overridable through `CFX_MAX_DEPTH`.
pub fn depth_cap() -> u64 {
    std::env::var(DEPTH_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_DEPTH_CAP)
}

type TermFn<T> = dyn Fn(u64) -> Result<(T, T)> + Send + Sync;

/// Partial numerators and denominators `m -> (a_m, b_m)` for `m >= 1`.
///
/// A rule may be finite, in which case the fraction terminates after `length` terms.
#[derive(Clone)]
pub struct CoefficientRule<T> {
    terms: Arc<TermFn<T>>,
    length: Option<u64>,
}

impl<T: Scalar> CoefficientRule<T> {
    pub fn new(f: impl Fn(u64) -> (T, T) + Send + Sync + 'static) -> Self {
        Self {
            terms: Arc::new(move |m| Ok(f(m))),
            length: None,
        }
    }

    pub fn fallible(f: impl Fn(u64) -> Result<(T, T)> + Send + Sync + 'static) -> Self {
        Self {
            terms: Arc::new(f),
            length: None,
        }
    }

    /// A rule with no terms: the fraction is just its head.
    pub fn empty() -> Self {
        Self {
            terms: Arc::new(|m| {
                Err(Error::Precondition(format!(
                    "empty rule queried at m = {m}"
                )))
            }),
            length: Some(0),
        }
    }

    pub fn length(&self) -> Option<u64> {
        self.length
    }

    /// `(a_m, b_m)`, or `None` past the end of a finite rule.
    pub fn terms(&self, m: u64) -> Result<Option<(T, T)>> {
        if m == 0 {
            return Err(Error::Precondition(
                "coefficients are indexed from m = 1".into(),
            ));
        }
        if self.length.is_some_and(|len| m > len) {
            return Ok(None);
        }
        (self.terms)(m).map(Some)
    }
}

/// Outer shape applied to `x = b0 + K(...)`.
#[derive(Clone, Debug)]
pub enum Wrapper<T> {
    /// `prefix + scale * x`
    Affine,
    /// `prefix + scale * (offset - 1 / (shift + factor * x))`
    ReciprocalAffine { offset: T, shift: T, factor: T },
}

/// A continued-fraction family member: the value
/// `prefix + scale * w(head + K_{m>=1}(a_m / b_m))`.
#[derive(Clone)]
pub struct ExpansionSpec<T> {
    name: String,
    head: T,
    rule: CoefficientRule<T>,
    prefix: T,
    scale: T,
    wrapper: Wrapper<T>,
}

impl<T: Scalar> ExpansionSpec<T> {
    pub fn new(name: impl Into<String>, head: T, rule: CoefficientRule<T>) -> Self {
        Self {
            name: name.into(),
            prefix: head.zero_like(),
            scale: head.one_like(),
            head,
            rule,
            wrapper: Wrapper::Affine,
        }
    }

    pub fn with_affine(mut self, prefix: T, scale: T) -> Result<Self> {
        if scale.is_zero_value() {
            return Err(Error::Parameter(format!(
                "{}: scale must be non-zero",
                self.name
            )));
        }
        self.prefix = prefix;
        self.scale = scale;
        Ok(self)
    }

    pub fn with_reciprocal(mut self, offset: T, shift: T, factor: T) -> Self {
        self.wrapper = Wrapper::ReciprocalAffine {
            offset,
            shift,
            factor,
        };
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn head(&self) -> &T {
        &self.head
    }

    pub fn rule(&self) -> &CoefficientRule<T> {
        &self.rule
    }

    pub fn prefix(&self) -> &T {
        &self.prefix
    }

    pub fn scale(&self) -> &T {
        &self.scale
    }

    pub fn wrapper(&self) -> &Wrapper<T> {
        &self.wrapper
    }

    pub fn coefficients(&self, m: u64) -> Result<Option<(T, T)>> {
        self.rule.terms(m)
    }

    /// The bare `head + K(...)` with the outer shape removed.
    pub fn core(&self) -> Self {
        Self::new(
            format!("{}-core", self.name),
            self.head.clone(),
            self.rule.clone(),
        )
    }

    /// Applies prefix, scale and wrapper to a value of `head + K`.
    /// `None` when the reciprocal wrapper hits a pole.
    pub fn fold(&self, core_value: &T) -> Option<T> {
        let inner = match &self.wrapper {
            Wrapper::Affine => core_value.clone(),
            Wrapper::ReciprocalAffine {
                offset,
                shift,
                factor,
            } => {
                let den = shift.clone() + &(factor.clone() * core_value);
                offset.clone() - &den.recip()?
            }
        };
        Some(self.prefix.clone() + &(self.scale.clone() * &inner))
    }

    pub fn convergents(&self) -> Convergents<'_, T> {
        Convergents {
            spec: self,
            state: None,
            failed: false,
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for ExpansionSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExpansionSpec")
            .field("name", &self.name)
            .field("head", &self.head)
            .field("prefix", &self.prefix)
            .field("scale", &self.scale)
            .field("wrapper", &self.wrapper)
            .field("length", &self.rule.length)
            .finish()
    }
}

/// Euler–Wallis running state at depth `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergentState<T> {
    pub p_prev: T,
    pub p_cur: T,
    pub q_prev: T,
    pub q_cur: T,
    pub k: u64,
}

impl<T: Scalar> ConvergentState<T> {
    /// Depth-0 state: `P_{-1} = 1, Q_{-1} = 0, P_0 = b0, Q_0 = 1`.
    pub fn start(head: &T) -> Self {
        Self {
            p_prev: head.one_like(),
            p_cur: head.clone(),
            q_prev: head.zero_like(),
            q_cur: head.one_like(),
            k: 0,
        }
    }

    /// `P_k Q_{k-1} - P_{k-1} Q_k`, equal to `(-1)^(k-1) a_1 ... a_k`.
    pub fn determinant(&self) -> T {
        self.p_cur.clone() * &self.q_prev - &(self.p_prev.clone() * &self.q_cur)
    }

    /// `P_k / Q_k`, `None` when `Q_k = 0`.
    pub fn ratio(&self) -> Option<T> {
        self.p_cur.checked_div(&self.q_cur)
    }
}

/// One Euler–Wallis step. A zero partial numerator is rejected.
pub fn euler_wallis_step<T: Scalar>(
    state: &ConvergentState<T>,
    a: &T,
    b: &T,
) -> Result<ConvergentState<T>> {
    if a.is_zero_value() {
        return Err(Error::Precondition(format!(
            "partial numerator a_{} is zero",
            state.k + 1
        )));
    }
    let p = b.clone() * &state.p_cur + &(a.clone() * &state.p_prev);
    let q = b.clone() * &state.q_cur + &(a.clone() * &state.q_prev);
    Ok(ConvergentState {
        p_prev: state.p_cur.clone(),
        p_cur: p,
        q_prev: state.q_cur.clone(),
        q_cur: q,
        k: state.k + 1,
    })
}

/// Convergent `k` of an expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct Convergent<T> {
    pub k: u64,
    /// Raw Euler–Wallis numerator of `head + K`.
    pub p: T,
    /// Raw Euler–Wallis denominator of `head + K`.
    pub q: T,
    /// Folded value of the whole expansion; `None` marks a singular convergent.
    pub value: Option<T>,
}

impl<T> Convergent<T> {
    pub fn is_singular(&self) -> bool {
        self.value.is_none()
    }
}

/// Lazy convergent sequence starting at depth 0. A finite rule keeps repeating
/// its final raw state past its length.
pub struct Convergents<'a, T> {
    spec: &'a ExpansionSpec<T>,
    state: Option<ConvergentState<T>>,
    failed: bool,
}

impl<'a, T: Scalar> Convergents<'a, T> {
    fn emit(&self, state: &ConvergentState<T>) -> Convergent<T> {
        let value = state.ratio().and_then(|r| self.spec.fold(&r));
        Convergent {
            k: state.k,
            p: state.p_cur.clone(),
            q: state.q_cur.clone(),
            value,
        }
    }

    pub fn state(&self) -> Option<&ConvergentState<T>> {
        self.state.as_ref()
    }
}

impl<'a, T: Scalar> Iterator for Convergents<'a, T> {
    type Item = Result<Convergent<T>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let next = match &self.state {
            None => ConvergentState::start(&self.spec.head),
            Some(state) => match self.spec.coefficients(state.k + 1) {
                Ok(Some((a, b))) => match euler_wallis_step(state, &a, &b) {
                    Ok(s) => s,
                    Err(e) => {
                        self.failed = true;
                        return Some(Err(e));
                    }
                },
                Ok(None) => ConvergentState {
                    k: state.k + 1,
                    ..state.clone()
                },
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
            },
        };
        let out = self.emit(&next);
        self.state = Some(next);
        Some(Ok(out))
    }
}

/// Convergents `0..=depth`.
pub fn convergents<T: Scalar>(spec: &ExpansionSpec<T>, depth: u64) -> Result<Vec<Convergent<T>>> {
    spec.convergents().take(depth as usize + 1).collect()
}

/// `C_k - C_{k-1}` by exact subtraction of folded convergents.
pub fn successive_difference<T: Scalar>(spec: &ExpansionSpec<T>, k: u64) -> Result<T> {
    if k == 0 {
        return Err(Error::Precondition("differences start at k = 1".into()));
    }
    let cs = convergents(spec, k)?;
    match (&cs[k as usize - 1].value, &cs[k as usize].value) {
        (Some(prev), Some(cur)) => Ok(cur.clone() - prev),
        _ => Err(Error::Singular(format!(
            "{}: difference C_{k} - C_{} is undefined",
            spec.name(),
            k - 1
        ))),
    }
}

/// Rescales `a_m -> r_m r_{m-1} a_m`, `b_m -> r_m b_m` with `r_0 = 1`. Convergent
/// values are unchanged; raw `P_k, Q_k` pick up the factor `r_1 ... r_k`. A zero
/// `r_m` surfaces as an error when term `m` is requested.
pub fn equivalence_transform<T, R>(spec: &ExpansionSpec<T>, r: R) -> ExpansionSpec<T>
where
    T: Scalar,
    R: Fn(u64) -> T + Send + Sync + 'static,
{
    let inner = spec.rule.clone();
    let r = Arc::new(r);
    let terms = move |m: u64| -> Result<(T, T)> {
        let (a, b) = (inner.terms)(m)?;
        let rm = r(m);
        if rm.is_zero_value() {
            return Err(Error::InvalidTransform(format!("r_{m} = 0")));
        }
        let r_prev = if m == 1 { rm.one_like() } else { r(m - 1) };
        Ok((rm.clone() * &r_prev * &a, rm * &b))
    };
    ExpansionSpec {
        name: format!("{}-equiv", spec.name),
        head: spec.head.clone(),
        rule: CoefficientRule {
            terms: Arc::new(terms),
            length: spec.rule.length,
        },
        prefix: spec.prefix.clone(),
        scale: spec.scale.clone(),
        wrapper: spec.wrapper.clone(),
    }
}

/// A candidate tail sequence `j -> t_j`, `j >= 0`.
#[derive(Clone)]
pub struct TailSequence<T> {
    t: Arc<dyn Fn(u64) -> T + Send + Sync>,
}

impl<T: Scalar> TailSequence<T> {
    pub fn new(t: impl Fn(u64) -> T + Send + Sync + 'static) -> Self {
        Self { t: Arc::new(t) }
    }

    pub fn value(&self, j: u64) -> T {
        (self.t)(j)
    }

    /// First `j` in `1..=j_max` where `t_{j-1} (b_j + t_j) = a_j` fails.
    pub fn first_violation(&self, rule: &CoefficientRule<T>, j_max: u64) -> Result<Option<u64>> {
        for j in 1..=j_max {
            let Some((a, b)) = rule.terms(j)? else {
                break;
            };
            let lhs = self.value(j - 1) * &(b + &self.value(j));
            if !(lhs - &a).is_zero_value() {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    /// `sum_{k=0}^{l} prod_{j=1}^{k} (b_j + t_j) / (-t_j)`.
    pub fn sigma_partial(&self, rule: &CoefficientRule<T>, l: u64) -> Result<T> {
        let t0 = self.value(0);
        let mut term = t0.one_like();
        let mut sum = term.clone();
        for j in 1..=l {
            let (_, b) = rule
                .terms(j)?
                .ok_or_else(|| Error::Precondition(format!("rule has no term {j}")))?;
            let t = self.value(j);
            let ratio = (b + &t)
                .checked_div(&(-t))
                .ok_or_else(|| Error::DivisionByZero(format!("t_{j} = 0")))?;
            term = term * &ratio;
            sum = sum + &term;
        }
        Ok(sum)
    }
}

/// Value of a fraction from its tail sequence: `t0 (1 - 1/sigma_inf)`.
pub fn waadeland_limit<T: Scalar>(t0: &T, sigma_inf: &T) -> Result<T> {
    let inv = sigma_inf
        .recip()
        .ok_or_else(|| Error::DivisionByZero("sigma_inf = 0".into()))?;
    Ok(t0.clone() * &(t0.one_like() - &inv))
}

/// `a1 / (b1 + tail_value)`: prepends one partial fraction to a tail value.
pub fn unshift_first_step<T: Scalar>(a1: &T, b1: &T, tail_value: &T) -> Result<T> {
    let den = b1.clone() + tail_value;
    a1.checked_div(&den)
        .ok_or_else(|| Error::Singular("b1 + tail value = 0".into()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitEstimate<T> {
    pub value: T,
    /// Depth of the returned convergent.
    pub depth: u64,
}

/// Iterates until `|C_k - C_{k-1}| < 10^(-target_digits) max(1, |C_k|)` holds for
/// two consecutive `k`, then returns `C_k`.
pub fn estimate_limit<T: Scalar>(
    spec: &ExpansionSpec<T>,
    target_digits: u32,
    cap: u64,
) -> Result<LimitEstimate<T>> {
    let mut prev: Option<T> = None;
    let mut streak = 0;
    for c in spec.convergents() {
        let c = c?;
        if c.k > cap {
            return Err(Error::NonConvergence {
                cap,
                detail: format!("{} did not reach {target_digits} digits", spec.name()),
            });
        }
        match (&prev, &c.value) {
            (Some(p), Some(v)) => {
                let d = v.clone() - p;
                if d.is_negligible(v, target_digits) {
                    streak += 1;
                } else {
                    streak = 0;
                }
            }
            _ => streak = 0,
        }
        if streak >= 2 {
            return Ok(LimitEstimate {
                value: c.value.expect("checked above"),
                depth: c.k,
            });
        }
        prev = c.value;
    }
    Err(Error::NonConvergence {
        cap,
        detail: format!("{}: convergent sequence ended", spec.name()),
    })
}

/// A limit computed under the two-precision policy.
#[derive(Clone, Debug)]
pub struct CheckedLimit<T> {
    /// Value from the extended-precision run.
    pub value: T,
    pub depth: u64,
    pub coarse_depth: u64,
    /// `-log10` of the relative disagreement between the two runs.
    pub agreement_digits: f64,
}

/// Runs [`estimate_limit`] at `ctx` and at `ctx.extended()`; the results must
/// agree to `min(target_digits, working_digits - 2)` digits.
pub fn estimate_limit_two_precision<T, F>(
    build: F,
    ctx: PrecisionContext,
    target_digits: u32,
    cap: u64,
) -> Result<CheckedLimit<T>>
where
    T: Scalar,
    F: Fn(PrecisionContext) -> Result<ExpansionSpec<T>>,
{
    let coarse = estimate_limit(&build(ctx)?, target_digits, cap)?;
    let fine = estimate_limit(&build(ctx.extended())?, target_digits, cap)?;
    let diff = fine.value.clone() - &coarse.value;
    let required = target_digits.min(ctx.working_digits().saturating_sub(2));
    let agreement = fine.value.log10_abs().max(0.0) - diff.log10_abs();
    if !diff.is_negligible(&fine.value, required) {
        return Err(Error::Accuracy(format!(
            "precision runs agree to {agreement:.1} digits, {required} required"
        )));
    }
    Ok(CheckedLimit {
        value: fine.value,
        depth: fine.depth,
        coarse_depth: coarse.depth,
        agreement_digits: agreement,
    })
}

/// Exact-ring convenience: reduced convergent values as rationals.
pub fn rational_values(
    spec: &ExpansionSpec<BigRational>,
    depth: u64,
) -> Result<Vec<Option<BigRational>>> {
    Ok(convergents(spec, depth)?
        .into_iter()
        .map(|c| c.value)
        .collect())
}
