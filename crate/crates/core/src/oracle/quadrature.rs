//! Adaptive Gauss–Legendre quadrature over [`HighPrecReal`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::numeric::{BigRational, HighPrecReal, PrecisionContext, Scalar};
use crate::{Error, Result};

/// Points per panel.
pub const GAUSS_POINTS: usize = 32;
const MAX_BISECTIONS: u32 = 24;

type Rule = Arc<Vec<(HighPrecReal, HighPrecReal)>>;

/// Nodes and weights on `[-1, 1]` for `GAUSS_POINTS`, at the binary precision of `ctx`.
fn rule(ctx: PrecisionContext) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<PrecisionContext, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().expect("rule cache").get(&ctx) {
        return r.clone();
    }
    let r = Arc::new(legendre_rule(GAUSS_POINTS, ctx));
    cache.lock().expect("rule cache").insert(ctx, r.clone());
    r
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
fn legendre(n: usize, x: &HighPrecReal) -> (HighPrecReal, HighPrecReal) {
    let mut prev = x.one_like();
    let mut cur = x.clone();
    for k in 1..n {
        let k = k as i64;
        let next = (x.from_i64_like(2 * k + 1) * x * &cur - &(x.from_i64_like(k) * &prev))
            / &x.from_i64_like(k + 1);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn legendre_rule(n: usize, ctx: PrecisionContext) -> Vec<(HighPrecReal, HighPrecReal)> {
    let one = HighPrecReal::from_i64(1, ctx);
    let nn = HighPrecReal::from_i64(n as i64, ctx);
    let tol = -((ctx.working_digits() + ctx.guard_digits()) as f64) + 1.0;
    let mut out = Vec::with_capacity(n);
    for i in 0..n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = HighPrecReal::from_rational(&f64_to_rational(guess), ctx);
        let mut deriv = one.clone();
        for _ in 0..100 {
            let (p, q) = legendre(n, &x);
            // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
            deriv = nn.clone() * &(x.clone() * &p - &q) / &(x.clone() * &x - &one);
            let dx = p / &deriv;
            x = x - &dx;
            if dx.log10_abs() < tol {
                let (p, q) = legendre(n, &x);
                deriv = nn.clone() * &(x.clone() * &p - &q) / &(x.clone() * &x - &one);
                break;
            }
        }
        let w =
            HighPrecReal::from_i64(2, ctx) / &((one.clone() - &(x.clone() * &x)) * &deriv * &deriv);
        if 2 * i + 1 == n {
            out.push((HighPrecReal::zero(ctx), w));
        } else {
            out.push((-x.clone(), w.clone()));
            out.push((x, w));
        }
    }
    out
}

fn f64_to_rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite guess")
}

fn panel<F>(
    f: &F,
    a: &HighPrecReal,
    b: &HighPrecReal,
    nodes: &[(HighPrecReal, HighPrecReal)],
) -> HighPrecReal
where
    F: Fn(&HighPrecReal) -> HighPrecReal,
{
    let two = a.from_i64_like(2);
    let half = (b.clone() - a) / &two;
    let mid = (b.clone() + a) / &two;
    let sum = nodes.iter().fold(a.zero_like(), |acc, (x, w)| {
        acc + &(w.clone() * &f(&(mid.clone() + &(half.clone() * x))))
    });
    sum * &half
}

/// `int_a^b f` at the precision of `ctx`, bisecting until each panel agrees with
/// its two halves to `digits` relative to `max(1, |total estimate|)`.
pub fn integrate<F>(
    f: &F,
    a: &BigRational,
    b: &BigRational,
    ctx: PrecisionContext,
    digits: u32,
) -> Result<HighPrecReal>
where
    F: Fn(&HighPrecReal) -> HighPrecReal,
{
    let nodes = rule(ctx);
    let (a, b) = (
        HighPrecReal::from_rational(a, ctx),
        HighPrecReal::from_rational(b, ctx),
    );
    let whole = panel(f, &a, &b, &nodes);
    let scale = whole.clone();
    refine(f, &a, &b, whole, &scale, &nodes, digits, 0)
}

#[allow(clippy::too_many_arguments)]
fn refine<F>(
    f: &F,
    a: &HighPrecReal,
    b: &HighPrecReal,
    whole: HighPrecReal,
    scale: &HighPrecReal,
    nodes: &[(HighPrecReal, HighPrecReal)],
    digits: u32,
    level: u32,
) -> Result<HighPrecReal>
where
    F: Fn(&HighPrecReal) -> HighPrecReal,
{
    let mid = (a.clone() + b) / &a.from_i64_like(2);
    let left = panel(f, a, &mid, nodes);
    let right = panel(f, &mid, b, nodes);
    let halves = left.clone() + &right;
    // one guard digit for the accumulation over panels
    if (halves.clone() - &whole).is_negligible(scale, digits + 1) {
        return Ok(halves);
    }
    if level >= MAX_BISECTIONS {
        return Err(Error::Accuracy(format!(
            "quadrature did not reach {digits} digits after {MAX_BISECTIONS} bisections"
        )));
    }
    let l = refine(f, a, &mid, left, scale, nodes, digits, level + 1)?;
    let r = refine(f, &mid, b, right, scale, nodes, digits, level + 1)?;
    Ok(l + &r)
}

/// A quadrature value accepted under the two-precision policy.
#[derive(Clone, Debug)]
pub struct CheckedIntegral {
    pub value: HighPrecReal,
    pub agreement_digits: f64,
}

/// [`integrate`] at `ctx` and `ctx.extended()`; the runs must agree to
/// `min(digits, working_digits - 2)` digits.
pub fn integrate_two_precision<F>(
    f: &F,
    a: &BigRational,
    b: &BigRational,
    ctx: PrecisionContext,
    digits: u32,
) -> Result<CheckedIntegral>
where
    F: Fn(&HighPrecReal) -> HighPrecReal,
{
    let coarse = integrate(f, a, b, ctx, digits)?;
    let fine = integrate(f, a, b, ctx.extended(), digits + ctx.guard_digits())?;
    let diff = fine.clone() - &coarse;
    let required = digits.min(ctx.working_digits().saturating_sub(2));
    let agreement = fine.log10_abs().max(0.0) - diff.log10_abs();
    if !diff.is_negligible(&fine, required) {
        return Err(Error::Accuracy(format!(
            "quadrature precision runs agree to {agreement:.1} digits, {required} required"
        )));
    }
    Ok(CheckedIntegral {
        value: fine,
        agreement_digits: agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational_from_i64 as int;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let ctx = PrecisionContext::with_digits(40);
        let nodes = rule(ctx);
        assert_eq!(nodes.len(), GAUSS_POINTS);
        let total = nodes
            .iter()
            .fold(HighPrecReal::zero(ctx), |acc, (_, w)| acc + w);
        assert!((total - &HighPrecReal::from_i64(2, ctx)).log10_abs() < -45.0);
        // int_{-1}^{1} x^62 = 2/63
        let moment = nodes.iter().fold(HighPrecReal::zero(ctx), |acc, (x, w)| {
            acc + &(w.clone() * &x.powi(62))
        });
        let expected = HighPrecReal::from_rational(&BigRational::new(2.into(), 63.into()), ctx);
        assert!((moment - &expected).log10_abs() < -45.0);
    }

    #[test]
    fn exponential_integral() {
        let ctx = PrecisionContext::with_digits(40);
        // int_0^1 e^(3t) dt = (e^3 - 1)/3
        let f = |t: &HighPrecReal| (t.from_i64_like(3) * t).exp();
        let got = integrate_two_precision(&f, &int(0), &int(1), ctx, 38).unwrap();
        let e3 = HighPrecReal::from_i64(3, ctx.extended()).exp();
        let expected = (e3 - &HighPrecReal::from_i64(1, ctx)) / &HighPrecReal::from_i64(3, ctx);
        assert!((got.value - &expected).log10_abs() < -38.0);
    }

    #[test]
    fn singular_integrand_forces_bisection() {
        let ctx = PrecisionContext::with_digits(20);
        // int_0^1 sqrt(t) dt = 2/3, endpoint singularity in the derivative
        let f = |t: &HighPrecReal| t.sqrt().unwrap();
        let got = integrate(&f, &int(0), &int(1), ctx, 15).unwrap();
        let expected = HighPrecReal::from_rational(&BigRational::new(2.into(), 3.into()), ctx);
        assert!((got - &expected).log10_abs() < -14.0);
    }
}
