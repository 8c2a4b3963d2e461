//! Series and quadrature evaluators used as ground truth for the continued
//! fractions. None of these share code with the convergent engine.

pub mod quadrature;

use num_traits::Zero;

use crate::cf::{depth_cap, CoefficientRule};
use crate::expansions::{exp_n_shifted_tail, make_exp_n_shifted};
use crate::numeric::{
    factorial, pochhammer, rational_from_i64 as int, ten_pow, BigInt, BigRational, Domain,
    HighPrecComplex, HighPrecReal, PrecisionContext, Scalar,
};
use crate::{Error, Result};

pub use quadrature::{integrate, integrate_two_precision, CheckedIntegral};

#[derive(Clone, Debug)]
pub struct SeriesResult<T> {
    pub value: T,
    pub terms_used: u64,
    /// Upper bound on the absolute truncation error, rounded up to a power of ten.
    pub tail_bound: HighPrecReal,
}

fn magnitude<T: Scalar>(x: &T) -> f64 {
    10f64.powf(x.log10_abs())
}

/// Sums `sum_k t_k` with `t_0 = first`, `t_{k+1} = t_k * ratio(k)`.
///
/// `majorant(k)` must bound `|ratio(j)|` for every `j >= k` (or be infinite).
/// Once it drops below 1/2 the remaining terms are dominated by a geometric
/// series, and summation stops when that bound is below `10^(-digits) max(1, |sum|)`.
fn hyper_sum<T: Scalar>(
    first: T,
    ratio: impl Fn(u64, &T) -> T,
    majorant: impl Fn(u64) -> f64,
    digits: u32,
) -> Result<SeriesResult<T>> {
    let cap = depth_cap();
    let mut term = first;
    let mut sum = term.clone();
    let mut k = 0u64;
    loop {
        let r = majorant(k);
        if r < 0.5 {
            let bound = term.log10_abs() + r.log10() - (1.0 - r).log10();
            let scale = sum.log10_abs().max(0.0);
            if bound < scale - digits as f64 || term.is_zero_value() {
                return Ok(SeriesResult {
                    value: sum,
                    terms_used: k + 1,
                    tail_bound: power_of_ten_above(bound, digits),
                });
            }
        }
        if k >= cap {
            return Err(Error::NonConvergence {
                cap,
                detail: "series did not reach its tail bound".into(),
            });
        }
        term = ratio(k, &term);
        sum = sum + &term;
        k += 1;
    }
}

fn power_of_ten_above(log10: f64, digits: u32) -> HighPrecReal {
    let ctx = PrecisionContext::with_digits(digits);
    if log10 == f64::NEG_INFINITY {
        return HighPrecReal::zero(ctx);
    }
    let e = log10.ceil() as i64;
    let v = if e >= 0 {
        BigRational::from_integer(ten_pow(e as u32))
    } else {
        BigRational::new(BigInt::from(1), ten_pow((-e) as u32))
    };
    HighPrecReal::from_rational(&v, ctx)
}

fn pole_check<T: Domain>(params: &[&T], what: &str) -> Result<()> {
    if params.iter().any(|b| b.is_nonpositive_integer()) {
        return Err(Error::Parameter(format!(
            "{what}: denominator parameter is a non-positive integer"
        )));
    }
    Ok(())
}

/// `sum_k x^k / k!`.
pub fn exp_series<T: Scalar>(x: &T, digits: u32) -> Result<SeriesResult<T>> {
    let ax = magnitude(x);
    hyper_sum(
        x.one_like(),
        |k, t| t.clone() * x / &x.from_i64_like(k as i64 + 1),
        |k| ax / (k + 1) as f64,
        digits,
    )
}

/// Majorant of `prod |a_i + j| / prod |b_i + j| * |z| / (j + 1)` over `j >= k`.
fn ratio_majorant(k: u64, a: &[f64], b: &[f64], z: f64) -> f64 {
    let k = k as f64;
    let mut r = z / (k + 1.0);
    for &bi in b {
        if k <= bi {
            return f64::INFINITY;
        }
        r /= k - bi;
    }
    for &ai in a {
        r *= k + ai;
    }
    r
}

/// `1F1(1; b; z) = sum_k z^k / (b)_k`.
pub fn hyp_1f1<T: Domain>(b: &T, z: &T, digits: u32) -> Result<SeriesResult<T>> {
    pole_check(&[b], "1F1")?;
    let (ab, az) = (magnitude(b), magnitude(z));
    hyper_sum(
        z.one_like(),
        |k, t| t.clone() * z / &(b.clone() + &b.from_i64_like(k as i64)),
        // |z| / |b + j| <= |z| / (j - |b|)
        |k| ratio_majorant(k, &[1.0], &[ab], az),
        digits,
    )
}

/// `2F2(a1, a2; b1, b2; z)`.
pub fn hyp_2f2<T: Domain>(
    a1: &T,
    a2: &T,
    b1: &T,
    b2: &T,
    z: &T,
    digits: u32,
) -> Result<SeriesResult<T>> {
    pole_check(&[b1, b2], "2F2")?;
    let a = [magnitude(a1), magnitude(a2)];
    let b = [magnitude(b1), magnitude(b2)];
    let az = magnitude(z);
    hyper_sum(
        z.one_like(),
        |k, t| {
            let j = z.from_i64_like(k as i64);
            let num = (a1.clone() + &j) * &(a2.clone() + &j) * z;
            let den = (b1.clone() + &j) * &(b2.clone() + &j) * &z.from_i64_like(k as i64 + 1);
            t.clone() * &num / &den
        },
        |k| ratio_majorant(k, &a, &b, az),
        digits,
    )
}

/// `gamma(s, x) = x^s e^(-x) sum_k x^k / (s)_{k+1}`, principal branch of `x^s`.
pub fn lower_inc_gamma(
    s: &HighPrecComplex,
    x: &HighPrecComplex,
    digits: u32,
) -> Result<SeriesResult<HighPrecComplex>> {
    if s.is_nonpositive_integer() {
        return Err(Error::Domain(
            "gamma(s, x): s is a non-positive integer".into(),
        ));
    }
    if !x.in_cut_plane()? {
        return Err(Error::Domain(
            "gamma(s, x): x lies on the branch cut".into(),
        ));
    }
    let (asv, ax) = (magnitude(s), magnitude(x));
    let sum = hyper_sum(
        s.one_like() / s,
        |k, t| t.clone() * x / &(s.clone() + &s.from_i64_like(k as i64 + 1)),
        // |s + j + 1| >= j + 1 - |s|
        |k| {
            let d = (k + 1) as f64 - asv;
            if d > 0.0 {
                ax / d
            } else {
                f64::INFINITY
            }
        },
        digits,
    )?;
    let front = x.powc(s)? * &(-x.clone()).exp();
    Ok(SeriesResult {
        value: front * &sum.value,
        ..sum
    })
}

/// `gamma(z, z) / (z^(z-1) e^(-z))`, the left side of the incomplete-gamma fraction.
pub fn inc_gamma_ratio(z: &HighPrecComplex, digits: u32) -> Result<HighPrecComplex> {
    let g = lower_inc_gamma(z, z, digits)?;
    let zm1 = z.clone() - &z.one_like();
    let den = z.powc(&zm1)? * &(-z.clone()).exp();
    Ok(g.value / &den)
}

/// Closed form `l! (1 - e^(-x) sum_{k<=l} x^k/k!)` of `gamma(l+1, x)`.
pub fn lower_inc_gamma_integer(l: u64, x: &HighPrecReal) -> HighPrecReal {
    let mut term = x.one_like();
    let mut sum = term.clone();
    for k in 1..=l {
        term = term * x / &x.from_i64_like(k as i64);
        sum = sum + &term;
    }
    let fact = HighPrecReal::from_bigint(&factorial(l), x.context());
    fact * &(x.one_like() - &((-x.clone()).exp() * &sum))
}

/// Partial sums of the tail-theorem series for the exponential fractions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaVariant {
    /// `sum_{k<=l} (1)_k (1)_k / ((3)_k (n+2)_k) n^k / k!`, checked term by term
    /// against the product over the tail `t_j = -(j+n+1)(j+2)/(j+1)`.
    Integer { n: u64 },
    /// `sum_{k<=l} ((n-1)z+1)_k (1)_k / ((nz+2)_k ((n-1)z+3)_k) z^k / k!` at `z = l/n`.
    Rational { l: u64, n: u64 },
}

pub fn sigma_partial(variant: SigmaVariant, depth: u64) -> Result<BigRational> {
    match variant {
        SigmaVariant::Integer { n } => {
            let spec = make_exp_n_shifted(n)?;
            let tail = exp_n_shifted_tail(n);
            let nq = int(n as i64);
            let (one, three, np2) = (int(1), int(3), int(n as i64 + 2));
            let mut sum = BigRational::zero();
            for k in 0..=depth {
                let hyper = pochhammer(&one, k) * pochhammer(&one, k)
                    / (pochhammer(&three, k) * pochhammer(&np2, k))
                    * num_traits::pow(nq.clone(), k as usize)
                    / BigRational::from_integer(factorial(k));
                let product =
                    tail.sigma_partial(spec.rule(), k)? - &tail_prefix(&tail, spec.rule(), k)?;
                if product != hyper {
                    return Err(Error::Accuracy(format!(
                        "sigma term {k}: product {product} differs from hypergeometric term {hyper}"
                    )));
                }
                sum += hyper;
            }
            Ok(sum)
        }
        SigmaVariant::Rational { l, n } => {
            if l == 0 || l >= n {
                return Err(Error::Parameter(format!(
                    "rational sigma requires 1 <= l < n, got ({l}, {n})"
                )));
            }
            let z = BigRational::new(BigInt::from(l), BigInt::from(n));
            let nq = int(n as i64);
            let a1 = (nq.clone() - int(1)) * &z + int(1);
            let b1 = nq * &z + int(2);
            let b2 = a1.clone() + int(2);
            let mut term = int(1);
            let mut sum = term.clone();
            for k in 0..depth {
                let kq = int(k as i64);
                term = term * (a1.clone() + &kq) * (int(1) + &kq) * &z
                    / ((b1.clone() + &kq) * (b2.clone() + &kq) * (kq + int(1)));
                sum += &term;
            }
            Ok(sum)
        }
    }
}

/// `sigma_{k-1}`, so that `sigma_k - sigma_{k-1}` isolates the `k`-th product.
fn tail_prefix(
    tail: &crate::cf::TailSequence<BigRational>,
    rule: &CoefficientRule<BigRational>,
    k: u64,
) -> Result<BigRational> {
    if k == 0 {
        return Ok(BigRational::zero());
    }
    tail.sigma_partial(rule, k - 1)
}

/// Both sides of `R_n = (n^n/(n-1)!) int_0^1 (1-t)^(n-1) e^(nt) dt = e^n - sum_{k<n} n^k/k!`.
#[derive(Clone, Debug)]
pub struct TaylorRemainder {
    pub series: SeriesResult<HighPrecReal>,
    pub integral: HighPrecReal,
    pub agreement_digits: f64,
}

pub fn taylor_remainder(n: u64, ctx: PrecisionContext, digits: u32) -> Result<TaylorRemainder> {
    if n == 0 {
        return Err(Error::Parameter("taylor remainder requires n >= 1".into()));
    }
    let x = HighPrecReal::from_i64(n as i64, ctx);
    // the series side starts directly at n^n/n!
    let first = x.powi(n as usize) / &HighPrecReal::from_bigint(&factorial(n), ctx);
    let ax = n as f64;
    let series = hyper_sum(
        first,
        |k, t| t.clone() * &x / &x.from_i64_like((k + n + 1) as i64),
        |k| ax / (k + n + 1) as f64,
        digits,
    )?;
    let integral = remainder_integral(n, ctx, digits)?;
    let scale = HighPrecReal::from_bigint(&num_traits::pow(BigInt::from(n), n as usize), ctx)
        / &HighPrecReal::from_bigint(&factorial(n - 1), ctx);
    let integral = scale * &integral;
    let diff = series.value.clone() - &integral;
    let agreement = series.value.log10_abs().max(0.0) - diff.log10_abs();
    if !diff.is_negligible(&series.value, digits) {
        return Err(Error::Accuracy(format!(
            "Taylor remainder sides agree to {agreement:.1} digits, {digits} required"
        )));
    }
    Ok(TaylorRemainder {
        series,
        integral,
        agreement_digits: agreement,
    })
}

/// `int_0^1 (1-t)^(n-1) e^(nt) dt` by quadrature under the two-precision policy.
pub fn remainder_integral(n: u64, ctx: PrecisionContext, digits: u32) -> Result<HighPrecReal> {
    let f = move |t: &HighPrecReal| {
        let one = t.one_like();
        (one - t).powi(n as usize - 1) * &(t.from_i64_like(n as i64) * t).exp()
    };
    Ok(integrate_two_precision(&f, &int(0), &int(1), ctx, digits)?.value)
}

/// `int_0^1 t^(-l/n) e^(tl/n) (l(t-1) + n) dt`, computed after substituting
/// `t = u^n`, which turns the integrand into `n u^(n-1-l) e^(l u^n / n) (l(u^n - 1) + n)`.
pub fn rational_exp_integral(
    l: u64,
    n: u64,
    ctx: PrecisionContext,
    digits: u32,
) -> Result<HighPrecReal> {
    if l == 0 || l >= n {
        return Err(Error::Parameter(format!(
            "integral requires 1 <= l < n, got ({l}, {n})"
        )));
    }
    let (li, ni) = (l as i64, n as i64);
    let f = move |u: &HighPrecReal| {
        let un = u.powi(n as usize);
        let lq = u.from_i64_like(li);
        let nq = u.from_i64_like(ni);
        let expo = (lq.clone() * &un / &nq).exp();
        let poly = lq * &(un - &u.one_like()) + &nq;
        nq * &u.powi((n - 1 - l) as usize) * &expo * &poly
    };
    Ok(integrate_two_precision(&f, &int(0), &int(1), ctx, digits)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ctx40() -> PrecisionContext {
        PrecisionContext::new(40, 10).unwrap()
    }

    fn real(v: &BigRational) -> HighPrecReal {
        HighPrecReal::from_rational(v, ctx40())
    }

    fn close(a: &HighPrecReal, b: &HighPrecReal, digits: u32) -> bool {
        (a.clone() - b).is_negligible(b, digits)
    }

    #[test]
    fn exp_series_values() {
        assert_eq!(exp_series(&q(0, 1), 30).unwrap().value, q(1, 1));
        let e = exp_series(&real(&q(1, 1)), 45).unwrap();
        assert_eq!(e.value.to_decimal(30), "2.718281828459045235360287471353");
        assert!(e.tail_bound.log10_abs() < -43.9);
        let root = exp_series(&real(&q(1, 2)), 45).unwrap().value;
        assert!(close(&(root.clone() * &root), &e.value, 40));
        let e2 = exp_series(&real(&q(2, 1)), 45).unwrap().value;
        assert!(close(&e2, &(e.value.clone() * &e.value), 40));
        // the exact variant brackets the truncation
        let exact = exp_series(&q(1, 1), 30).unwrap();
        let diff = real(&exact.value) - &e.value;
        assert!(diff.abs() <= exact.tail_bound.with_context(ctx40()));
    }

    #[test]
    fn incomplete_gamma_values() {
        let c = |re: i64, im: i64| HighPrecComplex::from_rationals(&q(re, 1), &q(im, 1), ctx40());
        let g1 = lower_inc_gamma(&c(1, 0), &c(1, 0), 40).unwrap().value;
        assert_eq!(g1.re().to_decimal(12), "0.632120558829");
        assert!(g1.is_real());
        let g2 = lower_inc_gamma(&c(2, 0), &c(1, 0), 40).unwrap().value;
        assert_eq!(g2.re().to_decimal(12), "0.264241117657");
        assert!(matches!(
            lower_inc_gamma(&c(-2, 0), &c(1, 0), 40),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            lower_inc_gamma(&c(1, 0), &c(-3, 0), 40),
            Err(Error::Domain(_))
        ));
        // integer-order closed form
        let (l, n) = (2u64, 5u64);
        let x = HighPrecComplex::from_rational(&q(l as i64, n as i64), ctx40());
        let series = lower_inc_gamma(&c(l as i64 + 1, 0), &x, 40).unwrap().value;
        let closed = lower_inc_gamma_integer(l, x.re());
        assert!(close(series.re(), &closed, 38));
    }

    #[test]
    fn confluent_values() {
        let r = |v: i64| real(&q(v, 1));
        let v = hyp_1f1(&r(2), &r(1), 40).unwrap().value;
        assert_eq!(v.to_decimal(12), "1.718281828459");
        assert_eq!(hyp_1f1(&q(7, 2), &q(0, 1), 10).unwrap().value, q(1, 1));
        assert!(matches!(
            hyp_1f1(&q(-1, 1), &q(1, 1), 10),
            Err(Error::Parameter(_))
        ));
        let z = HighPrecComplex::from_rationals(&q(2, 1), &q(3, 1), ctx40());
        let w = hyp_1f1(&(z.clone() + &z.one_like()), &z, 40).unwrap().value;
        assert_eq!(w.re().to_decimal(30), "2.484910821523341062296354358356");
        assert_eq!(w.im().to_decimal(30), "1.089817194533529540353843410378");
    }

    #[test]
    fn two_f_two_values() {
        let r = |v: i64| real(&q(v, 1));
        let v = hyp_2f2(&r(1), &r(1), &r(3), &r(3), &r(1), 40)
            .unwrap()
            .value;
        assert_eq!(v.to_decimal(30), "1.126872686163819058558850114589");
        let e = exp_series(&r(1), 45).unwrap().value;
        assert!(close(&v, &(r(4) * &(r(3) - &e)), 38));
        // (3/2)(3 - (1/2)(e^2 - 3))
        let w = hyp_2f2(&r(1), &r(1), &r(3), &r(4), &r(2), 40)
            .unwrap()
            .value;
        let e2 = e.clone() * &e;
        let half = real(&q(1, 2));
        let rhs = real(&q(3, 2)) * &(r(3) - &(half * &(e2 - &r(3))));
        assert!(close(&w, &rhs, 38));
        assert_eq!(
            hyp_2f2(&q(5, 1), &q(5, 1), &q(3, 1), &q(3, 1), &q(0, 1), 10)
                .unwrap()
                .value,
            q(1, 1)
        );
        assert!(hyp_2f2(&q(1, 1), &q(1, 1), &q(0, 1), &q(3, 1), &q(1, 1), 10).is_err());
    }

    #[test]
    fn sigma_partials() {
        assert_eq!(
            sigma_partial(SigmaVariant::Integer { n: 1 }, 0).unwrap(),
            q(1, 1)
        );
        assert_eq!(
            sigma_partial(SigmaVariant::Integer { n: 1 }, 1).unwrap(),
            q(10, 9)
        );
        let direct = q(1, 1) + q(2, 12) + q(2 * 2 * 4, 3 * 4 * 4 * 5 * 2);
        assert_eq!(
            sigma_partial(SigmaVariant::Integer { n: 2 }, 2).unwrap(),
            direct
        );
        assert!(sigma_partial(SigmaVariant::Integer { n: 6 }, 40).is_ok());
        let s = sigma_partial(SigmaVariant::Rational { l: 1, n: 3 }, 1).unwrap();
        let z = q(1, 3);
        let a1 = q(2, 1) * &z + q(1, 1);
        assert_eq!(
            s,
            q(1, 1) + a1.clone() * &z / ((q(3, 1) * &z + q(2, 1)) * (a1 + q(2, 1)))
        );
    }

    #[test]
    fn taylor_remainders() {
        let ctx = PrecisionContext::new(30, 10).unwrap();
        let r1 = taylor_remainder(1, ctx, 25).unwrap();
        assert_eq!(r1.series.value.to_decimal(20), "1.71828182845904523536");
        let r2 = taylor_remainder(2, ctx, 25).unwrap();
        assert_eq!(r2.series.value.to_decimal(12), "4.389056098931");
        let r3 = taylor_remainder(3, ctx, 25).unwrap();
        let e3 =
            HighPrecReal::from_i64(3, ctx).exp() - &HighPrecReal::from_rational(&q(17, 2), ctx);
        assert!(close(&r3.integral, &e3, 25));
        assert!(taylor_remainder(0, ctx, 25).is_err());
    }

    #[test]
    fn rational_exponent_integral() {
        let ctx = PrecisionContext::new(30, 10).unwrap();
        let v = rational_exp_integral(1, 3, ctx, 25).unwrap();
        let expected =
            HighPrecReal::from_i64(3, ctx) * &HighPrecReal::from_rational(&q(1, 3), ctx).exp();
        assert!(close(&v, &expected, 25));
        assert!(rational_exp_integral(3, 3, ctx, 25).is_err());
    }
}
