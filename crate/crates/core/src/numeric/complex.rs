use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use super::{parse_rational, Domain, HighPrecReal, PrecisionContext, Scalar};
use crate::{Error, Result};

/// Rectangular complex number over [`HighPrecReal`]. The argument is derived on
/// demand; real inputs keep an exactly zero imaginary part through `+ - *`.
#[derive(Clone, Debug, PartialEq)]
pub struct HighPrecComplex {
    re: HighPrecReal,
    im: HighPrecReal,
}

impl HighPrecComplex {
    pub fn new(re: HighPrecReal, im: HighPrecReal) -> Self {
        let ctx = re.context().finer(im.context());
        if re.context() != ctx {
            return Self {
                re: re.with_context(ctx),
                im,
            };
        }
        if im.context() != ctx {
            return Self {
                re,
                im: im.with_context(ctx),
            };
        }
        Self { re, im }
    }

    pub fn from_real(re: HighPrecReal) -> Self {
        let im = HighPrecReal::zero(re.context());
        Self { re, im }
    }

    pub fn from_i64(v: i64, ctx: PrecisionContext) -> Self {
        Self::from_real(HighPrecReal::from_i64(v, ctx))
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational, ctx: PrecisionContext) -> Self {
        Self {
            re: HighPrecReal::from_rational(re, ctx),
            im: HighPrecReal::from_rational(im, ctx),
        }
    }

    pub fn from_rational(re: &BigRational, ctx: PrecisionContext) -> Self {
        Self::from_rationals(re, &BigRational::zero(), ctx)
    }

    /// Parses `[-]ddd[.ddd][(+|-)ddd[.ddd]i]`.
    pub fn parse(s: &str, ctx: PrecisionContext) -> Result<Self> {
        let (re, im) = parse_complex_literal(s)?;
        Ok(Self::from_rationals(&re, &im, ctx))
    }

    pub fn re(&self) -> &HighPrecReal {
        &self.re
    }

    pub fn im(&self) -> &HighPrecReal {
        &self.im
    }

    pub fn context(&self) -> PrecisionContext {
        self.re.context()
    }

    pub fn with_context(&self, ctx: PrecisionContext) -> Self {
        Self {
            re: self.re.with_context(ctx),
            im: self.im.with_context(ctx),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> HighPrecReal {
        self.re.clone() * &self.re + &(self.im.clone() * &self.im)
    }

    pub fn abs(&self) -> HighPrecReal {
        if self.im.is_zero() {
            return self.re.abs();
        }
        self.norm_sqr().sqrt().expect("norm is non-negative")
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Result<HighPrecReal> {
        if self.im.is_zero() && self.re.is_positive() {
            return Ok(HighPrecReal::zero(self.context()));
        }
        HighPrecReal::atan2(&self.im, &self.re)
    }

    pub fn exp(&self) -> Self {
        let scale = self.re.exp();
        if self.im.is_zero() {
            return Self::from_real(scale);
        }
        Self {
            re: scale.clone() * &self.im.cos(),
            im: scale * &self.im.sin(),
        }
    }

    /// Principal logarithm `ln|z| + i arg z`.
    pub fn ln(&self) -> Result<Self> {
        if self.is_zero_value() {
            return Err(Error::Domain("logarithm of zero".into()));
        }
        let modulus_ln = if self.im.is_zero() {
            self.re.abs().ln()?
        } else {
            let two = HighPrecReal::from_i64(2, self.context());
            self.norm_sqr().ln()? / &two
        };
        Ok(Self {
            re: modulus_ln,
            im: self.arg()?,
        })
    }

    /// Principal power `exp(s ln z)`.
    pub fn powc(&self, s: &Self) -> Result<Self> {
        Ok((s.clone() * &self.ln()?).exp())
    }

    pub fn to_decimal(&self, places: u32) -> String {
        let re = self.re.to_decimal(places);
        if self.im.is_zero() {
            return re;
        }
        let im = self.im.to_decimal(places);
        match im.strip_prefix('-') {
            Some(mag) => format!("{re}-{mag}i"),
            None => format!("{re}+{im}i"),
        }
    }
}

/// Splits a complex literal into exact real and imaginary parts.
pub fn parse_complex_literal(s: &str) -> Result<(BigRational, BigRational)> {
    let bad = || Error::Parse(format!("invalid complex literal {s:?}"));
    let Some(body) = s.strip_suffix('i') else {
        return Ok((parse_rational(s).map_err(|_| bad())?, BigRational::zero()));
    };
    // the sign separating the parts is the last '+' or '-' after the first character
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(i, _)| i)
        .last()
        .ok_or_else(bad)?;
    let (re, im) = body.split_at(split);
    let re = parse_rational(re).map_err(|_| bad())?;
    let im_mag = parse_rational(&im[1..]).map_err(|_| bad())?;
    let im = if im.starts_with('-') { -im_mag } else { im_mag };
    Ok((re, im))
}

impl fmt::Display for HighPrecComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(self.context().working_digits()))
    }
}

impl<'a> Add<&'a HighPrecComplex> for HighPrecComplex {
    type Output = HighPrecComplex;
    fn add(self, rhs: &'a HighPrecComplex) -> HighPrecComplex {
        HighPrecComplex {
            re: self.re + &rhs.re,
            im: self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a HighPrecComplex> for HighPrecComplex {
    type Output = HighPrecComplex;
    fn sub(self, rhs: &'a HighPrecComplex) -> HighPrecComplex {
        HighPrecComplex {
            re: self.re - &rhs.re,
            im: self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a HighPrecComplex> for HighPrecComplex {
    type Output = HighPrecComplex;
    fn mul(self, rhs: &'a HighPrecComplex) -> HighPrecComplex {
        if self.im.is_zero() && rhs.im.is_zero() {
            let im = HighPrecReal::zero(self.context().finer(rhs.context()));
            return HighPrecComplex {
                re: self.re * &rhs.re,
                im,
            };
        }
        let re = self.re.clone() * &rhs.re - &(self.im.clone() * &rhs.im);
        let im = self.re * &rhs.im + &(self.im * &rhs.re);
        HighPrecComplex { re, im }
    }
}

impl<'a> Div<&'a HighPrecComplex> for HighPrecComplex {
    type Output = HighPrecComplex;
    fn div(self, rhs: &'a HighPrecComplex) -> HighPrecComplex {
        if rhs.im.is_zero() {
            return HighPrecComplex {
                re: self.re / &rhs.re,
                im: self.im / &rhs.re,
            };
        }
        let den = rhs.norm_sqr();
        let re = (self.re.clone() * &rhs.re + &(self.im.clone() * &rhs.im)) / &den;
        let im = (self.im * &rhs.re - &(self.re * &rhs.im)) / &den;
        HighPrecComplex { re, im }
    }
}

impl Neg for HighPrecComplex {
    type Output = HighPrecComplex;
    fn neg(self) -> HighPrecComplex {
        HighPrecComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Scalar for HighPrecComplex {
    fn zero_like(&self) -> Self {
        Self::from_i64(0, self.context())
    }

    fn one_like(&self) -> Self {
        Self::from_i64(1, self.context())
    }

    fn from_i64_like(&self, v: i64) -> Self {
        Self::from_i64(v, self.context())
    }

    fn is_zero_value(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn log10_abs(&self) -> f64 {
        let (a, b) = (self.re.log10_abs(), self.im.log10_abs());
        let hi = a.max(b);
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        let lo = a.min(b);
        hi + 0.5 * (1.0 + 10f64.powf(2.0 * (lo - hi))).log10()
    }
}

impl Domain for HighPrecComplex {
    fn in_cut_plane(&self) -> Result<bool> {
        super::arg_in_cut_plane(self)
    }

    fn is_nonpositive_integer(&self) -> bool {
        if !self.im.is_zero() {
            return false;
        }
        let re = self.re.to_rational();
        re.is_integer() && re <= BigRational::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40, 10).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn literal_grammar() {
        assert_eq!(parse_complex_literal("2+3i").unwrap(), (q(2, 1), q(3, 1)));
        assert_eq!(parse_complex_literal("-1+2i").unwrap(), (q(-1, 1), q(2, 1)));
        assert_eq!(parse_complex_literal("-3+0i").unwrap(), (q(-3, 1), q(0, 1)));
        assert_eq!(parse_complex_literal("3.5").unwrap(), (q(7, 2), q(0, 1)));
        assert_eq!(
            parse_complex_literal("0.5-1.25i").unwrap(),
            (q(1, 2), q(-5, 4))
        );
        for bad in ["", "i", "2+i", "2 + 3i", "1+2j", "--1", "1+-2i"] {
            assert!(parse_complex_literal(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn field_operations() {
        let c = ctx();
        let z = HighPrecComplex::from_rationals(&q(2, 1), &q(3, 1), c);
        let w = HighPrecComplex::from_rationals(&q(-1, 2), &q(1, 4), c);
        let back = (z.clone() * &w) / &w;
        assert!((back - &z).log10_abs() < -45.0);
        let prod = z.clone() * &z.conj();
        assert_eq!(prod.re().to_rational(), q(13, 1));
        assert!(prod.im().is_zero());
    }

    #[test]
    fn exp_log_and_power() {
        let c = ctx();
        let z = HighPrecComplex::from_rationals(&q(-1, 1), &q(2, 1), c);
        let round = z.ln().unwrap().exp();
        assert!((round - &z).log10_abs() < -45.0);
        // i^i = exp(-pi/2)
        let i = HighPrecComplex::from_rationals(&q(0, 1), &q(1, 1), c);
        let ii = i.powc(&i).unwrap();
        let expected = (-(HighPrecReal::pi(c) / &HighPrecReal::from_i64(2, c))).exp();
        assert!((ii.re().clone() - &expected).log10_abs() < -45.0);
        assert!(ii.im().log10_abs() < -45.0);
        // real inputs stay real
        let two = HighPrecComplex::from_i64(2, c);
        assert!(two.ln().unwrap().im().is_zero());
        assert!(two.powc(&two).unwrap().is_real());
        assert!(HighPrecComplex::from_i64(0, c).ln().is_err());
    }

    #[test]
    fn formatting() {
        let c = ctx();
        let z = HighPrecComplex::from_rationals(&q(1, 4), &q(-1, 2), c);
        assert_eq!(z.to_decimal(3), "0.250-0.500i");
        assert_eq!(HighPrecComplex::from_i64(3, c).to_decimal(1), "3.0");
    }
}
