use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{format_decimal, PrecisionContext, Scalar};
use crate::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;
const LOG10_2: f64 = std::f64::consts::LN_2 / std::f64::consts::LN_10;

// The BigInt conversions below move mantissas as u64 words.
const _: () = assert!(WORD_BIT_SIZE == 64);

fn consts() -> Consts {
    Consts::new().expect("allocating the constant cache")
}

fn bigint_to_float(x: &BigInt, p: usize) -> BigFloat {
    let zero = BigFloat::new(p);
    if x.is_zero() {
        return zero;
    }
    let (sign, words) = x.to_u64_digits();
    let s = if sign == num_bigint::Sign::Minus {
        Sign::Neg
    } else {
        Sign::Pos
    };
    let exact = BigFloat::from_words(&words, s, (words.len() * 64) as i32);
    // adding a zero of precision p normalizes and rounds
    exact.add(&zero, p.max(words.len() * 64), RM)
}

fn float_to_rational(f: &BigFloat) -> BigRational {
    let Some((words, _, sign, exponent, _)) = f.as_raw_parts() else {
        panic!("non-finite high precision value: {f}");
    };
    if f.is_zero() {
        return BigRational::zero();
    }
    let mut limbs = Vec::with_capacity(words.len() * 2);
    for w in words {
        limbs.push(*w as u32);
        limbs.push((*w >> 32) as u32);
    }
    let mantissa = BigInt::from(BigUint::new(limbs));
    let mantissa = if sign == Sign::Neg {
        -mantissa
    } else {
        mantissa
    };
    let shift = exponent as i64 - (words.len() * 64) as i64;
    if shift >= 0 {
        BigRational::from_integer(mantissa << shift as usize)
    } else {
        BigRational::new(mantissa, BigInt::one() << (-shift) as usize)
    }
}

/// Binary floating-point value that remembers its precision context.
#[derive(Clone)]
pub struct HighPrecReal {
    value: BigFloat,
    ctx: PrecisionContext,
}

impl HighPrecReal {
    fn wrap(value: BigFloat, ctx: PrecisionContext) -> Self {
        debug_assert!(!value.is_nan(), "NaN in high precision arithmetic");
        Self { value, ctx }
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        Self::wrap(BigFloat::new(ctx.bits()), ctx)
    }

    pub fn from_i64(v: i64, ctx: PrecisionContext) -> Self {
        Self::from_bigint(&BigInt::from(v), ctx)
    }

    pub fn from_bigint(v: &BigInt, ctx: PrecisionContext) -> Self {
        Self::wrap(bigint_to_float(v, ctx.bits()), ctx)
    }

    /// Correctly rounded conversion of an exact rational.
    pub fn from_rational(v: &BigRational, ctx: PrecisionContext) -> Self {
        let p = ctx.bits();
        let num = bigint_to_float(v.numer(), p + 64);
        let den = bigint_to_float(v.denom(), p + 64);
        Self::wrap(num.div(&den, p, RM), ctx)
    }

    pub fn pi(ctx: PrecisionContext) -> Self {
        Self::wrap(consts().pi(ctx.bits(), RM), ctx)
    }

    pub fn context(&self) -> PrecisionContext {
        self.ctx
    }

    /// Re-rounds into another context.
    pub fn with_context(&self, ctx: PrecisionContext) -> Self {
        let zero = BigFloat::new(ctx.bits());
        Self::wrap(self.value.add(&zero, ctx.bits(), RM), ctx)
    }

    /// The exact binary value as a rational.
    pub fn to_rational(&self) -> BigRational {
        float_to_rational(&self.value)
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_decimal(&self, places: u32) -> String {
        format_decimal(&self.to_rational(), places)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.value.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.value.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.ctx)
    }

    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (words, _, _, exponent, _) = self.value.as_raw_parts().expect("finite value");
        let top = *words.last().expect("normalized mantissa") as f64 / 2f64.powi(64);
        top.log10() + exponent as f64 * LOG10_2
    }

    fn bin<F>(&self, rhs: &Self, op: F) -> Self
    where
        F: FnOnce(&BigFloat, &BigFloat, usize) -> BigFloat,
    {
        let ctx = self.ctx.finer(rhs.ctx);
        Self::wrap(op(&self.value, &rhs.value, ctx.bits()), ctx)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        Ok(Self::wrap(self.value.sqrt(self.ctx.bits(), RM), self.ctx))
    }

    pub fn exp(&self) -> Self {
        Self::wrap(self.value.exp(self.ctx.bits(), RM, &mut consts()), self.ctx)
    }

    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Domain("logarithm of a non-positive number".into()));
        }
        Ok(Self::wrap(
            self.value.ln(self.ctx.bits(), RM, &mut consts()),
            self.ctx,
        ))
    }

    pub fn sin(&self) -> Self {
        Self::wrap(self.value.sin(self.ctx.bits(), RM, &mut consts()), self.ctx)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(self.value.cos(self.ctx.bits(), RM, &mut consts()), self.ctx)
    }

    pub fn atan(&self) -> Self {
        Self::wrap(
            self.value.atan(self.ctx.bits(), RM, &mut consts()),
            self.ctx,
        )
    }

    /// Principal `atan2(y, x)` in `(-pi, pi]`.
    pub fn atan2(y: &Self, x: &Self) -> Result<Self> {
        let ctx = y.ctx.finer(x.ctx);
        if x.is_zero() {
            if y.is_zero() {
                return Err(Error::Domain("atan2(0, 0)".into()));
            }
            let half_pi = Self::pi(ctx) / &Self::from_i64(2, ctx);
            return Ok(if y.is_negative() { -half_pi } else { half_pi });
        }
        let base = (y.clone() / x).with_context(ctx).atan();
        if x.is_positive() {
            return Ok(base);
        }
        let pi = Self::pi(ctx);
        Ok(if y.is_negative() {
            base - &pi
        } else {
            base + &pi
        })
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.value.powi(n, self.ctx.bits(), RM), self.ctx)
    }
}

impl fmt::Debug for HighPrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HighPrecReal({}, {})", self.value, self.ctx)
    }
}

impl fmt::Display for HighPrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = self.ctx.working_digits();
        f.write_str(&self.to_decimal(places))
    }
}

impl PartialEq for HighPrecReal {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for HighPrecReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

impl<'a> Add<&'a HighPrecReal> for HighPrecReal {
    type Output = HighPrecReal;
    fn add(self, rhs: &'a HighPrecReal) -> HighPrecReal {
        self.bin(rhs, |a, b, p| a.add(b, p, RM))
    }
}

impl<'a> Sub<&'a HighPrecReal> for HighPrecReal {
    type Output = HighPrecReal;
    fn sub(self, rhs: &'a HighPrecReal) -> HighPrecReal {
        self.bin(rhs, |a, b, p| a.sub(b, p, RM))
    }
}

impl<'a> Mul<&'a HighPrecReal> for HighPrecReal {
    type Output = HighPrecReal;
    fn mul(self, rhs: &'a HighPrecReal) -> HighPrecReal {
        self.bin(rhs, |a, b, p| a.mul(b, p, RM))
    }
}

impl<'a> Div<&'a HighPrecReal> for HighPrecReal {
    type Output = HighPrecReal;
    fn div(self, rhs: &'a HighPrecReal) -> HighPrecReal {
        assert!(!rhs.is_zero(), "HighPrecReal division by zero");
        self.bin(rhs, |a, b, p| a.div(b, p, RM))
    }
}

impl Neg for HighPrecReal {
    type Output = HighPrecReal;
    fn neg(self) -> HighPrecReal {
        Self::wrap(self.value.neg(), self.ctx)
    }
}

impl Scalar for HighPrecReal {
    fn zero_like(&self) -> Self {
        Self::zero(self.ctx)
    }

    fn one_like(&self) -> Self {
        Self::from_i64(1, self.ctx)
    }

    fn from_i64_like(&self, v: i64) -> Self {
        Self::from_i64(v, self.ctx)
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }

    fn log10_abs(&self) -> f64 {
        HighPrecReal::log10_abs(self)
    }
}
