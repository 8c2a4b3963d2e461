//! Arbitrary-precision integer, rational, real and complex arithmetic.
//!
//! Exact values use [`BigInt`] and [`BigRational`] from the `num` family of crates.
//! Floating values use [`HighPrecReal`] / [`HighPrecComplex`], which carry the
//! [`PrecisionContext`] they were created with; binary operations round to the
//! more precise of the two operand contexts.

mod complex;
mod rational;
mod real;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

pub use complex::{parse_complex_literal, HighPrecComplex};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use rational::{
    agree_to_digits, format_decimal, format_fraction, format_scientific, log10_abs_bigint,
    log10_abs_rational, parse_fraction, parse_rational, rational_from_i64, ten_pow,
};
pub use real::HighPrecReal;

use crate::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LN_10 / std::f64::consts::LN_2;

/// Decimal working precision plus guard digits used for two-precision agreement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    working_digits: u32,
    guard_digits: u32,
}

impl PrecisionContext {
    pub const MIN_WORKING_DIGITS: u32 = 10;
    pub const MIN_GUARD_DIGITS: u32 = 5;
    pub const DEFAULT_GUARD_DIGITS: u32 = 10;

    pub fn new(working_digits: u32, guard_digits: u32) -> Result<Self> {
        if working_digits < Self::MIN_WORKING_DIGITS {
            return Err(Error::Parameter(format!(
                "working_digits must be >= {}, got {working_digits}",
                Self::MIN_WORKING_DIGITS
            )));
        }
        if guard_digits < Self::MIN_GUARD_DIGITS {
            return Err(Error::Parameter(format!(
                "guard_digits must be >= {}, got {guard_digits}",
                Self::MIN_GUARD_DIGITS
            )));
        }
        Ok(Self {
            working_digits,
            guard_digits,
        })
    }

    /// Context with the default number of guard digits. Values below the minimum
    /// working precision are raised to it.
    pub fn with_digits(working_digits: u32) -> Self {
        Self {
            working_digits: working_digits.max(Self::MIN_WORKING_DIGITS),
            guard_digits: Self::DEFAULT_GUARD_DIGITS,
        }
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Binary precision of the arithmetic: working plus guard digits, in bits.
    pub fn bits(&self) -> usize {
        ((self.working_digits + self.guard_digits) as f64 * LOG2_10).ceil() as usize
    }

    /// The second context of the two-precision policy: the guard digits become
    /// part of the working precision.
    pub fn extended(&self) -> Self {
        Self {
            working_digits: self.working_digits + self.guard_digits,
            guard_digits: self.guard_digits,
        }
    }

    pub(crate) fn finer(self, other: Self) -> Self {
        if other.bits() > self.bits() {
            other
        } else {
            self
        }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::with_digits(30)
    }
}

impl fmt::Display for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{} digits", self.working_digits, self.guard_digits)
    }
}

/// Field operations shared by the exact and the floating rings.
///
/// Constants are produced from an existing element so that floating values
/// inherit its precision context.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64_like(&self, v: i64) -> Self;
    fn is_zero_value(&self) -> bool;
    /// `log10 |self|`, negative infinity for zero.
    fn log10_abs(&self) -> f64;

    /// True when `|self| < 10^(-digits) * max(1, |reference|)`.
    fn is_negligible(&self, reference: &Self, digits: u32) -> bool {
        if self.is_zero_value() {
            return true;
        }
        let scale = reference.log10_abs().max(0.0);
        self.log10_abs() < scale - digits as f64
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero_value() {
            None
        } else {
            Some(self.clone() / rhs)
        }
    }

    fn recip(&self) -> Option<Self> {
        self.one_like().checked_div(self)
    }
}

/// Domain predicates needed by the complex-variable families.
pub trait Domain: Scalar {
    /// Whether the value lies in `{z : |arg z| < pi}`; zero is a domain error.
    fn in_cut_plane(&self) -> Result<bool>;
    fn is_nonpositive_integer(&self) -> bool;
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }

    fn one_like(&self) -> Self {
        BigRational::one()
    }

    fn from_i64_like(&self, v: i64) -> Self {
        rational_from_i64(v)
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }

    fn log10_abs(&self) -> f64 {
        log10_abs_rational(self)
    }

    fn is_negligible(&self, reference: &Self, digits: u32) -> bool {
        let scale = reference.abs().max(BigRational::one());
        self.abs() * BigRational::from_integer(ten_pow(digits)) < scale
    }
}

impl Domain for BigRational {
    fn in_cut_plane(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Domain("z = 0 is not in the cut plane".into()));
        }
        Ok(self.is_positive())
    }

    fn is_nonpositive_integer(&self) -> bool {
        self.is_integer() && !self.is_positive()
    }
}

impl Domain for HighPrecReal {
    fn in_cut_plane(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Domain("z = 0 is not in the cut plane".into()));
        }
        Ok(self.is_positive())
    }

    fn is_nonpositive_integer(&self) -> bool {
        !self.is_positive() && self.to_rational().is_integer()
    }
}

/// `k!` computed exactly.
pub fn factorial(k: u64) -> BigInt {
    (2..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)` as a direct product; `(a)_0 = 1`.
pub fn pochhammer<T: Scalar>(a: &T, k: u64) -> T {
    let mut acc = a.one_like();
    let mut factor = a.clone();
    let one = a.one_like();
    for _ in 0..k {
        acc = acc * &factor;
        factor = factor + &one;
    }
    acc
}

/// Integer rising factorial, used where all arguments are integers.
pub fn pochhammer_int(a: &BigInt, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * (a + BigInt::from(j)))
}

/// True iff `z` is off the closed negative real axis. When `re z < 0` the
/// imaginary part counts as zero below `10^(-working_digits/2)`.
pub fn arg_in_cut_plane(z: &HighPrecComplex) -> Result<bool> {
    if z.is_zero_value() {
        return Err(Error::Domain("z = 0 has no argument".into()));
    }
    if !z.re().is_negative() {
        return Ok(true);
    }
    let digits = z.context().working_digits() / 2;
    let tol = -(digits as f64);
    Ok(z.im().log10_abs() >= tol)
}
