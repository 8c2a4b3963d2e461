use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

const LOG10_2: f64 = std::f64::consts::LN_2 / std::f64::consts::LN_10;

pub fn rational_from_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ten_pow(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), exp as usize)
}

pub fn log10_abs_bigint(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 900 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).log10();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift as usize;
    top.to_f64().unwrap_or(f64::INFINITY).log10() + shift as f64 * LOG10_2
}

pub fn log10_abs_rational(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    log10_abs_bigint(x.numer()) - log10_abs_bigint(x.denom())
}

/// Exact test of `|a - b| < 10^(-digits) * max(1, |b|)`.
pub fn agree_to_digits(a: &BigRational, b: &BigRational, digits: u32) -> bool {
    let diff = (a - b).abs();
    let scale = if b.abs() > BigRational::one() {
        b.abs()
    } else {
        BigRational::one()
    };
    diff * BigRational::from_integer(ten_pow(digits)) < scale
}

/// `num/den` with a positive denominator, always including the denominator.
pub fn format_fraction(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Fixed-point decimal with exactly `places` digits after the point, rounded
/// half away from zero.
pub fn format_decimal(x: &BigRational, places: u32) -> String {
    let scaled = x.abs() * BigRational::from_integer(ten_pow(places));
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let twice_r: BigInt = r * 2;
    let rounded = if &twice_r >= scaled.denom() { q + 1 } else { q };
    let digits = rounded.to_string();
    let places = places as usize;
    let body = if places == 0 {
        digits
    } else {
        let padded = format!("{digits:0>width$}", width = places + 1);
        let (int, frac) = padded.split_at(padded.len() - places);
        format!("{int}.{frac}")
    };
    if x.is_negative() && body.bytes().any(|c| c.is_ascii_digit() && c != b'0') {
        format!("-{body}")
    } else {
        body
    }
}

/// Short scientific rendering (`d.ddde-N`), used for error magnitudes.
pub fn format_scientific(x: &BigRational, significant: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let ax = x.abs();
    let mut exp = log10_abs_rational(&ax).floor() as i64;
    let sig = significant.max(1) as i64;
    loop {
        let shift = sig - 1 - exp;
        let scaled = if shift >= 0 {
            ax.clone() * BigRational::from_integer(ten_pow(shift as u32))
        } else {
            ax.clone() / BigRational::from_integer(ten_pow((-shift) as u32))
        };
        let rounded = (scaled + BigRational::new(1.into(), 2.into()))
            .floor()
            .to_integer();
        let s = rounded.to_string();
        if s.len() as i64 > sig {
            exp += 1;
            continue;
        }
        if (s.len() as i64) < sig {
            exp -= 1;
            continue;
        }
        let (head, tail) = s.split_at(1);
        return if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        };
    }
}

/// Parses `[-]ddd[.ddd]` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid decimal literal {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int.is_empty() || !int.bytes().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if body.contains('.') && frac.is_empty() {
        return Err(bad());
    }
    if !frac.bytes().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let value = BigRational::new(digits, ten_pow(frac.len() as u32));
    Ok(if neg { -value } else { value })
}

/// Parses `num/den`, or a decimal literal.
pub fn parse_fraction(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let bad = || Error::Parse(format!("invalid fraction {s:?}"));
            let num: BigInt = n.parse().map_err(|_| bad())?;
            let den: BigInt = d.parse().map_err(|_| bad())?;
            if den.sign() == Sign::NoSign {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(num, den))
        }
        None => parse_rational(s),
    }
}
