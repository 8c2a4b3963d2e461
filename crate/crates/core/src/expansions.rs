//! Constructors for every expansion family, plus the classical fixtures for `e`,
//! `e^2` and `e^(1/M)` used for comparison.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::cf::{convergents, CoefficientRule, ExpansionSpec, TailSequence};
use crate::numeric::{factorial, rational_from_i64 as int, BigInt, BigRational, Domain, Scalar};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    EEuler,
    ExpN,
    ExpNShifted,
    IncGamma,
    Confluent1F1,
    MFraction,
    MFractionDiagonal,
    RatExp,
    ExpInvN,
    ERegular,
    EOver,
    ESporadic,
    ESquared,
    EOneOverM,
}

impl FamilyId {
    pub const ALL: [FamilyId; 14] = [
        FamilyId::EEuler,
        FamilyId::ExpN,
        FamilyId::ExpNShifted,
        FamilyId::IncGamma,
        FamilyId::Confluent1F1,
        FamilyId::MFraction,
        FamilyId::MFractionDiagonal,
        FamilyId::RatExp,
        FamilyId::ExpInvN,
        FamilyId::ERegular,
        FamilyId::EOver,
        FamilyId::ESporadic,
        FamilyId::ESquared,
        FamilyId::EOneOverM,
    ];

    /// The fixed-parameter expansions of `e` compared against each other.
    pub const E_EXPANSIONS: [FamilyId; 4] = [
        FamilyId::EEuler,
        FamilyId::ERegular,
        FamilyId::EOver,
        FamilyId::ESporadic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::EEuler => "e-euler",
            FamilyId::ExpN => "exp-n",
            FamilyId::ExpNShifted => "exp-n-shifted",
            FamilyId::IncGamma => "inc-gamma",
            FamilyId::Confluent1F1 => "confluent-1f1",
            FamilyId::MFraction => "m-fraction",
            FamilyId::MFractionDiagonal => "m-fraction-diagonal",
            FamilyId::RatExp => "rat-exp",
            FamilyId::ExpInvN => "exp-inv-n",
            FamilyId::ERegular => "e-regular",
            FamilyId::EOver => "e-over",
            FamilyId::ESporadic => "e-sporadic",
            FamilyId::ESquared => "e-squared",
            FamilyId::EOneOverM => "e-one-over-M",
        }
    }

    /// Whether the family is parameterized by a complex `z`.
    pub fn takes_z(self) -> bool {
        matches!(
            self,
            FamilyId::IncGamma
                | FamilyId::Confluent1F1
                | FamilyId::MFraction
                | FamilyId::MFractionDiagonal
        )
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown expansion id {s:?}")))
    }
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn pow(base: u64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

fn m_i64(m: u64) -> i64 {
    i64::try_from(m).expect("coefficient index fits in i64")
}

/// Regular continued fraction `[head; t(1), t(2), ...]`.
fn regular(
    name: &str,
    head: i64,
    term: impl Fn(u64) -> i64 + Send + Sync + 'static,
) -> ExpansionSpec<BigRational> {
    ExpansionSpec::new(
        name,
        int(head),
        CoefficientRule::new(move |m| (int(1), int(term(m)))),
    )
}

/// `e = 3 - 1/(4 - 2/(5 - 3/(6 - ...)))`: head 3, `a_m = -m`, `b_m = m + 3`.
pub fn make_e_euler() -> ExpansionSpec<BigRational> {
    ExpansionSpec::new(
        FamilyId::EEuler.as_str(),
        int(3),
        CoefficientRule::new(|m| (int(-m_i64(m)), int(m_i64(m) + 3))),
    )
}

fn check_n(n: u64, min: u64, family: FamilyId) -> Result<i64> {
    if n < min {
        return Err(Error::Parameter(format!(
            "{family}: n must be >= {min}, got {n}"
        )));
    }
    i64::try_from(n).map_err(|_| Error::Parameter(format!("{family}: n = {n} too large")))
}

/// `e^n = sum_{k<n} n^k/k! + (n^(n-1)/(n-1)!) (1 + n + K(-n(m+n-1) / (m+2n+1)))`.
pub fn make_exp_n(n: u64) -> Result<ExpansionSpec<BigRational>> {
    let ni = check_n(n, 1, FamilyId::ExpN)?;
    let prefix = (0..n).fold(BigRational::zero(), |acc, k| {
        acc + ratio(pow(n, k), factorial(k))
    });
    let scale = ratio(pow(n, n - 1), factorial(n - 1));
    let rule = CoefficientRule::new(move |m| {
        let m = m_i64(m);
        (int(-ni * (m + ni - 1)), int(m + 2 * ni + 1))
    });
    ExpansionSpec::new(FamilyId::ExpN.as_str(), int(1 + ni), rule).with_affine(prefix, scale)
}

/// The shifted fraction `K(-n(m+n) / (m+2n+2))` with head 0.
pub fn make_exp_n_shifted(n: u64) -> Result<ExpansionSpec<BigRational>> {
    let ni = check_n(n, 1, FamilyId::ExpNShifted)?;
    let rule = CoefficientRule::new(move |m| {
        let m = m_i64(m);
        (int(-ni * (m + ni)), int(m + 2 * ni + 2))
    });
    Ok(ExpansionSpec::new(
        FamilyId::ExpNShifted.as_str(),
        int(0),
        rule,
    ))
}

/// Tail sequence of the shifted fraction: `t_j = -(j+n+1)(j+2)/(j+1)`, `t_0 = -2(n+1)`.
pub fn exp_n_shifted_tail(n: u64) -> TailSequence<BigRational> {
    let n = n as i64;
    TailSequence::new(move |j| {
        let j = m_i64(j);
        BigRational::new((-(j + n + 1) * (j + 2)).into(), (j + 1).into())
    })
}

fn cut_plane_z<T: Domain>(z: &T, family: FamilyId) -> Result<()> {
    match z.in_cut_plane() {
        Ok(true) => Ok(()),
        Ok(false) => Err(Error::Domain(format!(
            "{family}: z lies on the branch cut |arg z| = pi"
        ))),
        Err(e) => Err(Error::Domain(format!("{family}: {e}"))),
    }
}

fn inc_gamma_rule<T: Domain>(z: &T) -> CoefficientRule<T> {
    let z = z.clone();
    CoefficientRule::new(move |m| {
        let mm = z.from_i64_like(m_i64(m));
        let one = z.one_like();
        // a_m = -z (m + z - 1), b_m = m + 2z + 1
        let a = -(z.clone() * &(mm.clone() + &z - &one));
        let b = mm + &z + &z + &one;
        (a, b)
    })
}

/// `gamma(z,z) / (z^(z-1) e^(-z)) = 1 + z + K(-z(m+z-1) / (m+2z+1))` on the cut plane.
pub fn make_inc_gamma<T: Domain>(z: &T) -> Result<ExpansionSpec<T>> {
    cut_plane_z(z, FamilyId::IncGamma)?;
    let head = z.one_like() + z;
    Ok(ExpansionSpec::new(
        FamilyId::IncGamma.as_str(),
        head,
        inc_gamma_rule(z),
    ))
}

/// The same fraction read as `1F1(1; z+1; z)`.
pub fn make_confluent_1f1<T: Domain>(z: &T) -> Result<ExpansionSpec<T>> {
    cut_plane_z(z, FamilyId::Confluent1F1)?;
    let head = z.one_like() + z;
    Ok(ExpansionSpec::new(
        FamilyId::Confluent1F1.as_str(),
        head,
        inc_gamma_rule(z),
    ))
}

/// M-fraction `1F1(1; b+1; z) = b/(b-z) + K(mz / (b+m-z))`, written as head 0 with
/// `a_1 = b, b_1 = b - z, a_{m+1} = mz, b_{m+1} = b + m - z`.
pub fn make_m_fraction<T: Domain>(b: &T, z: &T) -> Result<ExpansionSpec<T>> {
    let family = FamilyId::MFraction;
    if b.is_nonpositive_integer() {
        return Err(Error::Parameter(format!(
            "{family}: b must not be a non-positive integer"
        )));
    }
    if z.is_zero_value() {
        return Ok(ExpansionSpec::new(
            family.as_str(),
            z.one_like(),
            CoefficientRule::empty(),
        ));
    }
    let b1 = b.clone() - z;
    // Q_2 = b_2 b_1 + a_2; both Q_1 and Q_2 zero means no usable head
    let q2 = (b.clone() + &z.one_like() - z) * &b1 + z;
    if b1.is_zero_value() && q2.is_zero_value() {
        return Err(Error::Singular(format!(
            "{family}: degenerate head b - z = 0"
        )));
    }
    let (b, z) = (b.clone(), z.clone());
    let rule = CoefficientRule::new(move |m| {
        if m == 1 {
            (b.clone(), b.clone() - &z)
        } else {
            let j = b.from_i64_like(m_i64(m) - 1);
            (j.clone() * &z, b.clone() + &j - &z)
        }
    });
    Ok(ExpansionSpec::new(family.as_str(), b1.zero_like(), rule))
}

/// The M-fraction at `b = z` with its vanishing first denominator contracted:
/// `1 + K((m+1)z / (m+1))`.
pub fn make_m_fraction_diagonal<T: Domain>(z: &T) -> Result<ExpansionSpec<T>> {
    cut_plane_z(z, FamilyId::MFractionDiagonal)?;
    let z = z.clone();
    let head = z.one_like();
    let rule = CoefficientRule::new(move |m| {
        let j = z.from_i64_like(m_i64(m) + 1);
        (j.clone() * &z, j)
    });
    Ok(ExpansionSpec::new(
        FamilyId::MFractionDiagonal.as_str(),
        head,
        rule,
    ))
}

/// `e^(l/n)` for `1 <= l < n`:
/// `sum_{k<=l} l^k/(k! n^k) + s [1/(n(n-1)) - 1/((n-1)(n+l(n-1)) + ((n-1)^2/n) K)]`
/// with `s = l^(l-1)/(n^(l-1)(l-1)!)` and
/// `K = K(-l n (m-1+l) / (n(m+1) + (n+1) l))`.
pub fn make_rat_exp(l: u64, n: u64) -> Result<ExpansionSpec<BigRational>> {
    if l == 0 || l >= n {
        return Err(Error::Parameter(format!(
            "rat-exp requires 1 <= l < n, got l = {l}, n = {n}"
        )));
    }
    let (li, ni) = (
        check_n(l, 1, FamilyId::RatExp)?,
        check_n(n, 2, FamilyId::RatExp)?,
    );
    let prefix = (0..=l).fold(BigRational::zero(), |acc, k| {
        acc + ratio(pow(l, k), factorial(k) * pow(n, k))
    });
    let scale = ratio(pow(l, l - 1), pow(n, l - 1) * factorial(l - 1));
    let offset = ratio(BigInt::one(), BigInt::from(ni * (ni - 1)));
    let shift = int((ni - 1) * (ni + li * (ni - 1)));
    let factor = ratio(BigInt::from((ni - 1) * (ni - 1)), BigInt::from(ni));
    let rule = CoefficientRule::new(move |m| {
        let m = m_i64(m);
        (
            int(-li * ni * (m - 1 + li)),
            int(ni * (m + 1) + (ni + 1) * li),
        )
    });
    Ok(ExpansionSpec::new(FamilyId::RatExp.as_str(), int(0), rule)
        .with_affine(prefix, scale)?
        .with_reciprocal(offset, shift, factor))
}

/// `e^(1/n) = 1 + 1/n + [1/(n(n-1)) - 1/((n-1)(2n-1) + ((n-1)^2/n) K(-nm / (n(m+1) + n + 1)))]`, `n > 2`.
pub fn make_exp_inv_n(n: u64) -> Result<ExpansionSpec<BigRational>> {
    let ni = check_n(n, 3, FamilyId::ExpInvN)?;
    let prefix = int(1) + ratio(BigInt::one(), BigInt::from(ni));
    let offset = ratio(BigInt::one(), BigInt::from(ni * (ni - 1)));
    let shift = int((ni - 1) * (2 * ni - 1));
    let factor = ratio(BigInt::from((ni - 1) * (ni - 1)), BigInt::from(ni));
    let rule = CoefficientRule::new(move |m| {
        let m = m_i64(m);
        (int(-ni * m), int(ni * (m + 1) + ni + 1))
    });
    Ok(ExpansionSpec::new(FamilyId::ExpInvN.as_str(), int(0), rule)
        .with_affine(prefix, int(1))?
        .with_reciprocal(offset, shift, factor))
}

/// The classical fixtures. `big_m` is the `M > 1` of `e^(1/M)` and is ignored elsewhere.
pub fn make_classical(id: FamilyId, big_m: Option<u64>) -> Result<ExpansionSpec<BigRational>> {
    let name = id.as_str();
    match id {
        // [2; 1, 2, 1, 1, 4, 1, 1, 6, 1, ...]
        FamilyId::ERegular => Ok(regular(name, 2, |m| {
            let (j, r) = ((m - 1) / 3, (m - 1) % 3);
            if r == 1 {
                2 * (m_i64(j) + 1)
            } else {
                1
            }
        })),
        // 2 + 2/(2 + 3/(3 + 4/(4 + ...)))
        FamilyId::EOver => Ok(ExpansionSpec::new(
            name,
            int(2),
            CoefficientRule::new(|m| (int(m_i64(m) + 1), int(m_i64(m) + 1))),
        )),
        // 1 + 2/(1 + 1/(6 + 1/(10 + 1/(14 + ...))))
        FamilyId::ESporadic => Ok(ExpansionSpec::new(
            name,
            int(1),
            CoefficientRule::new(|m| {
                if m == 1 {
                    (int(2), int(1))
                } else {
                    (int(1), int(4 * m_i64(m) - 2))
                }
            }),
        )),
        // [7; 3j+2, 1, 1, 3j+3, 12j+18] for j = 0, 1, 2, ...
        FamilyId::ESquared => Ok(regular(name, 7, |m| {
            let (j, r) = (m_i64((m - 1) / 5), (m - 1) % 5);
            match r {
                0 => 3 * j + 2,
                1 | 2 => 1,
                3 => 3 * j + 3,
                _ => 12 * j + 18,
            }
        })),
        // [1; M-1, 1, 1, 3M-1, 1, 1, 5M-1, ...]
        FamilyId::EOneOverM => {
            let big_m = big_m.ok_or_else(|| Error::Parameter(format!("{name} needs M")))?;
            if big_m < 2 {
                return Err(Error::Parameter(format!(
                    "{name} requires M > 1, got {big_m}"
                )));
            }
            let mi = i64::try_from(big_m).map_err(|_| Error::Parameter("M too large".into()))?;
            Ok(regular(name, 1, move |m| {
                if m == 1 {
                    return mi - 1;
                }
                let (j, r) = (m_i64((m - 2) / 3), (m - 2) % 3);
                if r == 2 {
                    (2 * j + 3) * mi - 1
                } else {
                    1
                }
            }))
        }
        other => Err(Error::Parameter(format!(
            "{other} is not a classical fixture"
        ))),
    }
}

/// Outcome of comparing two convergent sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentComparison {
    pub same: bool,
    pub first_difference: Option<u64>,
}

/// Compares folded convergent values at depths `0..=depth` exactly.
pub fn same_convergents<T: Scalar>(
    a: &ExpansionSpec<T>,
    b: &ExpansionSpec<T>,
    depth: u64,
) -> Result<ConvergentComparison> {
    compare_by(a, b, depth, |x, y| (x.clone() - y).is_zero_value())
}

/// As [`same_convergents`], with values treated as equal when they agree to `digits`.
pub fn same_convergents_within<T: Scalar>(
    a: &ExpansionSpec<T>,
    b: &ExpansionSpec<T>,
    depth: u64,
    digits: u32,
) -> Result<ConvergentComparison> {
    compare_by(a, b, depth, |x, y| (x.clone() - y).is_negligible(y, digits))
}

fn compare_by<T: Scalar>(
    a: &ExpansionSpec<T>,
    b: &ExpansionSpec<T>,
    depth: u64,
    eq: impl Fn(&T, &T) -> bool,
) -> Result<ConvergentComparison> {
    let (ca, cb) = (convergents(a, depth)?, convergents(b, depth)?);
    let first = ca.iter().zip(cb.iter()).find_map(|(x, y)| {
        let equal = match (&x.value, &y.value) {
            (Some(u), Some(v)) => eq(u, v),
            (None, None) => true,
            _ => false,
        };
        (!equal).then_some(x.k)
    });
    Ok(ConvergentComparison {
        same: first.is_none(),
        first_difference: first,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{estimate_limit, rational_values, DEFAULT_DEPTH_CAP};
    use crate::numeric::{format_decimal, HighPrecComplex, PrecisionContext};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn limit(spec: &ExpansionSpec<BigRational>, digits: u32) -> String {
        format_decimal(
            &estimate_limit(spec, digits + 5, DEFAULT_DEPTH_CAP)
                .unwrap()
                .value,
            digits,
        )
    }

    #[test]
    fn ids_round_trip() {
        for id in FamilyId::ALL {
            assert_eq!(id.as_str().parse::<FamilyId>().unwrap(), id);
        }
        assert!("e-bogus".parse::<FamilyId>().is_err());
    }

    #[test]
    fn e_euler_structure() {
        let spec = make_e_euler();
        let values = rational_values(&spec, 2).unwrap();
        assert_eq!(values[0], Some(q(3, 1)));
        assert_eq!(values[2], Some(q(49, 18)));
        for m in 1..50 {
            let (a, b) = spec.coefficients(m).unwrap().unwrap();
            assert_eq!((a, b), (int(-(m as i64)), int(m as i64 + 3)));
        }
    }

    #[test]
    fn exp_n_at_one_folds_to_e_euler() {
        let spec = make_exp_n(1).unwrap();
        assert_eq!(spec.prefix(), &int(1));
        assert_eq!(spec.scale(), &int(1));
        assert_eq!(spec.head(), &int(2));
        for m in 1..50 {
            assert_eq!(
                spec.coefficients(m).unwrap(),
                make_e_euler().coefficients(m).unwrap()
            );
        }
        assert_eq!(rational_values(&spec, 0).unwrap()[0], Some(q(3, 1)));
        assert!(matches!(make_exp_n(0), Err(Error::Parameter(_))));
    }

    #[test]
    fn exp_n_depth_zero() {
        // 1 + 2 + 2 * 3
        assert_eq!(
            rational_values(&make_exp_n(2).unwrap(), 0).unwrap()[0],
            Some(q(9, 1))
        );
    }

    #[test]
    fn exp_n_limits() {
        assert_eq!(
            limit(&make_exp_n(2).unwrap(), 40),
            "7.3890560989306502272304274605750078131803"
        );
        assert_eq!(
            limit(&make_exp_n(5).unwrap(), 40),
            "148.4131591025766034211155800405522796234877"
        );
    }

    #[test]
    fn shifted_family() {
        let s = make_exp_n_shifted(1).unwrap();
        assert_eq!(s.coefficients(1).unwrap().unwrap(), (int(-2), int(5)));
        assert!(make_exp_n_shifted(0).is_err());
        let tail = exp_n_shifted_tail(3);
        assert_eq!(tail.value(0), int(-8));
    }

    #[test]
    fn inc_gamma_domain() {
        assert!(matches!(make_inc_gamma(&q(-3, 1)), Err(Error::Domain(_))));
        assert!(matches!(make_inc_gamma(&q(0, 1)), Err(Error::Domain(_))));
        let ctx = PrecisionContext::with_digits(20);
        let cut = HighPrecComplex::parse("-3+0i", ctx).unwrap();
        assert!(matches!(make_inc_gamma(&cut), Err(Error::Domain(_))));
        // gamma(1,1) / e^-1 = e - 1
        assert_eq!(
            limit(&make_inc_gamma(&q(1, 1)).unwrap(), 25),
            "1.7182818284590452353602875"
        );
    }

    #[test]
    fn m_fraction_cases() {
        assert_eq!(
            limit(&make_m_fraction(&q(2, 1), &q(1, 1)).unwrap(), 20),
            "1.43656365691809047072"
        );
        assert_eq!(
            limit(&make_m_fraction(&q(1, 1), &q(1, 1)).unwrap(), 20),
            "1.71828182845904523536"
        );
        assert_eq!(
            limit(&make_m_fraction_diagonal(&q(1, 1)).unwrap(), 20),
            "1.71828182845904523536"
        );
        let constant = make_m_fraction(&q(5, 2), &q(0, 1)).unwrap();
        assert_eq!(
            rational_values(&constant, 3).unwrap(),
            vec![Some(q(1, 1)); 4]
        );
        assert!(matches!(
            make_m_fraction(&q(-2, 1), &q(1, 1)),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            make_m_fraction(&q(0, 1), &q(1, 1)),
            Err(Error::Parameter(_))
        ));
        // b = z gives a singular first convergent but a usable fraction
        let diag = make_m_fraction(&q(3, 1), &q(3, 1)).unwrap();
        assert!(convergents(&diag, 1).unwrap()[1].is_singular());
    }

    #[test]
    fn rat_exp_limits() {
        assert_eq!(
            limit(&make_rat_exp(1, 3).unwrap(), 30),
            "1.395612425086089528628125319603"
        );
        assert_eq!(
            limit(&make_rat_exp(2, 3).unwrap(), 30),
            "1.947734041054675856639021207928"
        );
        assert!(matches!(make_rat_exp(3, 2), Err(Error::Parameter(_))));
        assert!(matches!(make_rat_exp(0, 2), Err(Error::Parameter(_))));
        assert!(matches!(make_rat_exp(2, 2), Err(Error::Parameter(_))));
    }

    #[test]
    fn exp_inv_n_matches_rat_exp() {
        assert_eq!(make_exp_inv_n(4).unwrap().prefix(), &q(5, 4));
        assert!(matches!(make_exp_inv_n(2), Err(Error::Parameter(_))));
        let a = make_exp_inv_n(3).unwrap();
        let b = make_rat_exp(1, 3).unwrap();
        assert!(same_convergents(&a, &b, 60).unwrap().same);
        assert_eq!(limit(&a, 30), "1.395612425086089528628125319603");
    }

    #[test]
    fn classical_limits() {
        let e25 = "2.7182818284590452353602875";
        for id in [FamilyId::ERegular, FamilyId::EOver, FamilyId::ESporadic] {
            assert_eq!(limit(&make_classical(id, None).unwrap(), 25), e25, "{id}");
        }
        assert_eq!(
            limit(&make_classical(FamilyId::ESquared, None).unwrap(), 25),
            "7.3890560989306502272304275"
        );
        assert_eq!(
            limit(&make_classical(FamilyId::EOneOverM, Some(2)).unwrap(), 25),
            "1.6487212707001281468486508"
        );
        assert!(make_classical(FamilyId::EOneOverM, Some(1)).is_err());
        assert!(make_classical(FamilyId::EOneOverM, None).is_err());
        assert!(make_classical(FamilyId::EEuler, None).is_err());
    }

    #[test]
    fn classical_first_terms() {
        let terms = |spec: &ExpansionSpec<BigRational>, k: u64| -> Vec<BigRational> {
            (1..=k)
                .map(|m| spec.coefficients(m).unwrap().unwrap().1)
                .collect()
        };
        let reg = make_classical(FamilyId::ERegular, None).unwrap();
        assert_eq!(terms(&reg, 7), [1, 2, 1, 1, 4, 1, 1].map(int));
        let sq = make_classical(FamilyId::ESquared, None).unwrap();
        assert_eq!(terms(&sq, 10), [2, 1, 1, 3, 18, 5, 1, 1, 6, 30].map(int));
        let root = make_classical(FamilyId::EOneOverM, Some(3)).unwrap();
        assert_eq!(terms(&root, 7), [2, 1, 1, 8, 1, 1, 14].map(int));
        let sporadic = make_classical(FamilyId::ESporadic, None).unwrap();
        assert_eq!(terms(&sporadic, 4), [1, 6, 10, 14].map(int));
    }

    #[test]
    fn comparisons() {
        let e = make_e_euler();
        assert_eq!(
            same_convergents(&e, &e, 20).unwrap(),
            ConvergentComparison {
                same: true,
                first_difference: None
            }
        );
        let reg = make_classical(FamilyId::ERegular, None).unwrap();
        assert_eq!(
            same_convergents(&e, &reg, 10).unwrap().first_difference,
            Some(0)
        );
        let conf = make_confluent_1f1(&q(1, 1)).unwrap();
        let diag = make_m_fraction_diagonal(&q(1, 1)).unwrap();
        let cmp = same_convergents(&conf, &diag, 10).unwrap();
        assert!(!cmp.same && cmp.first_difference.unwrap() <= 2);
    }

    #[test]
    fn sign_pattern() {
        let specs = [
            make_e_euler(),
            make_exp_n(4).unwrap(),
            make_rat_exp(2, 5).unwrap(),
        ];
        for spec in &specs {
            for m in 1..200 {
                let (a, b) = spec.coefficients(m).unwrap().unwrap();
                assert!(
                    a < BigRational::zero() && b > BigRational::zero(),
                    "{} m={m}",
                    spec.name()
                );
            }
        }
    }
}
