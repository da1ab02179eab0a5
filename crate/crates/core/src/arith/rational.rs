//! Exact rationals with reduced representation.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A fraction in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        Ok(ExactRational(BigRational::new(num.into(), den)))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn checked_div(&self, other: &ExactRational) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        Ok(ExactRational(&self.0 / &other.0))
    }

    pub fn recip(&self) -> Result<Self> {
        ExactRational::one().checked_div(self)
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        Ok(ExactRational(num_traits::pow(self.0.clone(), e as usize)))
    }

    pub fn to_f64(&self) -> f64 {
        // scale both parts down before converting
        match self.0.to_f64() {
            Some(x) if x.is_finite() => x,
            _ => {
                let n = self.0.numer();
                let d = self.0.denom();
                let shift = n.bits().max(d.bits()).saturating_sub(1000);
                let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
                let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::domain(format!("not a rational: {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => ExactRational::new(parse(n)?, parse(d)?),
            None => Ok(ExactRational::from_int(parse(s)?)),
        }
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_int(n)
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational(&self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl AddAssign<&ExactRational> for ExactRational {
    fn add_assign(&mut self, rhs: &ExactRational) {
        self.0 += &rhs.0;
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |a, b| a + b)
    }
}

impl PartialEq<i64> for ExactRational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

impl PartialOrd<i64> for ExactRational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

/// Shorthand used throughout tests and tables; panics on a zero denominator.
pub fn q(num: i64, den: i64) -> ExactRational {
    ExactRational::new(num, den).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalises_sign() {
        let r = ExactRational::new(6, -8).unwrap();
        assert_eq!(r.to_string(), "-3/4");
        assert_eq!(q(4, 2).to_string(), "2");
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert!(ExactRational::new(1, 0).is_err());
        assert!(q(1, 2).checked_div(&ExactRational::zero()).is_err());
    }

    #[test]
    fn parses_round_trip() {
        let r: ExactRational = "-18059/4626720".parse().unwrap();
        assert_eq!(r.to_string(), "-18059/4626720");
        assert_eq!("7".parse::<ExactRational>().unwrap(), 7);
    }

    #[test]
    fn huge_values_convert_to_float() {
        let big = ExactRational::from_int(BigInt::from(10).pow(400));
        let r = big.checked_div(&(big.clone() * q(3, 1))).unwrap();
        assert!((r.to_f64() - 1.0 / 3.0).abs() < 1e-15);
        let r2 = ExactRational(BigRational::new(BigInt::from(1), BigInt::from(10).pow(400) * 3))
            * ExactRational::from_int(BigInt::from(10).pow(400));
        assert!((r2.to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }
}
