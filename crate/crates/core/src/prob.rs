//! Exact probabilities.
//!
//! Every probability is an arbitrary-precision rational kept in lowest terms.
//! Floating point never enters the semantics; the only lossy conversion is
//! [`fmt_decimal`], which exists for display.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::ops::Mul;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Unbounded exact rational, used for quantities that may leave `[0, 1]`
/// (expected step counts, masses of pointwise joins).
pub type Rational = BigRational;

/// A probability: an exact rational in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Prob(BigRational);

impl Prob {
    pub fn zero() -> Self {
        Prob(BigRational::zero())
    }

    pub fn one() -> Self {
        Prob(BigRational::one())
    }

    /// `numer / denom`, rejected unless it lies in `[0, 1]`.
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidProbability(format!("{numer}/{denom}")));
        }
        Self::from_rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_rational(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::ProbabilityOutOfRange(fmt_rational(&value)));
        }
        Ok(Prob(value))
    }

    /// `2^-k`.
    pub fn dyadic(k: u32) -> Self {
        Prob(BigRational::new(BigInt::one(), BigInt::one() << k))
    }

    pub fn half() -> Self {
        Self::dyadic(1)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `1 - p`.
    pub fn complement(&self) -> Self {
        Prob(BigRational::one() - &self.0)
    }

    /// `p + q`, failing when the sum leaves `[0, 1]`.
    pub fn checked_add(&self, other: &Prob) -> Result<Self> {
        let sum = &self.0 + &other.0;
        if sum > BigRational::one() {
            return Err(Error::MassOverflow(fmt_rational(&sum)));
        }
        Ok(Prob(sum))
    }

    /// `p - q`, saturating at zero.
    pub fn saturating_sub(&self, other: &Prob) -> Self {
        if other.0 >= self.0 {
            Self::zero()
        } else {
            Prob(&self.0 - &other.0)
        }
    }
}

impl Default for Prob {
    fn default() -> Self {
        Self::zero()
    }
}

impl Mul for &Prob {
    type Output = Prob;

    fn mul(self, rhs: &Prob) -> Prob {
        Prob(&self.0 * &rhs.0)
    }
}

impl Mul for Prob {
    type Output = Prob;

    fn mul(self, rhs: Prob) -> Prob {
        Prob(self.0 * rhs.0)
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(&self.0))
    }
}

impl FromStr for Prob {
    type Err = Error;

    /// Accepts `a/b` or a bare integer (`0`, `1`).
    fn from_str(s: &str) -> Result<Self> {
        let value = parse_rational(s)?;
        Self::from_rational(value)
    }
}

/// Renders `a/b`, or just `a` when the denominator is one.
pub fn fmt_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Rounds a non-negative value to `digits` decimal places (half up). For
/// display only.
pub fn fmt_decimal(value: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u8).pow(digits as u32);
    let scaled = value * BigRational::from_integer(scale.clone()) + BigRational::new(BigInt::from(1u8), BigInt::from(2u8));
    let n = scaled.floor().to_integer();
    let (int, frac) = n.div_rem(&scale);
    if digits == 0 {
        return int.to_string();
    }
    let frac = frac.to_string();
    format!("{int}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// Parses `a/b` or `a` with non-negative decimal integers.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidProbability(s.into());
    let digits = |t: &str| -> Result<BigInt> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d) = (digits(n)?, digits(d)?);
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(digits(s)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!("1/2".parse::<Prob>().unwrap(), Prob::half());
        assert_eq!("2/4".parse::<Prob>().unwrap().to_string(), "1/2");
        assert_eq!(fmt_decimal(&parse_rational("1/3").unwrap(), 3), "0.333");
        assert_eq!(fmt_decimal(&parse_rational("2/3").unwrap(), 2), "0.67");
        assert_eq!(fmt_decimal(&parse_rational("1/200").unwrap(), 2), "0.01");
        assert_eq!(fmt_decimal(&parse_rational("7/4").unwrap(), 0), "2");
        assert_eq!("1".parse::<Prob>().unwrap(), Prob::one());
        assert_eq!("0".parse::<Prob>().unwrap(), Prob::zero());
        assert!("3/2".parse::<Prob>().is_err());
        assert!("1/0".parse::<Prob>().is_err());
        assert!("-1/2".parse::<Prob>().is_err());
        assert!("0.5".parse::<Prob>().is_err());
        assert!("".parse::<Prob>().is_err());
    }

    #[test]
    fn arithmetic_stays_exact() {
        let q = Prob::new(1, 4).unwrap();
        assert_eq!(&q * &Prob::half(), Prob::new(1, 8).unwrap());
        assert_eq!(Prob::dyadic(3).complement(), Prob::new(7, 8).unwrap());
        assert!(Prob::new(3, 4).unwrap().checked_add(&Prob::half()).is_err());
        assert_eq!(Prob::half().checked_add(&Prob::half()).unwrap(), Prob::one());
        assert_eq!(Prob::dyadic(40).to_string(), "1/1099511627776");
    }
}
