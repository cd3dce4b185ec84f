//! Coefficient fields: exact rationals and small prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A field usable as the coefficient ring of an algebra.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    fn parse(s: &str) -> Result<Self>;
}

impl Scalar for BigRational {
    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(e.to_string()))?;
                let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(e.to_string()))?;
                if d.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(BigRational::new(n, d))
            }
            None => BigInt::from_str(s)
                .map(BigRational::from_integer)
                .map_err(|e| Error::Parse(e.to_string())),
        }
    }
}

/// Integers modulo the prime `P` (`P < 2^31`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gf<const P: u32>(u32);

impl<const P: u32> Gf<P> {
    pub fn new(v: i64) -> Self {
        Gf(v.rem_euclid(P as i64) as u32)
    }
    pub fn value(self) -> u32 {
        self.0
    }
    fn pow(self, mut e: u64) -> Self {
        let (mut b, mut acc) = (self, Self::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> fmt::Display for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Gf<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Gf(((self.0 as u64 + o.0 as u64) % P as u64) as u32)
    }
}
impl<const P: u32> Sub for Gf<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Gf(((self.0 as u64 + P as u64 - o.0 as u64) % P as u64) as u32)
    }
}
impl<const P: u32> Mul for Gf<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Gf(((self.0 as u64 * o.0 as u64) % P as u64) as u32)
    }
}
impl<const P: u32> Neg for Gf<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Gf((P - self.0) % P)
    }
}
impl<const P: u32> Zero for Gf<P> {
    fn zero() -> Self {
        Gf(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}
impl<const P: u32> One for Gf<P> {
    fn one() -> Self {
        Gf(1 % P)
    }
}

impl<const P: u32> Scalar for Gf<P> {
    fn inverse(&self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(P as u64 - 2))
    }
    fn from_i64(v: i64) -> Self {
        Gf::new(v)
    }
    fn parse(s: &str) -> Result<Self> {
        let r = BigRational::parse(s)?;
        let reduce = |x: &BigInt| {
            let m = x % BigInt::from(P);
            let m: i64 = m.try_into().expect("residue fits");
            Gf::<P>::new(m)
        };
        let d = reduce(r.denom())
            .inverse()
            .ok_or_else(|| Error::Parse(format!("denominator vanishes mod {P}")))?;
        Ok(reduce(r.numer()) * d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Gf<7>;

    #[test]
    fn prime_field_arithmetic() {
        assert_eq!(F7::new(3) * F7::new(5), F7::new(1));
        assert_eq!(F7::new(3).inverse(), Some(F7::new(5)));
        assert_eq!(-F7::new(2), F7::new(5));
        assert_eq!(F7::new(2) - F7::new(4), F7::new(5));
        assert_eq!(F7::parse("1/2").unwrap(), F7::new(4));
        assert!(F7::parse("1/7").is_err());
        assert_eq!(F7::zero().inverse(), None);
    }

    #[test]
    fn rational_parse() {
        assert_eq!(BigRational::parse("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(BigRational::parse("-4").unwrap(), BigRational::from_i64(-4));
        assert!(BigRational::parse("1/0").is_err());
        assert!(BigRational::parse("x").is_err());
    }
}
