use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ContFracError;

/// A reduced fraction, or the single point at infinity `1/0`.
///
/// The sign always lives on the numerator and the denominator is never
/// negative. Arithmetic is projective: `a - 1/0 = 1/0` and `1 / 0 = 1/0`, so
/// every evaluation that the diagram machinery needs is total.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtRational {
    num: BigInt,
    den: BigInt,
}

/// Parity class of a reduced fraction, numerator first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    /// odd/odd
    OO,
    /// odd/even
    OE,
    /// even/odd
    EO,
}

impl Parity {
    /// Parity of the vector `(num, den)` reduced mod 2. `(0, 0)` has no class.
    pub fn from_bits(num_odd: bool, den_odd: bool) -> Option<Parity> {
        match (num_odd, den_odd) {
            (true, true) => Some(Parity::OO),
            (true, false) => Some(Parity::OE),
            (false, true) => Some(Parity::EO),
            (false, false) => None,
        }
    }

    /// `(numerator odd, denominator odd)`.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Parity::OO => (true, true),
            Parity::OE => (true, false),
            Parity::EO => (false, true),
        }
    }

    /// Mod-2 sum of two classes; the class of a Farey mediant.
    pub fn mediant(self, other: Parity) -> Option<Parity> {
        let (a, b) = self.bits();
        let (c, d) = other.bits();
        Parity::from_bits(a ^ c, b ^ d)
    }

    pub fn is_odd_odd(self) -> bool {
        self == Parity::OO
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::OO => "o/o",
            Parity::OE => "o/e",
            Parity::EO => "e/o",
        })
    }
}

impl ExtRational {
    /// Reduces `p/q`. Any `p/0` with `p != 0` collapses to `1/0`.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, ContFracError> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(ContFracError::ZeroOverZero);
        }
        if q.is_zero() {
            return Ok(Self::infinity());
        }
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        let g = p.gcd(&q);
        Ok(ExtRational { num: p / &g, den: q / g })
    }

    pub fn infinity() -> Self {
        ExtRational { num: BigInt::one(), den: BigInt::zero() }
    }

    pub fn zero() -> Self {
        ExtRational { num: BigInt::zero(), den: BigInt::one() }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        ExtRational { num: n.into(), den: BigInt::one() }
    }

    /// Builds from a projective vector; `(0, 0)` is the only rejected input.
    pub(crate) fn from_vector(p: &BigInt, q: &BigInt) -> Self {
        Self::new(p.clone(), q.clone()).expect("unimodular vectors are never (0, 0)")
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bits(self.num.is_odd(), self.den.is_odd())
            .expect("reduced fractions are never even/even")
    }

    /// Projective reciprocal: `1/0 <-> 0`.
    pub fn recip(&self) -> Self {
        if self.num.is_negative() {
            ExtRational { num: -self.den.clone(), den: -self.num.clone() }
        } else if self.num.is_zero() {
            Self::infinity()
        } else {
            ExtRational { num: self.den.clone(), den: self.num.clone() }
        }
    }

    /// `n - self`, with `n - 1/0 = 1/0`.
    pub fn subtract_from_integer(&self, n: &BigInt) -> Self {
        if self.is_infinite() {
            return Self::infinity();
        }
        Self::from_vector(&(n * &self.den - &self.num), &self.den)
    }

    /// `self + n` for an integer shift; infinity is fixed.
    pub fn add_integer(&self, n: impl Into<BigInt>) -> Self {
        if self.is_infinite() {
            return Self::infinity();
        }
        Self::from_vector(&(&self.num + n.into() * &self.den), &self.den)
    }

    /// Exact value as an `i64`, when the fraction is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        i64::try_from(&self.num).ok()
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for ExtRational {
    type Err = ContFracError;

    /// Accepts `"p/q"` only; a bare integer is not a fraction here.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ContFracError::Parse(s.to_string());
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        ExtRational::new(p, q)
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
