use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

/// Exact arbitrary-precision fraction, always kept in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer in rational literal `{0}`")]
    BadInteger(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let denom = denom.into();
        assert!(!denom.is_zero(), "rational with zero denominator");
        Rational(BigRational::new(numer.into(), denom))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `2^k` for any integer exponent, so `pow2(-3) == 1/8`.
    pub fn pow2(k: i64) -> Self {
        let mag = BigInt::one() << k.unsigned_abs();
        if k >= 0 {
            Rational::from_integer(mag)
        } else {
            Rational(BigRational::new_raw(BigInt::one(), mag))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Clamps into `[lo, hi]`.
    pub fn clamp(self, lo: &Rational, hi: &Rational) -> Self {
        if &self < lo {
            lo.clone()
        } else if &self > hi {
            hi.clone()
        } else {
            self
        }
    }

    /// Smallest integer `k` with `2^k >= self`. Requires `self > 0`.
    pub fn ceil_log2(&self) -> i64 {
        assert!(self.is_positive(), "ceil_log2 of a non-positive rational");
        let n = self.numer();
        let d = self.denom();
        // Start from the bit-length estimate, then correct by at most a couple of steps.
        let mut k = n.bits() as i64 - d.bits() as i64;
        while Rational::pow2(k) < *self {
            k += 1;
        }
        while Rational::pow2(k - 1) >= *self {
            k -= 1;
        }
        k
    }

    /// The midpoint `(self + other) / 2`.
    pub fn midpoint(&self, other: &Rational) -> Rational {
        (self + other) * Rational::new(1, 2)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    /// True when the denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        let d = self.denom();
        (d & (d - BigInt::one())).is_zero()
    }

    /// Truncating conversion for diagnostics only; never used in exact paths.
    pub fn approx_f64(&self) -> f64 {
        let (n, d) = (self.numer(), self.denom());
        let shift = (n.bits().max(d.bits()) as i64 - 60).max(0) as u64;
        let n = (n >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN);
        let d = (d >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN);
        n / d
    }
}

/// Truncated subtraction `max(a - b, 0)`.
pub fn dotminus(a: &Rational, b: &Rational) -> Rational {
    if a > b {
        a - b
    } else {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let parse =
            |t: &str| t.trim().parse::<BigInt>().map_err(|_| ParseRationalError::BadInteger(s.to_string()));
        match s.split_once('/') {
            None => Ok(Rational::from_integer(parse(s)?)),
            Some((n, d)) => {
                let d = parse(d)?;
                if d.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator(s.to_string()));
                }
                Ok(Rational::new(parse(n)?, d))
            }
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Div<&Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        &self / rhs
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.denom().is_one() && *self.numer() == BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rational::from(*other)))
    }
}

// JSON form is the two-element integer array `[num, den]`. Big integers go
// through serde_json's arbitrary-precision numbers so nothing is rounded.

fn big_to_number<E: serde::ser::Error>(n: &BigInt) -> Result<serde_json::Number, E> {
    serde_json::Number::from_str(&n.to_string()).map_err(E::custom)
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut tup = serializer.serialize_tuple(2)?;
        tup.serialize_element(&big_to_number::<S::Error>(self.numer())?)?;
        tup.serialize_element(&big_to_number::<S::Error>(self.denom())?)?;
        tup.end()
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a [num, den] integer pair, an integer, or a \"num/den\" string")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Rational, A::Error> {
        let num: serde_json::Number =
            seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let den: serde_json::Number =
            seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if seq.next_element::<serde_json::Value>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        let parse = |n: &serde_json::Number| {
            n.to_string()
                .parse::<BigInt>()
                .map_err(|_| de::Error::custom(format!("non-integer component {n}")))
        };
        let den = parse(&den)?;
        if den.is_zero() {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(parse(&num)?, den))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
        Ok(Rational::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
        Ok(Rational::from_integer(v))
    }

    fn visit_map<A: de::MapAccess<'de>>(self, map: A) -> Result<Rational, A::Error> {
        // arbitrary_precision numbers arrive as a single-entry map
        let n = serde_json::Number::deserialize(de::value::MapAccessDeserializer::new(map))?;
        n.to_string()
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|_| de::Error::custom(format!("non-integer rational {n}")))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        deserializer.deserialize_any(RationalVisitor)
    }
}
