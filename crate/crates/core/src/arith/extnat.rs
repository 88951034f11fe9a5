use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ArithError;

/// A natural number or the symbol `INFINITY`, with every natural below infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Finite(BigUint),
    Infinity,
}

impl ExtNat {
    pub fn zero() -> Self {
        ExtNat::Finite(BigUint::zero())
    }

    pub fn one() -> Self {
        ExtNat::Finite(BigUint::one())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtNat::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtNat::Finite(n) if n.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, ExtNat::Finite(n) if n.is_one())
    }

    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            ExtNat::Finite(n) => Some(n),
            ExtNat::Infinity => None,
        }
    }

    /// The value as a `u64`, if finite and small enough.
    pub fn to_u64(&self) -> Option<u64> {
        self.finite().and_then(|n| u64::try_from(n).ok())
    }
}

impl Default for ExtNat {
    fn default() -> Self {
        ExtNat::zero()
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Finite(BigUint::from(n))
    }
}

impl From<BigUint> for ExtNat {
    fn from(n: BigUint) -> Self {
        ExtNat::Finite(n)
    }
}

impl Add for &ExtNat {
    type Output = ExtNat;
    fn add(self, rhs: &ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinity,
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;
    fn add(self, rhs: ExtNat) -> ExtNat {
        &self + &rhs
    }
}

/// Cardinal multiplication: `0 * INFINITY = 0`.
impl Mul for &ExtNat {
    type Output = ExtNat;
    fn mul(self, rhs: &ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a * b),
            (x, y) if x.is_zero() || y.is_zero() => ExtNat::zero(),
            _ => ExtNat::Infinity,
        }
    }
}

impl Mul for ExtNat {
    type Output = ExtNat;
    fn mul(self, rhs: ExtNat) -> ExtNat {
        &self * &rhs
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtNat {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(ExtNat::Infinity);
        }
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ArithError::Malformed(s.to_owned()));
        }
        BigUint::from_str(s)
            .map(ExtNat::Finite)
            .map_err(|_| ArithError::Malformed(s.to_owned()))
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
