//! Binary words, the residue classes `L_w`, the prime sets `P_w` and the
//! localizations `Q_w` of the integers.
//!
//! A word `w` of length `k` and binary value `r` names the residue class
//! `L_w = { n : n ≡ r (mod 2^k) }`. Its prime set `P_w` holds the primes whose
//! index lies in `L_w`, and `Q_w` is the subring of rationals whose
//! denominators avoid `P_w`. Prepending a bit refines a class, so
//! `{L_0w, L_1w}` partitions `L_w`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{factorize, prime_index, ArithError, ExtNat, Rational};

/// Longest word we accept; residues must fit a `u64` mask.
pub const MAX_WORD_LEN: u32 = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocError {
    #[error("restriction length {n} exceeds word length {len}")]
    LengthExceeded { n: u32, len: u32 },
    #[error("{q} is not in Q_{word}")]
    NotInRing { q: String, word: String },
    #[error("invalid word {0:?}")]
    InvalidWord(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A finite string over `{0, 1}`. Identity includes the length, so `"0110"`
/// and `"110"` are different words with the same value.
///
/// The leftmost bit is the most significant one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u32,
    value: u64,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, value: 0 };

    pub fn new(value: u64, len: u32) -> Result<Self, LocError> {
        if len > MAX_WORD_LEN || (len < 64 && value >> len != 0) {
            return Err(LocError::InvalidWord(format!("value {value} with length {len}")));
        }
        Ok(Word { len, value })
    }

    /// All-zero word `0^len`.
    pub fn zeros(len: u32) -> Self {
        Word::new(0, len).expect("word too long")
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    fn modulus_mask(&self) -> u64 {
        (1u64 << self.len) - 1
    }

    /// The word `bit · self`, one longer. Panics past [`MAX_WORD_LEN`].
    pub fn prepend(&self, bit: bool) -> Word {
        assert!(self.len < MAX_WORD_LEN, "word too long to extend");
        let value = if bit { self.value | (1 << self.len) } else { self.value };
        Word { len: self.len + 1, value }
    }

    /// The length-`n` suffix `self↾n`.
    pub fn suffix(&self, n: u32) -> Result<Word, LocError> {
        if n > self.len {
            return Err(LocError::LengthExceeded { n, len: self.len });
        }
        Ok(Word { len: n, value: self.value & ((1u64 << n) - 1) })
    }

    /// Membership of `n` in the residue class `L_w`.
    pub fn class_contains(&self, n: u64) -> bool {
        n & self.modulus_mask() == self.value
    }

    /// All words of length `len`, in increasing value order.
    pub fn all_of_len(len: u32) -> impl Iterator<Item = Word> {
        assert!(len <= MAX_WORD_LEN);
        (0..1u64 << len).map(move |value| Word { len, value })
    }

    /// Human-readable form; the empty word prints as `∅`.
    pub fn human(&self) -> String {
        if self.is_empty() {
            "∅".to_owned()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.len).rev() {
            f.write_str(if self.value >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", self.to_string())
    }
}

impl FromStr for Word {
    type Err = LocError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > MAX_WORD_LEN as usize {
            return Err(LocError::InvalidWord(s.to_owned()));
        }
        let mut w = Word::EMPTY;
        for c in s.chars() {
            let bit = match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(LocError::InvalidWord(s.to_owned())),
            };
            w = Word { len: w.len + 1, value: w.value << 1 | bit };
        }
        Ok(w)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `prepend(bit, w)`.
pub fn prepend(bit: bool, w: &Word) -> Word {
    w.prepend(bit)
}

/// `n ∈ L_w`.
pub fn in_l(w: &Word, n: u64) -> bool {
    w.class_contains(n)
}

/// `v↾n`, the length-`n` suffix of `v`.
pub fn suffix_restrict(v: &Word, n: u32) -> Result<Word, LocError> {
    v.suffix(n)
}

/// The localization data attached to a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalizedContext {
    word: Word,
}

impl LocalizedContext {
    pub fn new(word: Word) -> Self {
        LocalizedContext { word }
    }

    pub fn word(&self) -> Word {
        self.word
    }

    /// `p ∈ P_w`.
    pub fn prime_in_set(&self, p: u64) -> Result<bool, LocError> {
        Ok(self.word.class_contains(prime_index(p)? as u64))
    }

    /// No prime factor of `n` lies in `P_w`.
    fn avoids_set(&self, n: &BigUint) -> Result<bool, LocError> {
        if n.is_one() {
            return Ok(true);
        }
        if self.word.is_empty() {
            return Ok(false);
        }
        for (p, _) in factorize(n)? {
            if self.prime_in_set(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains(&self, q: &Rational) -> Result<bool, LocError> {
        self.avoids_set(q.denom().magnitude())
    }

    pub fn is_unit(&self, q: &Rational) -> Result<bool, LocError> {
        self.require(q)?;
        Ok(!q.is_zero() && self.avoids_set(q.numer().magnitude())?)
    }

    /// `|Q_w / q Q_w|`.
    pub fn coker_order(&self, q: &Rational) -> Result<ExtNat, LocError> {
        self.require(q)?;
        if q.is_zero() {
            return Ok(ExtNat::Infinity);
        }
        let mut order = BigUint::one();
        if !q.numer().magnitude().is_one() {
            for (p, e) in factorize(q.numer().magnitude())? {
                if self.prime_in_set(p)? {
                    order *= BigUint::from(p).pow(e);
                }
            }
        }
        Ok(ExtNat::Finite(order))
    }

    fn require(&self, q: &Rational) -> Result<(), LocError> {
        if self.contains(q)? {
            Ok(())
        } else {
            Err(LocError::NotInRing { q: q.to_string(), word: self.word.human() })
        }
    }
}

/// `q ∈ Q_w`.
pub fn in_qw(q: &Rational, w: &Word) -> Result<bool, LocError> {
    LocalizedContext::new(*w).contains(q)
}

/// `q` is a unit of `Q_w`; errors with `NotInRing` when `q ∉ Q_w`.
pub fn unit_in_qw(q: &Rational, w: &Word) -> Result<bool, LocError> {
    LocalizedContext::new(*w).is_unit(q)
}

/// Order of the cokernel of multiplication by `q` on `Q_w`; `INFINITY` for `q = 0`.
pub fn coker_order_qw(q: &Rational, w: &Word) -> Result<ExtNat, LocError> {
    LocalizedContext::new(*w).coker_order(q)
}

/// Writes `q = q0 + q1` with `q0 ∈ Q_0w` and `q1 ∈ Q_1w`.
///
/// The denominator `b` splits as `b0 · b1` where `b0` carries exactly the
/// primes of `P_0w`. With `u · b1 + v · b0 = 1` and `0 ≤ u < b0` the parts are
/// `q0 = a·v/b1` and `q1 = a·u/b0`.
pub fn split_rational(q: &Rational, w: &Word) -> Result<(Rational, Rational), LocError> {
    let left = LocalizedContext::new(w.prepend(false));
    let b = q.denom().magnitude();
    let mut b0 = BigUint::one();
    if !b.is_one() {
        for (p, e) in factorize(b)? {
            if left.prime_in_set(p)? {
                b0 *= BigUint::from(p).pow(e);
            }
        }
    }
    let b1 = BigInt::from_biguint(Sign::Plus, b / &b0);
    let b0 = BigInt::from_biguint(Sign::Plus, b0);

    // u ≡ b1^{-1} (mod b0), reduced into [0, b0)
    let egcd = b1.extended_gcd(&b0);
    debug_assert!(egcd.gcd.is_one());
    let u = egcd.x.mod_floor(&b0);
    let v = (BigInt::one() - &u * &b1) / &b0;

    let a = q.numer();
    let q0 = Rational::new(a * v, b1).expect("b1 > 0");
    let q1 = Rational::new(a * u, b0).expect("b0 > 0");
    Ok((q0, q1))
}
