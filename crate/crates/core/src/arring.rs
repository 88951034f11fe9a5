//! The direct-limit ring `R = ⋃ R_n`.
//!
//! `R_n` is the product of the localizations `Q_w` over all words `w` of
//! length `n`, with one orthogonal idempotent `e_w` per word. The embedding
//! `R_n → R_{n+1}` sends `e_w` to `e_{0w} + e_{1w}`, so a coefficient attached to
//! `w` is copied to every longer word ending in `w`.
//!
//! Elements are stored densely: `coeffs[v]` is the coefficient of the word of
//! length `level` whose binary value is `v`. Arithmetic refines both operands
//! to a common level, works componentwise, and returns the canonical
//! (minimal-level) representative.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{factorize, prime_index, ExtNat, Rational};
use crate::locnum::{in_qw, unit_in_qw, LocError, LocalizedContext, Word};
use crate::typesys::{Characteristic, Tail};

/// Dense coefficient vectors cap the level we are willing to represent.
pub const MAX_LEVEL: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("coefficient of {0} does not lie in its localization")]
    InvalidCoefficient(String),
    #[error("coefficient map must have exactly the words of length {0}")]
    MissingWord(u32),
    #[error("cannot refine level {from} down to {to}")]
    LevelTooSmall { from: u32, to: u32 },
    #[error("level {0} exceeds the maximum of {MAX_LEVEL}")]
    LevelTooLarge(u32),
    #[error("element is not an idempotent")]
    NotIdempotent,
    #[error("element is zero")]
    ZeroElement,
    #[error("element is not a unit")]
    NotUnit,
    #[error("division needs an element of level at least 1")]
    InvalidLevel,
    #[error("divisor must be positive")]
    ZeroDivisor,
    #[error(transparent)]
    Loc(#[from] LocError),
}

#[derive(Clone)]
pub struct RingElement {
    level: u32,
    coeffs: Vec<Rational>,
}

/// What multiplication by an element does to `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MultClassification {
    pub is_zero: bool,
    pub is_zero_divisor: bool,
    pub is_injective: bool,
    pub is_unit: bool,
    pub is_idempotent: bool,
}

impl RingElement {
    /// Validated constructor from a full word → coefficient map.
    pub fn new(level: u32, coeffs: &BTreeMap<Word, Rational>) -> Result<Self, RingError> {
        check_level(level)?;
        if coeffs.len() as u64 != 1u64 << level || coeffs.keys().any(|w| w.len() != level) {
            return Err(RingError::MissingWord(level));
        }
        Self::from_dense(level, coeffs.values().cloned().collect())
    }

    /// Validated constructor from coefficients listed by word value.
    pub fn from_dense(level: u32, coeffs: Vec<Rational>) -> Result<Self, RingError> {
        check_level(level)?;
        if coeffs.len() as u64 != 1u64 << level {
            return Err(RingError::MissingWord(level));
        }
        let x = RingElement { level, coeffs };
        for (w, c) in x.terms() {
            if !in_qw(c, &w)? {
                return Err(RingError::InvalidCoefficient(w.human()));
            }
        }
        Ok(x)
    }

    /// Skips the membership check. Only for coefficients known to be valid,
    /// or for scratch values in `R ⊗ Q` that are validated later.
    pub fn from_dense_unchecked(level: u32, coeffs: Vec<Rational>) -> Self {
        debug_assert_eq!(coeffs.len() as u64, 1u64 << level);
        RingElement { level, coeffs }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        RingElement { level: 0, coeffs: vec![Rational::from_integer(n)] }
    }

    /// `e_w`.
    pub fn basis_idempotent(w: &Word) -> Self {
        assert!(w.len() <= MAX_LEVEL, "word too long for a ring element");
        let mut coeffs = vec![Rational::zero(); 1 << w.len()];
        coeffs[w.value() as usize] = Rational::one();
        RingElement { level: w.len(), coeffs }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeff(&self, w: &Word) -> Option<&Rational> {
        (w.len() == self.level).then(|| &self.coeffs[w.value() as usize])
    }

    pub fn dense(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `(w, γ_w)` for every word of the current level.
    pub fn terms(&self) -> impl Iterator<Item = (Word, &Rational)> + '_ {
        Word::all_of_len(self.level).zip(self.coeffs.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Membership of every coefficient in its localization.
    pub fn is_valid(&self) -> Result<bool, LocError> {
        for (w, c) in self.terms() {
            if !in_qw(c, &w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The same element written at level `m ≥ level`.
    pub fn refine(&self, m: u32) -> Result<Self, RingError> {
        if m < self.level {
            return Err(RingError::LevelTooSmall { from: self.level, to: m });
        }
        check_level(m)?;
        let mask = (1usize << self.level) - 1;
        let coeffs = (0..1usize << m).map(|v| self.coeffs[v & mask].clone()).collect();
        Ok(RingElement { level: m, coeffs })
    }

    /// The equal element of minimal level.
    pub fn canonicalize(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        let mut level = self.level;
        while level > 0 {
            let half = 1usize << (level - 1);
            if (0..half).any(|v| coeffs[v] != coeffs[v + half]) {
                break;
            }
            coeffs.truncate(half);
            level -= 1;
        }
        RingElement { level, coeffs }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let level = self.level.max(other.level);
        let a = self.refine(level).expect("level within bounds");
        let b = other.refine(level).expect("level within bounds");
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| f(x, y)).collect();
        RingElement { level, coeffs }.canonicalize()
    }

    pub fn ring_add(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn ring_sub(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn ring_mul(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x * y)
    }

    /// Multiplies every coefficient by `q`. The result may leave `R` when `q`
    /// is not an integer; check it with [`RingElement::is_valid`].
    pub fn scale(&self, q: &Rational) -> Self {
        RingElement {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
        .canonicalize()
    }

    /// Reads off injectivity, bijectivity and idempotency of `x ↦ αx` from the
    /// canonical coefficients `γ_w`.
    pub fn classify_mult(&self) -> Result<MultClassification, RingError> {
        let canon = self.canonicalize();
        let is_zero = canon.is_zero();
        let is_injective = canon.coeffs.iter().all(|c| !c.is_zero());
        let mut is_unit = is_injective;
        if is_unit {
            for (w, c) in canon.terms() {
                if !unit_in_qw(c, &w)? {
                    is_unit = false;
                    break;
                }
            }
        }
        let is_idempotent = canon.coeffs.iter().all(|c| c.is_zero() || c.is_one());
        Ok(MultClassification {
            is_zero,
            is_zero_divisor: !is_injective,
            is_injective,
            is_unit,
            is_idempotent,
        })
    }

    /// `|R / αR|`: infinite as soon as one canonical coefficient vanishes,
    /// otherwise the product of the local cokernel orders.
    pub fn coker_order(&self) -> Result<ExtNat, RingError> {
        let canon = self.canonicalize();
        if canon.coeffs.iter().any(Rational::is_zero) {
            return Ok(ExtNat::Infinity);
        }
        let mut order = ExtNat::one();
        for (w, c) in canon.terms() {
            order = order * LocalizedContext::new(w).coker_order(c)?;
        }
        Ok(order)
    }

    /// Componentwise inverse of a unit.
    pub fn inverse(&self) -> Result<Self, RingError> {
        if !self.classify_mult()?.is_unit {
            return Err(RingError::NotUnit);
        }
        let canon = self.canonicalize();
        let coeffs = canon.coeffs.iter().map(|c| c.recip().expect("unit")).collect();
        Ok(RingElement { level: canon.level, coeffs })
    }

    /// Solves `α·y = t`, returning `None` when no solution lies in `R`.
    pub fn solve(&self, target: &Self) -> Result<Option<Self>, RingError> {
        let level = self.level.max(target.level);
        let a = self.refine(level)?;
        let t = target.refine(level)?;
        let mut coeffs = Vec::with_capacity(a.coeffs.len());
        for (g, c) in a.coeffs.iter().zip(&t.coeffs) {
            match g.recip() {
                Some(inv) => coeffs.push(c * &inv),
                None if c.is_zero() => coeffs.push(Rational::zero()),
                None => return Ok(None),
            }
        }
        let y = RingElement { level, coeffs };
        Ok(if y.is_valid()? { Some(y.canonicalize()) } else { None })
    }
}

fn check_level(level: u32) -> Result<(), RingError> {
    if level > MAX_LEVEL {
        Err(RingError::LevelTooLarge(level))
    } else {
        Ok(())
    }
}

/// Equality in the direct limit: compare after refining to a common level.
impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        let a = self.canonicalize();
        let b = other.canonicalize();
        a.level == b.level && a.coeffs == b.coeffs
    }
}

impl Eq for RingElement {}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `γ·e"w" + ...`, zero coefficients omitted.
impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if self.level == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "e\"{w}\"")?;
            } else {
                write!(f, "({c})*e\"{w}\"")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

macro_rules! ring_op {
    ($tr:ident, $method:ident, $impl_fn:ident) => {
        impl $tr<&RingElement> for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                self.$impl_fn(rhs)
            }
        }
        impl $tr for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                self.$impl_fn(&rhs)
            }
        }
    };
}

ring_op!(Add, add, ring_add);
ring_op!(Sub, sub, ring_sub);
ring_op!(Mul, mul, ring_mul);

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement { level: self.level, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    level: u32,
    coeffs: BTreeMap<String, Rational>,
}

impl Serialize for RingElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coeffs = self
            .terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| (w.to_string(), c.clone()))
            .collect();
        ElementJson { level: self.level, coeffs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RingElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ElementJson::deserialize(deserializer)?;
        check_level(raw.level).map_err(D::Error::custom)?;
        let mut coeffs = vec![Rational::zero(); 1 << raw.level];
        for (key, c) in raw.coeffs {
            let w: Word = key.parse().map_err(D::Error::custom)?;
            if w.len() != raw.level {
                return Err(D::Error::custom(format!(
                    "word {key:?} does not have length {}",
                    raw.level
                )));
            }
            coeffs[w.value() as usize] = c;
        }
        RingElement::from_dense(raw.level, coeffs).map_err(D::Error::custom)
    }
}

pub fn element_new(level: u32, coeffs: &BTreeMap<Word, Rational>) -> Result<RingElement, RingError> {
    RingElement::new(level, coeffs)
}

pub fn basis_idempotent(w: &Word) -> RingElement {
    RingElement::basis_idempotent(w)
}

/// Splits a nonzero idempotent into two orthogonal nonzero idempotents.
///
/// With at least two words in the canonical support, the least word is split
/// off from the rest; a single word `w` is refined into `e_0w + e_1w`.
pub fn split_idempotent(eps: &RingElement) -> Result<(RingElement, RingElement), RingError> {
    let class = eps.classify_mult()?;
    if !class.is_idempotent {
        return Err(RingError::NotIdempotent);
    }
    if class.is_zero {
        return Err(RingError::ZeroElement);
    }
    let canon = eps.canonicalize();
    let support: Vec<Word> = canon.terms().filter(|(_, c)| c.is_one()).map(|(w, _)| w).collect();
    if let [w] = support[..] {
        check_level(w.len() + 1)?;
        Ok((
            RingElement::basis_idempotent(&w.prepend(false)),
            RingElement::basis_idempotent(&w.prepend(true)),
        ))
    } else {
        let first = RingElement::basis_idempotent(&support[0]);
        let rest = canon.ring_sub(&first);
        Ok((first, rest))
    }
}

/// Residue of `q` modulo `modulus`, for `q` whose denominator is prime to it.
fn residue(q: &Rational, modulus: &BigInt) -> BigInt {
    let inv = q.denom().extended_gcd(modulus).x;
    (q.numer() * inv).mod_floor(modulus)
}

/// One-level division witness in `R_n / R_{n-1}`.
///
/// Returns `y` at level `n = level(x)` such that `m·y − x` lies in `R_{n−1}`.
/// For each word `w` of length `n − 1` the shared value `c_w` of
/// `m·y_0w − x_0w` and `m·y_1w − x_1w` is the integer of least absolute value
/// (ties toward positive) satisfying the local congruences at the primes of
/// `P_w` dividing `m`.
pub fn divide_mod(x: &RingElement, m: u64) -> Result<RingElement, RingError> {
    if m == 0 {
        return Err(RingError::ZeroDivisor);
    }
    let n = x.level;
    if n == 0 {
        return Err(RingError::InvalidLevel);
    }
    let m_big = BigInt::from(m);
    let m_factors: Vec<(u64, u32, usize)> = factorize(m_big.magnitude())
        .and_then(|f| f.into_iter().map(|(p, e)| Ok((p, e, prime_index(p)?))).collect())
        .map_err(LocError::from)?;

    let half = 1usize << (n - 1);
    let mut y = vec![Rational::zero(); 1 << n];
    for v in 0..half {
        let w = Word::new(v as u64, n - 1).expect("level bounded");
        let (left, right) = (w.prepend(false), w.prepend(true));
        let (x0, x1) = (&x.coeffs[v], &x.coeffs[v + half]);

        // CRT over the prime powers of m that are not invertible in Q_w
        let mut c = BigInt::zero();
        let mut modulus = BigInt::one();
        for &(p, e, idx) in &m_factors {
            let target = if left.class_contains(idx as u64) {
                x0
            } else if right.class_contains(idx as u64) {
                x1
            } else {
                continue;
            };
            let pk = BigInt::from(p).pow(e);
            let r = residue(&-target, &pk);
            let g = modulus.extended_gcd(&pk);
            // c ≡ current (mod modulus), c ≡ r (mod pk)
            let t = ((&r - &c) * g.x).mod_floor(&pk);
            c += &modulus * t;
            modulus *= &pk;
            c = c.mod_floor(&modulus);
        }
        let alt = &c - &modulus;
        if alt.abs() < c {
            c = alt;
        }
        let c = Rational::from_integer(c);
        let m_inv = Rational::new(1, m_big.clone()).expect("m > 0");
        y[v] = (x0 + &c) * &m_inv;
        y[v + half] = (x1 + &c) * &m_inv;
    }
    let y = RingElement { level: n, coeffs: y };
    debug_assert!(y.is_valid().unwrap_or(false));
    Ok(y)
}

/// The characteristic of `e_w`: infinite exactly at the primes outside `P_w`.
pub fn char_of_idempotent(w: &Word) -> Characteristic {
    Characteristic::from_tail(Tail::Residue { r: w.value(), k: w.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::nth_prime;
    use crate::typesys::{type_compare, TypeOrder};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn e(s: &str) -> RingElement {
        RingElement::basis_idempotent(&w(s))
    }

    fn el(level: u32, coeffs: &[&str]) -> RingElement {
        RingElement::from_dense(level, coeffs.iter().map(|c| q(c)).collect()).unwrap()
    }

    fn int(n: i64) -> RingElement {
        RingElement::from_integer(n)
    }

    #[test]
    fn constructor_examples() {
        let mut map = BTreeMap::new();
        map.insert(w("0"), q("1/3"));
        map.insert(w("1"), q("1/2"));
        assert!(element_new(1, &map).is_ok());

        map.insert(w("0"), q("1/2"));
        map.insert(w("1"), q("0"));
        assert_eq!(element_new(1, &map), Err(RingError::InvalidCoefficient("0".into())));

        let mut one = BTreeMap::new();
        one.insert(Word::EMPTY, q("1"));
        assert_eq!(element_new(0, &one).unwrap(), RingElement::one());

        let mut short = BTreeMap::new();
        short.insert(w("0"), q("1"));
        assert_eq!(element_new(1, &short), Err(RingError::MissingWord(1)));
    }

    #[test]
    fn basis_examples() {
        assert_eq!(e(""), RingElement::one());
        assert_eq!(e("0").dense(), &[q("1"), q("0")]);
        assert_eq!(e("10").level(), 2);
        assert_eq!(e("10").dense(), &[q("0"), q("0"), q("1"), q("0")]);
    }

    #[test]
    fn refine_examples() {
        assert_eq!(RingElement::one().refine(2).unwrap().dense(), &[q("1"), q("1"), q("1"), q("1")]);
        // dense order is 00, 01, 10, 11
        assert_eq!(el(1, &["2", "3"]).refine(2).unwrap().dense(), &[q("2"), q("3"), q("2"), q("3")]);
        assert_eq!(e("0").refine(2).unwrap().dense(), &[q("1"), q("0"), q("1"), q("0")]);
        assert_eq!(
            e("0").refine(0),
            Err(RingError::LevelTooSmall { from: 1, to: 0 })
        );
    }

    #[test]
    fn canonicalize_examples() {
        let ones = RingElement::one().refine(2).unwrap();
        assert_eq!(ones.canonicalize().level(), 0);
        let x = el(2, &["1/3", "0", "1/3", "0"]).canonicalize();
        assert_eq!(x.level(), 1);
        assert_eq!(x.dense(), &[q("1/3"), q("0")]);
        let y = el(2, &["1/3", "0", "0", "0"]).canonicalize();
        assert_eq!(y.level(), 2);
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&e("0") + &e("1"), RingElement::one());
        assert_eq!(&e("0") * &e("10"), e("10"));
        assert!((&e("0") * &e("1")).is_zero());
        let a = &(&int(2) * &e("0")) + &(&int(3) * &e("1"));
        let b = &(&int(3) * &e("0")) + &(&int(2) * &e("1"));
        let prod = &a * &b;
        assert_eq!(prod.level(), 0);
        assert_eq!(prod, int(6));
    }

    #[test]
    fn multiplication_table() {
        for n in 0..=3 {
            for m in n..=3 {
                for a in Word::all_of_len(n) {
                    for b in Word::all_of_len(m) {
                        let expected = if b.suffix(n).unwrap() == a {
                            RingElement::basis_idempotent(&b)
                        } else {
                            RingElement::zero()
                        };
                        assert_eq!(
                            RingElement::basis_idempotent(&a) * RingElement::basis_idempotent(&b),
                            expected
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn classification_examples() {
        let a = el(1, &["2", "3"]).classify_mult().unwrap();
        assert!(a.is_injective && !a.is_unit && !a.is_idempotent && !a.is_zero_divisor);
        let b = el(1, &["3", "2"]).classify_mult().unwrap();
        assert!(b.is_unit && b.is_injective);
        let c = e("0").classify_mult().unwrap();
        assert!(c.is_idempotent && c.is_zero_divisor && !c.is_injective);
        let z = RingElement::zero().classify_mult().unwrap();
        assert!(z.is_zero && !z.is_injective);
    }

    #[test]
    fn coker_examples() {
        assert_eq!(el(1, &["2", "3"]).coker_order(), Ok(ExtNat::from(6)));
        assert_eq!(el(1, &["3", "2"]).coker_order(), Ok(ExtNat::from(1)));
        assert_eq!(e("0").coker_order(), Ok(ExtNat::Infinity));
        assert_eq!(int(12).coker_order(), Ok(ExtNat::from(12)));
    }

    #[test]
    fn inverse_of_a_non_integer_unit() {
        let u = el(1, &["3", "2"]);
        let inv = u.inverse().unwrap();
        assert_eq!(inv.dense(), &[q("1/3"), q("1/2")]);
        assert_eq!(&u * &inv, RingElement::one());
        assert_eq!(el(1, &["2", "3"]).inverse(), Err(RingError::NotUnit));
    }

    #[test]
    fn solve_examples() {
        let a = el(1, &["2", "3"]);
        let t = RingElement::one();
        assert_eq!(a.solve(&t).unwrap(), None);
        let t = el(1, &["2", "3"]);
        assert_eq!(a.solve(&t).unwrap(), Some(RingElement::one()));
        let u = el(1, &["3", "2"]);
        let y = u.solve(&e("1")).unwrap().unwrap();
        assert_eq!(&u * &y, e("1"));
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_idempotent(&RingElement::one()), Ok((e("0"), e("1"))));
        assert_eq!(split_idempotent(&e("0")), Ok((e("00"), e("10"))));
        assert_eq!(split_idempotent(&(&e("0") + &e("1"))), Ok((e("0"), e("1"))));
        assert_eq!(split_idempotent(&int(2)), Err(RingError::NotIdempotent));
        assert_eq!(split_idempotent(&RingElement::zero()), Err(RingError::ZeroElement));
        let (a, b) = split_idempotent(&(&e("00") + &e("11"))).unwrap();
        assert_eq!((a, b), (e("00"), e("11")));
    }

    #[test]
    fn divide_examples() {
        let y = divide_mod(&e("0"), 2).unwrap();
        assert_eq!(y, el(1, &["1", "1/2"]));
        assert_eq!(&(&int(2) * &y) - &e("0"), int(1));

        let y = divide_mod(&e("1"), 3).unwrap();
        assert_eq!(y, el(1, &["-1/3", "0"]));
        assert_eq!(&(&int(3) * &y) - &e("1"), int(-1));

        let zero = RingElement::zero().refine(1).unwrap();
        assert!(divide_mod(&zero, 7).unwrap().is_zero());
        assert_eq!(divide_mod(&int(1), 2), Err(RingError::InvalidLevel));
    }

    #[test]
    fn divide_drops_level_for_small_inputs() {
        for m in 2..=12u64 {
            for level in 1..=3u32 {
                for word in Word::all_of_len(level) {
                    let x = RingElement::basis_idempotent(&word);
                    let y = divide_mod(&x, m).unwrap();
                    assert!(y.is_valid().unwrap());
                    let rem = &(&RingElement::from_integer(m) * &y) - &x;
                    assert!(rem.level() < level, "m={m} w={word}");
                }
            }
        }
    }

    #[test]
    fn idempotent_characteristics() {
        let z = char_of_idempotent(&Word::EMPTY);
        for i in 0..50 {
            assert_eq!(z.eval_index(i), ExtNat::zero());
        }
        let c0 = char_of_idempotent(&w("0"));
        for (i, expected_inf) in [(0, false), (1, true), (2, false), (3, true), (5, true)] {
            assert_eq!(c0.eval_index(i).is_infinite(), expected_inf, "index {i}");
        }
        assert_eq!(c0.eval(3).unwrap(), ExtNat::Infinity);
        assert_eq!(c0.eval(7).unwrap(), ExtNat::Infinity);
        assert_eq!(c0.eval(13).unwrap(), ExtNat::Infinity);
        assert_eq!(c0.eval(19).unwrap(), ExtNat::Infinity);
        let c00 = char_of_idempotent(&w("00"));
        for i in 0..64 {
            assert_eq!(c00.eval_index(i).is_infinite(), i % 4 != 0);
        }
        assert_eq!(
            type_compare(&z.clone().into(), &c0.clone().into()),
            TypeOrder::Less
        );
    }

    /// `e_w / p^k` is a valid element at every level `m` past `λ(w)`, for every
    /// `k ≤ 5`, exactly when `p ∉ P_w`.
    #[test]
    fn characteristic_matches_divisibility() {
        for len in 0..=2u32 {
            for word in Word::all_of_len(len) {
                let chi = char_of_idempotent(&word);
                for i in 0..24 {
                    let p = nth_prime(i);
                    let divisible = (1..=5).all(|k| {
                        (len..=len + 3).all(|m| {
                            let scaled = RingElement::basis_idempotent(&word)
                                .refine(m)
                                .unwrap()
                                .dense()
                                .iter()
                                .map(|c| c * &Rational::new(1, BigInt::from(p).pow(k)).unwrap())
                                .collect::<Vec<_>>();
                            RingElement::from_dense(m, scaled).is_ok()
                        })
                    });
                    assert_eq!(divisible, chi.eval(p).unwrap().is_infinite(), "w={word} p={p}");
                }
            }
        }
    }

    #[test]
    fn json_format() {
        let x = el(1, &["2", "3"]);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"level":1,"coeffs":{"0":"2","1":"3"}}"#);
        let back: RingElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);

        let sparse: RingElement = serde_json::from_str(r#"{"level":2,"coeffs":{"01":"5"}}"#).unwrap();
        assert_eq!(sparse, &int(5) * &e("01"));
        assert!(serde_json::from_str::<RingElement>(r#"{"level":1,"coeffs":{"0":"1/2"}}"#).is_err());
        assert!(serde_json::from_str::<RingElement>(r#"{"level":1,"coeffs":{"00":"1"}}"#).is_err());
        assert!(serde_json::from_str::<RingElement>(r#"{"level":17,"coeffs":{}}"#).is_err());
    }
}
