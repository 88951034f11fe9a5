//! Exact integers, rationals, primes and valuations.
//!
//! Everything above this module works with [`Rational`] values that are
//! always kept in lowest terms, and with primes addressed by their index in
//! the increasing enumeration `2, 3, 5, 7, ...`.

mod extnat;
mod primes;
mod rational;

pub use extnat::ExtNat;
pub use primes::{factorize, is_prime, nth_prime, prime_index, PRIME_INDEX_LIMIT};
pub use rational::Rational;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is too large to index")]
    PrimeOutOfRange(String),
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational {0:?}")]
    Malformed(String),
}

/// The exponent of `p` in `q`, i.e. the `v` with `q = p^v * a/b` and `p` dividing
/// neither `a` nor `b`.
pub fn valuation(q: &Rational, p: u64) -> Result<i64, ArithError> {
    if q.is_zero() {
        return Err(ArithError::ZeroArgument);
    }
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    let p = BigUint::from(p);
    let num = uint_valuation(q.numer().magnitude(), &p);
    let den = uint_valuation(q.denom().magnitude(), &p);
    Ok(num as i64 - den as i64)
}

/// Multiplicity of `p` in a nonzero natural number.
pub(crate) fn uint_valuation(n: &BigUint, p: &BigUint) -> u32 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&q("12"), 2), Ok(2));
        assert_eq!(valuation(&q("8/9"), 3), Ok(-2));
        assert_eq!(valuation(&q("7"), 5), Ok(0));
        assert_eq!(valuation(&q("-50"), 5), Ok(2));
    }

    #[test]
    fn valuation_errors() {
        assert_eq!(valuation(&Rational::zero(), 2), Err(ArithError::ZeroArgument));
        assert_eq!(valuation(&q("3"), 4), Err(ArithError::NotPrime(4)));
    }
}
