use std::sync::OnceLock;

use num_bigint::BigUint;
use num_prime::nt_funcs;
use num_traits::{One, ToPrimitive, Zero};

use super::ArithError;

const TABLE_LEN: usize = 1 << 17;

/// Primes above this bound are rejected by [`prime_index`].
pub const PRIME_INDEX_LIMIT: u64 = 1 << 32;

fn table() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| nt_funcs::nprimes(TABLE_LEN))
}

/// The `i`-th prime, counting from `nth_prime(0) = 2`.
pub fn nth_prime(i: usize) -> u64 {
    match table().get(i) {
        Some(&p) => p,
        None => nt_funcs::nth_prime(i as u64 + 1),
    }
}

/// Deterministic primality for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    nt_funcs::is_prime64(n)
}

/// Inverse of [`nth_prime`].
pub fn prime_index(p: u64) -> Result<usize, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    let primes = table();
    if p <= *primes.last().unwrap() {
        return Ok(primes.binary_search(&p).expect("prime missing from table"));
    }
    if p > PRIME_INDEX_LIMIT {
        return Err(ArithError::PrimeOutOfRange(p.to_string()));
    }
    Ok(nt_funcs::prime_pi(p) as usize - 1)
}

/// Prime factorization of a positive integer as `(prime, exponent)` pairs in
/// increasing order of the prime. `1` factors as the empty product.
pub fn factorize(n: &BigUint) -> Result<Vec<(u64, u32)>, ArithError> {
    assert!(!n.is_zero(), "factorize(0)");
    if n.is_one() {
        return Ok(Vec::new());
    }
    if let Some(small) = n.to_u64() {
        return Ok(nt_funcs::factorize64(small)
            .into_iter()
            .map(|(p, e)| (p, e as u32))
            .collect());
    }
    let mut out = Vec::new();
    for (p, e) in nt_funcs::factorize(n.clone()) {
        let p = p
            .to_u64()
            .ok_or_else(|| ArithError::PrimeOutOfRange(p.to_string()))?;
        out.push((p, e as u32));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain sieve of Eratosthenes, kept separate from the table above.
    fn sieve(limit: usize) -> Vec<u64> {
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for n in 2..=limit {
            if !composite[n] {
                primes.push(n as u64);
                let mut m = n * n;
                while m <= limit {
                    composite[m] = true;
                    m += n;
                }
            }
        }
        primes
    }

    #[test]
    fn enumeration_matches_sieve() {
        let reference = sieve(200_000);
        for (i, &p) in reference.iter().enumerate() {
            assert_eq!(nth_prime(i), p);
        }
        assert_eq!(nth_prime(0), 2);
        assert_eq!(nth_prime(4), 11);
        assert_eq!(nth_prime(9), 29);
    }

    #[test]
    fn index_examples() {
        assert_eq!(prime_index(2), Ok(0));
        assert_eq!(prime_index(11), Ok(4));
        assert_eq!(prime_index(29), Ok(9));
        assert_eq!(prime_index(1), Err(ArithError::NotPrime(1)));
        assert_eq!(prime_index(91), Err(ArithError::NotPrime(91)));
    }

    #[test]
    fn index_round_trip() {
        for i in 0..10_000 {
            assert_eq!(prime_index(nth_prime(i)), Ok(i));
        }
    }

    #[test]
    fn beyond_table() {
        let i = TABLE_LEN + 5;
        let p = nth_prime(i);
        assert!(is_prime(p));
        assert_eq!(prime_index(p), Ok(i));
    }

    #[test]
    fn factorizations() {
        assert_eq!(factorize(&BigUint::from(1u32)).unwrap(), vec![]);
        assert_eq!(
            factorize(&BigUint::from(360u32)).unwrap(),
            vec![(2, 3), (3, 2), (5, 1)]
        );
        let big = BigUint::from(u64::MAX) * BigUint::from(49u32);
        let f = factorize(&big).unwrap();
        let back: BigUint = f
            .iter()
            .map(|&(p, e)| BigUint::from(p).pow(e))
            .product();
        assert_eq!(back, big);
    }
}
