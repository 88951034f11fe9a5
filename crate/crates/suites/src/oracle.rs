//! Slow, independent re-derivations used to cross-check the library.
//!
//! Nothing here calls the library routine it checks: primes come from a plain
//! sieve, residue classes from binary strings, and local data from trial
//! division.

use std::sync::OnceLock;

/// Primes below 2^20 by the sieve of Eratosthenes.
pub fn sieve() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        const N: usize = 1 << 20;
        let mut composite = vec![false; N];
        let mut out = Vec::new();
        for i in 2..N {
            if !composite[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j < N {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

pub fn index_of(p: u64) -> usize {
    sieve().binary_search(&p).expect("prime inside the sieve")
}

/// `n ∈ L_w`: the binary expansion of `n`, padded, ends with `w`.
pub fn in_l(word: &str, n: u64) -> bool {
    let bits = format!("{n:0width$b}", width = word.len());
    bits.ends_with(word)
}

/// Trial-division factorization of a positive integer.
pub fn factor(mut n: u128) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d as u64, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

pub fn prime_in_p(word: &str, p: u64) -> bool {
    in_l(word, index_of(p) as u64)
}

/// `num/den ∈ Q_w` for a fraction in lowest terms.
pub fn in_qw(den: u128, word: &str) -> bool {
    factor(den).iter().all(|&(p, _)| !prime_in_p(word, p))
}

/// `|Q_w / (num/den) Q_w|` for a nonzero fraction in `Q_w`.
pub fn local_coker(num: i128, word: &str) -> u128 {
    factor(num.unsigned_abs())
        .iter()
        .filter(|&&(p, _)| prime_in_p(word, p))
        .map(|&(p, e)| (p as u128).pow(e))
        .product()
}

/// Whether `v` ends with `w` as bit strings (so `e_w · e_v = e_v`).
pub fn is_suffix(w: &str, v: &str) -> bool {
    v.ends_with(w)
}

/// `Σ_{k<j} f(k)`: the number of exponents at most `j`.
pub fn sj_exponent(exponents: &[u32], j: u32) -> u32 {
    exponents.iter().filter(|&&e| e <= j).count() as u32
}

/// `Σ_{k≥n} f(k)` compared pointwise, from the exponent lists directly.
pub fn ulm_tails_dominated(a: &[u32], b: &[u32]) -> bool {
    let top = a.iter().chain(b).copied().max().unwrap_or(0);
    (1..=top).all(|n| a.iter().filter(|&&e| e >= n).count() <= b.iter().filter(|&&e| e >= n).count())
}
