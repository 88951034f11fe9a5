//! Seeded samplers for rationals, ring elements and group expressions.

use std::collections::BTreeMap;

use bassfin::arith::{ExtNat, Rational};
use bassfin::arring::RingElement;
use bassfin::locnum::{LocalizedContext, Word};
use bassfin::typesys::{Characteristic, Tail};
use bassfin::verdict::{Atom, GroupExpr, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_ba55;

/// The first eight primes, the pool for sampled numerators and denominators.
pub const SMALL_PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn exponent(rng: &mut impl Rng) -> u32 {
    match rng.gen_range(0..4) {
        0 | 1 => 0,
        2 => 1,
        _ => 2,
    }
}

/// `±Π p^a / Π p^b` over `primes`, exponents in `0..=2`.
pub fn rational_over(rng: &mut impl Rng, numer_primes: &[u64], denom_primes: &[u64]) -> Rational {
    let mut num: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut den: i64 = 1;
    for &p in numer_primes {
        num *= (p as i64).pow(exponent(rng));
    }
    for &p in denom_primes {
        den *= (p as i64).pow(exponent(rng));
    }
    Rational::new(num, den).expect("positive denominator")
}

/// A rational over the first eight primes; zero one time in twenty.
pub fn rational(rng: &mut impl Rng) -> Rational {
    if rng.gen_ratio(1, 20) {
        return Rational::zero();
    }
    rational_over(rng, &SMALL_PRIMES, &SMALL_PRIMES)
}

/// A nonzero element of `Q_w` over the first eight primes.
pub fn local_rational(rng: &mut impl Rng, w: &Word) -> Rational {
    let ctx = LocalizedContext::new(*w);
    let allowed: Vec<u64> = SMALL_PRIMES
        .iter()
        .copied()
        .filter(|&p| !ctx.prime_in_set(p).expect("small primes are indexed"))
        .collect();
    rational_over(rng, &SMALL_PRIMES, &allowed)
}

/// An element of `R` at the given level; each coefficient vanishes with
/// probability `zero_rate`.
pub fn ring_element(rng: &mut impl Rng, level: u32, zero_rate: f64) -> RingElement {
    let coeffs: BTreeMap<Word, Rational> = Word::all_of_len(level)
        .map(|w| {
            let c = if rng.gen_bool(zero_rate) {
                Rational::zero()
            } else {
                local_rational(rng, &w)
            };
            (w, c)
        })
        .collect();
    RingElement::new(level, &coeffs).expect("coefficients sampled inside Q_w")
}

/// An element whose canonical level is exactly `level`.
pub fn ring_element_exact(rng: &mut impl Rng, level: u32) -> RingElement {
    loop {
        let x = ring_element(rng, level, 0.1);
        if x.canonicalize().level() == level {
            return x;
        }
    }
}

const SMALL_TORSION_PRIMES: [u64; 4] = [2, 3, 5, 7];

fn tail(rng: &mut impl Rng) -> Tail {
    match rng.gen_range(0..4) {
        0 => Tail::Const(rng.gen_bool(0.5)),
        1 => {
            let k = rng.gen_range(0..=4);
            Tail::Residue { r: rng.gen_range(0..1u64 << k), k }
        }
        _ => Tail::Threshold(rng.gen_range(0..20)),
    }
}

pub fn characteristic(rng: &mut impl Rng) -> Characteristic {
    let mut exceptions = BTreeMap::new();
    for _ in 0..rng.gen_range(0..3) {
        let p = *SMALL_PRIMES.choose(rng).expect("nonempty");
        let v = if rng.gen_ratio(1, 4) {
            ExtNat::Infinity
        } else {
            ExtNat::from(rng.gen_range(0..4u64))
        };
        exceptions.insert(p, v);
    }
    Characteristic::new(tail(rng), exceptions).expect("small primes and tails are valid")
}

fn word(rng: &mut impl Rng) -> Word {
    let len = rng.gen_range(0..=4);
    Word::new(rng.gen_range(0..1u64 << len), len).expect("short word")
}

fn multiplicity(rng: &mut impl Rng) -> ExtNat {
    match rng.gen_range(0..10) {
        0..=5 => ExtNat::one(),
        6..=8 => ExtNat::from(rng.gen_range(2..=4u64)),
        _ => ExtNat::Infinity,
    }
}

fn atom(rng: &mut impl Rng, depth: u32) -> Atom {
    let p = *SMALL_TORSION_PRIMES.choose(rng).expect("nonempty");
    match rng.gen_range(0..if depth > 0 { 11 } else { 10 }) {
        0 | 1 => Atom::Cyclic { p, e: rng.gen_range(1..=4) },
        2 => Atom::Prufer(p),
        3 => Atom::Z,
        4 => Atom::Q,
        5 | 6 => Atom::Rank1(characteristic(rng)),
        7 => Atom::AscChain(word(rng)),
        8 => match rng.gen_range(0..3) {
            0 => Atom::DescChain(rng.gen_range(0..50)),
            1 => Atom::UlmTail(p),
            _ => Atom::ARRing,
        },
        9 => Atom::Cyclic { p, e: 1 },
        _ => Atom::Group(expr_at(rng, depth - 1)),
    }
}

fn expr_at(rng: &mut impl Rng, depth: u32) -> GroupExpr {
    let n = rng.gen_range(1..=4);
    GroupExpr {
        terms: (0..n)
            .map(|_| Term { atom: atom(rng, depth), multiplicity: multiplicity(rng) })
            .collect(),
    }
}

/// A random group expression with parentheses nested at most twice.
pub fn group_expr(rng: &mut impl Rng) -> GroupExpr {
    expr_at(rng, 2)
}

/// A finite-rank completely decomposable expression.
pub fn finite_rank_cd_expr(rng: &mut impl Rng) -> GroupExpr {
    let n = rng.gen_range(1..=5);
    let terms = (0..n)
        .map(|_| {
            let atom = match rng.gen_range(0..4) {
                0 => Atom::Z,
                1 => Atom::Q,
                _ => Atom::Rank1(characteristic(rng)),
            };
            Term { atom, multiplicity: ExtNat::from(rng.gen_range(1..=4u64)) }
        })
        .collect();
    GroupExpr { terms }
}

/// The same sum with its terms shuffled and some runs regrouped in parentheses.
pub fn rearrange(rng: &mut impl Rng, e: &GroupExpr) -> GroupExpr {
    let mut terms = e.terms.clone();
    terms.shuffle(rng);
    if terms.len() >= 2 && rng.gen_bool(0.5) {
        let a = rng.gen_range(0..terms.len() - 1);
        let b = rng.gen_range(a + 1..=terms.len());
        let inner: Vec<Term> = terms.drain(a..b).collect();
        let group = Term { atom: Atom::Group(GroupExpr { terms: inner }), multiplicity: ExtNat::one() };
        terms.insert(a, group);
    }
    GroupExpr { terms }
}

/// All exponent multisets (non-increasing) with sum at most `total`.
pub fn partitions_up_to(total: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        for e in (1..=max.min(rest)).rev() {
            prefix.push(e);
            go(rest - e, e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}
