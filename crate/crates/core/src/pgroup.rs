//! Finite abelian p-groups `⊕ Z/p^{e_i}` at desk scale, brute-force embedding
//! oracles, and the descriptor-level decider for torsion groups.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::arith::{is_prime, ExtNat};
use crate::verdict::{co_finitely_hopfian, rules, Atom, Finding, Truth, Verdict};

/// Largest group order accepted by the element-enumerating operations.
pub const MAX_ENUMERATED_ORDER: u64 = 1 << 20;
/// Largest domain order accepted by the monomorphism search.
pub const MAX_SEARCH_DOMAIN: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PGroupError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponents must be at least 1")]
    ZeroExponent,
    #[error("groups over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),
    #[error("element does not belong to the group")]
    InvalidElement,
    #[error("not a finite p-group: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PGroupElement {
    pub coords: Vec<u64>,
}

/// `⊕_i Z/p^{e_i}` with exponents stored non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePGroup {
    p: u64,
    exponents: Vec<u32>,
    moduli: Vec<u64>,
}

impl FinitePGroup {
    pub fn new(p: u64, mut exponents: Vec<u32>) -> Result<Self, PGroupError> {
        if !is_prime(p) {
            return Err(PGroupError::NotPrime(p));
        }
        if exponents.contains(&0) {
            return Err(PGroupError::ZeroExponent);
        }
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        let moduli = exponents
            .iter()
            .map(|&e| p.checked_pow(e))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| PGroupError::SearchSpaceTooLarge(format!("{p}^{exponents:?}")))?;
        Ok(FinitePGroup { p, exponents, moduli })
    }

    pub fn trivial(p: u64) -> Result<Self, PGroupError> {
        Self::new(p, vec![])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// The group order, if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        self.moduli.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m))
    }

    fn enumerable_order(&self) -> Result<u64, PGroupError> {
        self.order()
            .filter(|&n| n <= MAX_ENUMERATED_ORDER)
            .ok_or_else(|| PGroupError::SearchSpaceTooLarge(format!("order of {self}")))
    }

    pub fn zero(&self) -> PGroupElement {
        PGroupElement { coords: vec![0; self.moduli.len()] }
    }

    pub fn contains(&self, g: &PGroupElement) -> bool {
        g.coords.len() == self.moduli.len() && g.coords.iter().zip(&self.moduli).all(|(c, m)| c < m)
    }

    pub fn add(&self, a: &PGroupElement, b: &PGroupElement) -> PGroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        PGroupElement { coords }
    }

    pub fn scale(&self, k: u64, g: &PGroupElement) -> PGroupElement {
        let coords = g
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &m)| ((c as u128 * (k % m) as u128) % m as u128) as u64)
            .collect();
        PGroupElement { coords }
    }

    pub fn generator(&self, i: usize) -> PGroupElement {
        let mut g = self.zero();
        g.coords[i] = 1 % self.moduli[i];
        g
    }

    /// All elements in lexicographic order of coordinates.
    pub fn elements(&self) -> Result<Vec<PGroupElement>, PGroupError> {
        self.enumerable_order()?;
        Ok(box_elements(&self.moduli.iter().map(|&m| (1, m)).collect::<Vec<_>>()))
    }

    /// `f(n)`: the number of summands of order `p^{n+1}`.
    pub fn ulm(&self) -> BTreeMap<u32, u32> {
        let mut f = BTreeMap::new();
        for &e in &self.exponents {
            *f.entry(e - 1).or_insert(0) += 1;
        }
        f
    }

    /// The largest `m` with `g ∈ p^m G`; infinite for `0`.
    pub fn height(&self, g: &PGroupElement) -> Result<ExtNat, PGroupError> {
        if !self.contains(g) {
            return Err(PGroupError::InvalidElement);
        }
        if *g == self.zero() {
            return Ok(ExtNat::Infinity);
        }
        // p^e G = 0 for the top exponent e, so this stops below e
        let mut m = 0u32;
        while self.in_multiple(g, m + 1) {
            m += 1;
        }
        Ok(ExtNat::from(m as u64))
    }

    /// `g ∈ p^j G`, by searching a preimage coordinate by coordinate.
    pub fn in_multiple(&self, g: &PGroupElement, j: u32) -> bool {
        g.coords.iter().zip(&self.moduli).all(|(&c, &m)| {
            let pj = pow_mod(self.p, j, m);
            (0..m).any(|y| (y as u128 * pj as u128 % m as u128) as u64 == c)
        })
    }

    /// The socle `G[p]`, in lexicographic order.
    pub fn socle(&self) -> Vec<PGroupElement> {
        let steps: Vec<(u64, u64)> = self.moduli.iter().map(|&m| (m / self.p, m)).collect();
        box_elements(&steps)
    }

    /// `|G[p] / (p^j G)[p]|`, by enumerating the socle.
    pub fn sj_order(&self, j: u32) -> Result<u64, PGroupError> {
        self.enumerable_order()?;
        let socle = self.socle();
        let deep = socle.iter().filter(|g| self.in_multiple(g, j)).count() as u64;
        Ok(socle.len() as u64 / deep)
    }

    fn socle_dim(&self) -> usize {
        self.exponents.len()
    }

    /// Coordinates of a socle element over `F_p`.
    fn socle_vector(&self, g: &PGroupElement) -> Vec<u64> {
        g.coords.iter().zip(&self.moduli).map(|(&c, &m)| c / (m / self.p)).collect()
    }
}

fn pow_mod(p: u64, j: u32, m: u64) -> u64 {
    let mut r = 1 % m;
    for _ in 0..j {
        r = (r as u128 * p as u128 % m as u128) as u64;
        if r == 0 {
            break;
        }
    }
    r
}

/// All vectors with `coords[i]` a multiple of `steps[i].0` below `steps[i].1`,
/// in lexicographic order.
fn box_elements(steps: &[(u64, u64)]) -> Vec<PGroupElement> {
    let mut out = vec![PGroupElement { coords: vec![0; steps.len()] }];
    for (i, &(step, bound)) in steps.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (bound / step) as usize);
        for g in &out {
            let mut c = 0;
            while c < bound {
                let mut h = g.clone();
                h.coords[i] = c;
                next.push(h);
                c += step;
            }
        }
        out = next;
    }
    out
}

impl fmt::Display for FinitePGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "0");
        }
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "C({},{e})", self.p)?;
        }
        Ok(())
    }
}

impl FromStr for FinitePGroup {
    type Err = PGroupError;

    /// `C(p,e1)+C(p,e2)+...`, with `^k` repetitions allowed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let expr = crate::dsl::parse_group_expr(s).map_err(|e| PGroupError::Parse(e.to_string()))?;
        let mut p = None;
        let mut exponents = Vec::new();
        for (atom, m) in expr.leaves() {
            let Atom::Cyclic { p: q, e } = atom else {
                return Err(PGroupError::Parse(format!("{atom} is not cyclic")));
            };
            if *p.get_or_insert(q) != q {
                return Err(PGroupError::PrimeMismatch(p.unwrap(), q));
            }
            let k = m
                .to_u64()
                .filter(|&k| k <= 64)
                .ok_or_else(|| PGroupError::Parse(format!("multiplicity {m} too large")))?;
            exponents.extend(std::iter::repeat(e).take(k as usize));
        }
        FinitePGroup::new(p.expect("a group expression has a term"), exponents)
    }
}

/// A homomorphism given by the images of the standard generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PGroupHom {
    pub images: Vec<PGroupElement>,
}

impl PGroupHom {
    /// Well-defined: each image is killed by the order of its generator.
    pub fn is_valid(&self, a: &FinitePGroup, b: &FinitePGroup) -> bool {
        self.images.len() == a.moduli.len()
            && self
                .images
                .iter()
                .zip(&a.moduli)
                .all(|(img, &m)| b.contains(img) && b.scale(m, img) == b.zero())
    }

    pub fn apply(&self, b: &FinitePGroup, x: &PGroupElement) -> PGroupElement {
        x.coords
            .iter()
            .zip(&self.images)
            .fold(b.zero(), |acc, (&c, img)| b.add(&acc, &b.scale(c, img)))
    }

    /// Trivial kernel, by enumerating the whole domain.
    pub fn is_injective(&self, a: &FinitePGroup, b: &FinitePGroup) -> Result<bool, PGroupError> {
        let zero = b.zero();
        Ok(a
            .elements()?
            .iter()
            .all(|x| x.coords.iter().all(|&c| c == 0) || self.apply(b, x) != zero))
    }
}

impl Serialize for PGroupHom {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.images
            .iter()
            .map(|g| g.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(serializer)
    }
}

fn same_prime(a: &FinitePGroup, b: &FinitePGroup) -> Result<(), PGroupError> {
    if a.p != b.p {
        return Err(PGroupError::PrimeMismatch(a.p, b.p));
    }
    Ok(())
}

/// For all `n`: `Σ_{k≥n} f_A(k) ≤ Σ_{k≥n} f_B(k)`.
pub fn embeds_criterion(a: &FinitePGroup, b: &FinitePGroup) -> Result<bool, PGroupError> {
    same_prime(a, b)?;
    let top = a.exponents.first().copied().unwrap_or(0);
    Ok((1..=top).all(|n| {
        let count = |g: &FinitePGroup| g.exponents.iter().filter(|&&e| e >= n).count();
        count(a) <= count(b)
    }))
}

/// Row-reduced span of socle vectors over `F_p`, kept as a sorted basis so
/// equal spans compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Span {
    p: u64,
    rows: Vec<Vec<u64>>,
}

impl Span {
    fn new(p: u64) -> Self {
        Span { p, rows: Vec::new() }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn inv(&self, a: u64) -> u64 {
        // p is prime, so a^(p-2) inverts a
        let (mut r, mut base, mut e) = (1u64, a % self.p, self.p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        r
    }

    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for row in &self.rows {
            let pivot = row.iter().position(|&x| x != 0).expect("rows are nonzero");
            let c = v[pivot];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + self.p * self.p - c * r % self.p) % self.p;
                }
            }
        }
        v
    }

    /// The span with `v` added, or `None` if `v` already lies in it.
    fn extend(&self, v: &[u64]) -> Option<Span> {
        let mut v = self.reduce(v);
        let pivot = v.iter().position(|&x| x != 0)?;
        let s = self.inv(v[pivot]);
        for x in v.iter_mut() {
            *x = *x * s % self.p;
        }
        let mut rows: Vec<Vec<u64>> = self
            .rows
            .iter()
            .map(|row| {
                let c = row[pivot];
                row.iter()
                    .zip(&v)
                    .map(|(&r, &x)| (r + self.p * self.p - c * x % self.p) % self.p)
                    .collect()
            })
            .collect();
        rows.push(v);
        rows.sort_by_key(|r| r.iter().position(|&x| x != 0));
        Some(Span { p: self.p, rows })
    }
}

struct Search<'a> {
    a: &'a FinitePGroup,
    b: &'a FinitePGroup,
    candidates: BTreeMap<u32, Vec<PGroupElement>>,
    dead: HashSet<(usize, Span)>,
}

impl Search<'_> {
    fn run(&mut self, i: usize, span: &Span, chosen: &mut Vec<PGroupElement>) -> bool {
        if i == self.a.exponents.len() {
            return true;
        }
        if self.a.exponents.len() - i > self.b.socle_dim() - span.dim()
            || self.dead.contains(&(i, span.clone()))
        {
            return false;
        }
        let e = self.a.exponents[i];
        let shift = self.a.moduli[i] / self.a.p;
        for idx in 0..self.candidates[&e].len() {
            let img = self.candidates[&e][idx].clone();
            // φ is injective iff it is injective on the socle, which the
            // images p^{e_i - 1} b_i span
            let top = self.b.scale(shift, &img);
            let Some(next) = span.extend(&self.b.socle_vector(&top)) else {
                continue;
            };
            chosen.push(img);
            if self.run(i + 1, &next, chosen) {
                return true;
            }
            chosen.pop();
        }
        self.dead.insert((i, span.clone()));
        false
    }
}

/// The lexicographically first injective homomorphism `A → B`, if any.
pub fn find_monomorphism(a: &FinitePGroup, b: &FinitePGroup) -> Result<Option<PGroupHom>, PGroupError> {
    same_prime(a, b)?;
    if a.order().map_or(true, |n| n > MAX_SEARCH_DOMAIN) {
        return Err(PGroupError::SearchSpaceTooLarge(format!("domain {a}")));
    }
    let mut candidates = BTreeMap::new();
    for &e in &a.exponents {
        if candidates.contains_key(&e) {
            continue;
        }
        // b with p^e b = 0: coordinate j must be a multiple of p^{f_j - e}
        let steps: Vec<(u64, u64)> = b
            .exponents
            .iter()
            .zip(&b.moduli)
            .map(|(&f, &m)| (b.p.pow(f.saturating_sub(e)), m))
            .collect();
        let size = steps.iter().try_fold(1u64, |acc, &(s, m)| acc.checked_mul(m / s));
        if size.map_or(true, |n| n > MAX_ENUMERATED_ORDER) {
            return Err(PGroupError::SearchSpaceTooLarge(format!("images in {b}")));
        }
        candidates.insert(e, box_elements(&steps));
    }
    let mut search = Search { a, b, candidates, dead: HashSet::new() };
    let mut chosen = Vec::new();
    if !search.run(0, &Span::new(a.p), &mut chosen) {
        return Ok(None);
    }
    let hom = PGroupHom { images: chosen };
    debug_assert!(hom.is_valid(a, b) && hom.is_injective(a, b) == Ok(true));
    Ok(Some(hom))
}

/// A witness that `G` embeds in a proper summand of itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandEmbedding {
    pub summand: FinitePGroup,
    pub map: PGroupHom,
}

/// Searches every proper summand (proper sub-multiset of the exponents) for a
/// monomorphism from `G`. Returns `(true, None)` when none exists.
pub fn bassian_finite_bruteforce(
    g: &FinitePGroup,
) -> Result<(bool, Option<SummandEmbedding>), PGroupError> {
    let k = g.exponents.len();
    let mut seen = HashSet::new();
    for mask in 0u64..(1u64 << k) {
        if mask.count_ones() as usize == k {
            continue;
        }
        let exps: Vec<u32> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| g.exponents[i]).collect();
        if !seen.insert(exps.clone()) {
            continue;
        }
        let summand = FinitePGroup::new(g.p, exps)?;
        if let Some(map) = find_monomorphism(g, &summand)? {
            return Ok((false, Some(SummandEmbedding { summand, map })));
        }
    }
    Ok((true, None))
}

/// The data of one primary component `T_p`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PrimeComponent {
    /// `n ↦` multiplicity of `Z/p^{n+1}`, outside the tail.
    pub ulm: BTreeMap<u32, ExtNat>,
    /// Whether `⊕_n Z/p^{n+1}` (with `tail_multiplicity` copies) is a summand.
    pub unbounded_tail: bool,
    pub tail_multiplicity: ExtNat,
    pub prufer_rank: ExtNat,
}

impl PrimeComponent {
    pub fn is_zero(&self) -> bool {
        self.ulm.values().all(ExtNat::is_zero) && !self.unbounded_tail && self.prufer_rank.is_zero()
    }

    /// Why `T_p` fails to be co-Hopfian, if it does.
    fn co_hopfian_obstruction(&self) -> Option<serde_json::Value> {
        if let Some((n, _)) = self.ulm.iter().find(|(_, m)| m.is_infinite()) {
            return Some(json!({ "reason": "infinite Ulm multiplicity", "n": n.to_string() }));
        }
        if self.unbounded_tail {
            return Some(json!({ "reason": "unbounded Ulm support" }));
        }
        if self.prufer_rank.is_infinite() {
            return Some(json!({ "reason": "divisible part of infinite rank" }));
        }
        None
    }

    fn infinite_multiplicity(&self) -> Option<serde_json::Value> {
        if let Some((n, _)) = self.ulm.iter().find(|(_, m)| m.is_infinite()) {
            return Some(json!({ "summand": format!("Z/p^{}", n + 1), "multiplicity": "inf" }));
        }
        if self.unbounded_tail && self.tail_multiplicity.is_infinite() {
            return Some(json!({ "summand": "unbounded tail", "multiplicity": "inf" }));
        }
        if self.prufer_rank.is_infinite() {
            return Some(json!({ "summand": "Prufer", "multiplicity": "inf" }));
        }
        None
    }

    fn summand_count(&self) -> ExtNat {
        let tail = if self.unbounded_tail { ExtNat::Infinity } else { ExtNat::zero() };
        self.ulm.values().fold(&self.prufer_rank + &tail, |acc, m| acc + m.clone())
    }
}

/// A torsion group described prime by prime.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TorsionDescriptor {
    pub primes: BTreeMap<u64, PrimeComponent>,
}

impl TorsionDescriptor {
    pub fn is_zero(&self) -> bool {
        self.primes.values().all(PrimeComponent::is_zero)
    }

    pub fn from_group(g: &FinitePGroup) -> Self {
        let mut comp = PrimeComponent::default();
        for (n, m) in g.ulm() {
            comp.ulm.insert(n, ExtNat::from(m as u64));
        }
        TorsionDescriptor { primes: BTreeMap::from([(g.p, comp)]) }
    }
}

pub fn torsion_verdict(t: &TorsionDescriptor) -> Verdict {
    let obstruction = t
        .primes
        .iter()
        .find_map(|(p, c)| c.co_hopfian_obstruction().map(|w| (p, w)));
    let co_hopfian = match &obstruction {
        None => Finding::new(Truth::True, rules::TORSION_CO_HOPFIAN),
        Some((p, w)) => Finding::new(Truth::False, rules::TORSION_CO_HOPFIAN)
            .with_witness(json!({ "prime": p.to_string(), "obstruction": w })),
    };

    let repeated = t
        .primes
        .iter()
        .find_map(|(p, c)| c.infinite_multiplicity().map(|w| (p, w)));
    let dedekind = match (&repeated, co_hopfian.value) {
        (Some((p, w)), _) => Finding::new(Truth::False, rules::TORSION_DEDEKIND)
            .with_witness(json!({ "prime": p.to_string(), "repeated": w })),
        (None, Truth::True) => Finding::new(Truth::True, rules::TORSION_CO_HOPFIAN),
        (None, _) => Finding::new(Truth::Undecided, rules::TORSION_DEDEKIND_OPEN),
    };

    let zero = t.is_zero();
    let fir = if zero {
        Finding::new(Truth::True, rules::TORSION_FIR)
    } else {
        Finding::new(Truth::False, rules::TORSION_FIR)
            .with_witness(json!({ "reason": "nonzero torsion summand" }))
    };

    let count = t
        .primes
        .values()
        .fold(ExtNat::zero(), |acc, c| acc + c.summand_count());
    let co_bassian = if count <= ExtNat::one() {
        Finding::new(Truth::True, rules::CO_BASSIAN)
    } else {
        Finding::new(Truth::False, rules::CO_BASSIAN)
            .with_witness(json!({ "summands": count.to_string() }))
    };

    Verdict {
        bassian_finite: co_hopfian.clone(),
        relatively_co_hopfian: co_hopfian.clone(),
        co_hopfian,
        dedekind_finite: dedekind,
        co_bassian_finite: co_bassian,
        co_finitely_hopfian: co_finitely_hopfian(&fir, zero),
        finite_injective_rank: fir,
    }
}
