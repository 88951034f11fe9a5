//! Characteristics, types, and the deciders for completely decomposable
//! torsion-free groups.
//!
//! A characteristic assigns each prime a height in `ℕ ∪ {∞}`. We only handle
//! characteristics with a finitely described tail taking values in `{0, ∞}`,
//! overridden at finitely many primes. Tails are addressed by prime *index*:
//!
//! * `res(r,k)`: `∞` iff `index mod 2^k ≠ r` (the characteristic of `e_w`),
//! * `thr(N)`: `∞` iff `index ≥ N`,
//! * `const0` / `constInf`.
//!
//! Types are characteristics up to finitely many finite differences; `∞`
//! entries never change under this equivalence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use serde_json::json;
use thiserror::Error;

use crate::arith::{nth_prime, prime_index, ArithError, ExtNat};
use crate::arring::char_of_idempotent;
use crate::locnum::{Word, MAX_WORD_LEN};
use crate::verdict::{rules, Finding, Truth, Verdict};

/// Largest threshold accepted in `thr(N)` tails and descending families.
pub const MAX_THRESHOLD: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("residue {r} does not fit modulus 2^{k}")]
    BadResidue { r: u64, k: u32 },
    #[error("threshold {0} exceeds {MAX_THRESHOLD}")]
    ThresholdTooLarge(u64),
    #[error("exception key: {0}")]
    BadException(ArithError),
    #[error("{0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tail {
    Const(bool),
    Residue { r: u64, k: u32 },
    Threshold(u64),
}

impl Tail {
    pub const ZERO: Tail = Tail::Const(false);
    pub const INFINITY: Tail = Tail::Const(true);

    fn validate(&self) -> Result<(), TypeError> {
        match *self {
            Tail::Residue { r, k } if k > MAX_WORD_LEN || r >> k != 0 => {
                Err(TypeError::BadResidue { r, k })
            }
            Tail::Threshold(n) if n > MAX_THRESHOLD => Err(TypeError::ThresholdTooLarge(n)),
            _ => Ok(()),
        }
    }

    /// Whether the tail is infinite at prime index `i`.
    pub fn is_infinite_at(&self, i: u64) -> bool {
        match *self {
            Tail::Const(inf) => inf,
            Tail::Residue { r, k } => i & ((1u64 << k) - 1) != r,
            Tail::Threshold(n) => i >= n,
        }
    }

    fn infinite_set(&self) -> (Pattern, u64) {
        match *self {
            Tail::Const(false) => (Pattern::Empty, 0),
            Tail::Const(true) => (Pattern::All, 0),
            Tail::Residue { r, k } => (Pattern::CoClass { r, k }, 0),
            Tail::Threshold(n) => (Pattern::All, n),
        }
    }

    fn zero_set(&self) -> (Pattern, u64) {
        match *self {
            Tail::Const(false) => (Pattern::All, 0),
            Tail::Const(true) => (Pattern::Empty, 0),
            Tail::Residue { r, k } => (Pattern::Class { r, k }, 0),
            Tail::Threshold(n) => (Pattern::Empty, n),
        }
    }
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::Const(false) => f.write_str("const0"),
            Tail::Const(true) => f.write_str("constInf"),
            Tail::Residue { r, k } => write!(f, "res({r},{k})"),
            Tail::Threshold(n) => write!(f, "thr({n})"),
        }
    }
}

/// A periodic set of prime indices, described by residues mod a power of 2.
#[derive(Debug, Clone, Copy)]
enum Pattern {
    All,
    Empty,
    Class { r: u64, k: u32 },
    CoClass { r: u64, k: u32 },
}

fn mask(k: u32) -> u64 {
    (1u64 << k) - 1
}

impl Pattern {
    fn is_nonempty(self) -> bool {
        match self {
            Pattern::All | Pattern::Class { .. } => true,
            Pattern::Empty => false,
            Pattern::CoClass { k, .. } => k > 0,
        }
    }

    /// Whether the two periodic sets intersect (and hence do so infinitely often).
    fn meets(self, other: Pattern) -> bool {
        use Pattern::*;
        match (self, other) {
            (Empty, _) | (_, Empty) => false,
            (All, x) | (x, All) => x.is_nonempty(),
            (Class { r, k }, Class { r: s, k: l }) => (r ^ s) & mask(k.min(l)) == 0,
            (Class { r, k }, CoClass { r: s, k: l }) | (CoClass { r: s, k: l }, Class { r, k }) => {
                // the class r mod 2^k is not inside the class s mod 2^l
                !(l <= k && r & mask(l) == s)
            }
            (CoClass { r, k }, CoClass { r: s, k: l }) => {
                // two classes cover everything only if one is trivial or they are
                // the two halves mod 2
                !(k == 0 || l == 0 || (k == 1 && l == 1 && r != s))
            }
        }
    }
}

/// A height sequence: finitely many exceptional primes over a `{0, ∞}` tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Characteristic {
    exceptions: BTreeMap<u64, ExtNat>,
    tail: Tail,
}

impl Characteristic {
    pub fn new(tail: Tail, exceptions: BTreeMap<u64, ExtNat>) -> Result<Self, TypeError> {
        tail.validate()?;
        for &p in exceptions.keys() {
            prime_index(p).map_err(TypeError::BadException)?;
        }
        Ok(Characteristic { exceptions, tail })
    }

    /// Panics on an out-of-range tail; use [`Characteristic::new`] for input data.
    pub fn from_tail(tail: Tail) -> Self {
        tail.validate().expect("invalid tail");
        Characteristic { exceptions: BTreeMap::new(), tail }
    }

    pub fn zero() -> Self {
        Self::from_tail(Tail::ZERO)
    }

    pub fn infinity() -> Self {
        Self::from_tail(Tail::INFINITY)
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, ExtNat> {
        &self.exceptions
    }

    /// Value at the prime `p`.
    pub fn eval(&self, p: u64) -> Result<ExtNat, ArithError> {
        if let Some(v) = self.exceptions.get(&p) {
            return Ok(v.clone());
        }
        let i = prime_index(p)?;
        Ok(self.tail_value(i as u64))
    }

    /// Value at the prime with index `i`.
    pub fn eval_index(&self, i: usize) -> ExtNat {
        match self.exceptions.get(&nth_prime(i)) {
            Some(v) => v.clone(),
            None => self.tail_value(i as u64),
        }
    }

    fn tail_value(&self, i: u64) -> ExtNat {
        if self.tail.is_infinite_at(i) {
            ExtNat::Infinity
        } else {
            ExtNat::zero()
        }
    }

    fn exception_indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.exceptions
            .keys()
            .map(|&p| prime_index(p).expect("validated at construction") as u64)
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tail)?;
        if !self.exceptions.is_empty() {
            f.write_str(";exc(")?;
            for (i, (p, v)) in self.exceptions.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}={v}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl FromStr for Characteristic {
    type Err = crate::dsl::DslError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::dsl::parse_characteristic(s)
    }
}

impl Serialize for Characteristic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The type of a rank-1 group, represented by one of its characteristics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeDescriptor {
    pub representative: Characteristic,
}

impl From<Characteristic> for TypeDescriptor {
    fn from(representative: Characteristic) -> Self {
        TypeDescriptor { representative }
    }
}

impl fmt::Display for TypeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.representative.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypeOrder {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl TypeOrder {
    pub fn as_str(&self) -> &'static str {
        match self {
            TypeOrder::Less => "LT",
            TypeOrder::Equal => "EQ",
            TypeOrder::Greater => "GT",
            TypeOrder::Incomparable => "INCOMPARABLE",
        }
    }
}

impl fmt::Display for TypeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for TypeOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// `τ(a) ≤ τ(b)`: no prime where `a` is infinite and `b` finite. Finite-vs-finite
/// differences only occur at the finitely many exceptions, so they never matter.
pub fn type_le(a: &Characteristic, b: &Characteristic) -> bool {
    let exceptional: BTreeSet<u64> = a.exception_indices().chain(b.exception_indices()).collect();
    for &i in &exceptional {
        let i = i as usize;
        if a.eval_index(i).is_infinite() && b.eval_index(i).is_finite() {
            return false;
        }
    }
    let (inf_a, from_a) = a.tail.infinite_set();
    let (zero_b, from_b) = b.tail.zero_set();
    if inf_a.meets(zero_b) {
        return false;
    }
    // below both thresholds the tails are checked one index at a time
    (0..from_a.max(from_b)).all(|i| {
        exceptional.contains(&i) || !(a.tail.is_infinite_at(i) && !b.tail.is_infinite_at(i))
    })
}

pub fn type_compare(a: &TypeDescriptor, b: &TypeDescriptor) -> TypeOrder {
    match (
        type_le(&a.representative, &b.representative),
        type_le(&b.representative, &a.representative),
    ) {
        (true, true) => TypeOrder::Equal,
        (true, false) => TypeOrder::Less,
        (false, true) => TypeOrder::Greater,
        (false, false) => TypeOrder::Incomparable,
    }
}

/// Pointwise `a(p) ≤ b(p)` on the first `window` primes.
pub fn pointwise_le(a: &Characteristic, b: &Characteristic, window: usize) -> bool {
    (0..window).all(|i| a.eval_index(i) <= b.eval_index(i))
}

/// A countable family of rank-1 summands with monotone types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainFamily {
    /// Types of `e_{0^i base}` for `i < ω`, strictly ascending.
    AscendingNest(Word),
    /// `thr(start + i)` for `i < ω`, strictly descending.
    DescendingThreshold(u64),
}

impl ChainFamily {
    pub fn member(&self, i: u32) -> Characteristic {
        match *self {
            ChainFamily::AscendingNest(base) => {
                let mut w = base;
                for _ in 0..i {
                    w = w.prepend(false);
                }
                char_of_idempotent(&w)
            }
            ChainFamily::DescendingThreshold(start) => {
                Characteristic::from_tail(Tail::Threshold(start + i as u64))
            }
        }
    }
}

impl fmt::Display for ChainFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainFamily::AscendingNest(w) => write!(f, "AscChain(\"{w}\")"),
            ChainFamily::DescendingThreshold(n) => write!(f, "DescChain({n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdEntry {
    pub ty: TypeDescriptor,
    pub multiplicity: ExtNat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyTerm {
    pub family: ChainFamily,
    pub multiplicity: ExtNat,
}

/// A completely decomposable group: finitely many rank-1 types with
/// multiplicities, plus finitely many countable chain families.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CdDescriptor {
    pub entries: Vec<CdEntry>,
    pub families: Vec<FamilyTerm>,
}

/// How many members of an ascending family a certificate spells out.
const SHIFT_PREFIX: u32 = 6;

impl CdDescriptor {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty() && self.families.is_empty()
    }

    pub fn rank(&self) -> ExtNat {
        if !self.families.is_empty() {
            return ExtNat::Infinity;
        }
        self.entries
            .iter()
            .fold(ExtNat::zero(), |acc, e| acc + e.multiplicity.clone())
    }

    /// Why the ascending type condition fails, if it does.
    pub fn atc_violation(&self) -> Option<serde_json::Value> {
        if let Some(e) = self.entries.iter().find(|e| e.multiplicity.is_infinite()) {
            return Some(json!({
                "reason": "type with infinite multiplicity",
                "type": e.ty.to_string(),
                "multiplicity": "inf",
            }));
        }
        if let Some(f) = self
            .families
            .iter()
            .find(|f| matches!(f.family, ChainFamily::AscendingNest(_)))
        {
            let shift: Vec<_> = (0..SHIFT_PREFIX)
                .map(|i| {
                    let from = TypeDescriptor::from(f.family.member(i));
                    let to = TypeDescriptor::from(f.family.member(i + 1));
                    json!({ "from": i.to_string(), "to": (i + 1).to_string(), "order": type_compare(&from, &to) })
                })
                .collect();
            return Some(json!({
                "reason": "ascending chain of types",
                "family": f.family.to_string(),
                "shift": shift,
            }));
        }
        if let Some(f) = self.families.iter().find(|f| f.multiplicity.is_infinite()) {
            return Some(json!({
                "reason": "family repeated infinitely often",
                "family": f.family.to_string(),
                "multiplicity": "inf",
            }));
        }
        None
    }

    fn infinite_multiplicity(&self) -> Option<serde_json::Value> {
        if let Some(e) = self.entries.iter().find(|e| e.multiplicity.is_infinite()) {
            return Some(json!({ "type": e.ty.to_string(), "multiplicity": "inf" }));
        }
        self.families
            .iter()
            .find(|f| f.multiplicity.is_infinite())
            .map(|f| json!({ "family": f.family.to_string(), "multiplicity": "inf" }))
    }

    /// First summand that is not of the type of `Q`, if any.
    fn reduced_summand(&self) -> Option<String> {
        let q = TypeDescriptor::from(Characteristic::infinity());
        if let Some(f) = self.families.first() {
            return Some(f.family.to_string());
        }
        self.entries
            .iter()
            .find(|e| type_compare(&e.ty, &q) != TypeOrder::Equal)
            .map(|e| e.ty.to_string())
    }
}

/// The ascending type condition: no infinite `≤`-ascending sequence of types
/// over distinct summands.
pub fn atc_holds(g: &CdDescriptor) -> bool {
    g.atc_violation().is_none()
}

pub fn cd_verdict(g: &CdDescriptor) -> Verdict {
    let rank = g.rank();
    let finite_rank = rank.is_finite();

    let (bassian, relative) = if finite_rank {
        let f = Finding::new(Truth::True, rules::FINITE_RANK_TF);
        (f.clone(), f)
    } else {
        match g.atc_violation() {
            None => {
                let f = Finding::new(Truth::True, rules::ATC);
                (f.clone(), f)
            }
            Some(w) => {
                let f = Finding::new(Truth::False, rules::ATC).with_witness(w);
                (f.clone(), f)
            }
        }
    };

    let dedekind = match g.infinite_multiplicity() {
        None => Finding::new(Truth::True, rules::CD_MULTIPLICITY),
        Some(w) => Finding::new(Truth::False, rules::CD_MULTIPLICITY).with_witness(w),
    };

    let reduced = g.reduced_summand();
    let divisible_finite = finite_rank && reduced.is_none();
    let co_hopfian = if divisible_finite {
        Finding::new(Truth::True, rules::TF_CO_HOPFIAN)
    } else if let Some(s) = &reduced {
        Finding::new(Truth::False, rules::TF_CO_HOPFIAN).with_witness(json!({ "summand": s }))
    } else {
        Finding::new(Truth::False, rules::TF_CO_HOPFIAN)
            .with_witness(json!({ "rank": rank.to_string() }))
    };

    let co_bassian = if rank <= ExtNat::one() {
        Finding::new(Truth::True, rules::CO_BASSIAN)
    } else {
        Finding::new(Truth::False, rules::CO_BASSIAN)
            .with_witness(json!({ "rank": rank.to_string() }))
    };

    let fir = if finite_rank {
        Finding::new(Truth::True, rules::CD_FIR)
    } else {
        Finding::new(Truth::False, rules::CD_FIR).with_witness(json!({ "rank": "inf" }))
    };
    let co_finitely = crate::verdict::co_finitely_hopfian(&fir, divisible_finite);

    Verdict {
        bassian_finite: bassian,
        dedekind_finite: dedekind,
        co_hopfian,
        relatively_co_hopfian: relative,
        co_bassian_finite: co_bassian,
        finite_injective_rank: fir,
        co_finitely_hopfian: co_finitely,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ch(s: &str) -> Characteristic {
        s.parse().unwrap()
    }

    fn ty(s: &str) -> TypeDescriptor {
        ch(s).into()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ch("const0").eval(7), Ok(ExtNat::zero()));
        assert_eq!(ch("res(0,1)").eval(3), Ok(ExtNat::Infinity));
        assert_eq!(ch("thr(4)").eval(11), Ok(ExtNat::Infinity));
        assert_eq!(ch("thr(4)").eval(7), Ok(ExtNat::zero()));
        assert_eq!(ch("thr(4);exc(7=3)").eval(7), Ok(ExtNat::from(3)));
        assert!(ch("const0").eval(9).is_err());
    }

    #[test]
    fn compare_examples() {
        let z = char_of_idempotent(&Word::EMPTY).into();
        let e0: TypeDescriptor = char_of_idempotent(&w("0")).into();
        let e1: TypeDescriptor = char_of_idempotent(&w("1")).into();
        assert_eq!(type_compare(&z, &e0), TypeOrder::Less);
        assert_eq!(type_compare(&e0, &e1), TypeOrder::Incomparable);
        // prime 3 has index 1, where res(1,2) vanishes
        assert_eq!(type_compare(&ty("res(1,2)"), &ty("res(1,2);exc(3=2)")), TypeOrder::Equal);
        assert_eq!(type_compare(&ty("res(1,2)"), &ty("res(1,2);exc(5=2)")), TypeOrder::Greater);
        assert_eq!(type_compare(&ty("const0"), &ty("const0;exc(5=2)")), TypeOrder::Equal);
        // infinite entries are not finite differences
        assert_eq!(type_compare(&ty("const0"), &ty("const0;exc(5=inf)")), TypeOrder::Less);
        assert_eq!(type_compare(&ty("constInf"), &ty("constInf;exc(2=0)")), TypeOrder::Greater);
    }

    #[test]
    fn thresholds_descend() {
        assert_eq!(type_compare(&ty("thr(3)"), &ty("thr(4)")), TypeOrder::Greater);
        assert_eq!(type_compare(&ty("thr(4)"), &ty("constInf")), TypeOrder::Less);
        assert_eq!(type_compare(&ty("thr(0)"), &ty("constInf")), TypeOrder::Equal);
        assert_eq!(type_compare(&ty("thr(2)"), &ty("thr(3);exc(5=inf)")), TypeOrder::Equal);
        assert_eq!(type_compare(&ty("const0"), &ty("thr(7)")), TypeOrder::Less);
        assert_eq!(type_compare(&ty("thr(2)"), &ty("res(0,1)")), TypeOrder::Incomparable);
        // res(0,0) is the zero characteristic
        assert_eq!(type_compare(&ty("res(0,0)"), &ty("const0")), TypeOrder::Equal);
    }

    #[test]
    fn nested_chain_ascends() {
        for i in 0..=6 {
            for j in i + 1..=6 {
                let a = char_of_idempotent(&Word::zeros(i));
                let b = char_of_idempotent(&Word::zeros(j));
                assert_eq!(type_compare(&a.clone().into(), &b.clone().into()), TypeOrder::Less);
                assert!(pointwise_le(&a, &b, 128) && !pointwise_le(&b, &a, 128));
            }
        }
    }

    #[test]
    fn atc_examples() {
        let dedfin = CdDescriptor {
            entries: vec![],
            families: vec![FamilyTerm {
                family: ChainFamily::AscendingNest(Word::EMPTY),
                multiplicity: ExtNat::one(),
            }],
        };
        assert!(!atc_holds(&dedfin));
        let single = CdDescriptor {
            entries: vec![CdEntry { ty: ty("res(0,1)"), multiplicity: ExtNat::from(3) }],
            families: vec![],
        };
        assert!(atc_holds(&single));
        let desc = CdDescriptor {
            entries: vec![],
            families: vec![FamilyTerm {
                family: ChainFamily::DescendingThreshold(0),
                multiplicity: ExtNat::one(),
            }],
        };
        assert!(atc_holds(&desc));
    }

    #[test]
    fn verdict_examples() {
        let dedfin = CdDescriptor {
            entries: vec![],
            families: vec![FamilyTerm {
                family: ChainFamily::AscendingNest(Word::EMPTY),
                multiplicity: ExtNat::one(),
            }],
        };
        let v = cd_verdict(&dedfin);
        assert_eq!(v.dedekind_finite.value, Truth::True);
        assert_eq!(v.bassian_finite.value, Truth::False);
        assert_eq!(v.relatively_co_hopfian.value, Truth::False);
        let shift = &v.bassian_finite.witness.as_ref().unwrap()["shift"];
        assert_eq!(shift.as_array().unwrap().len(), 6);
        for step in shift.as_array().unwrap() {
            assert_eq!(step["order"], "LT");
        }

        let homogeneous = CdDescriptor {
            entries: vec![CdEntry { ty: ty("const0"), multiplicity: ExtNat::Infinity }],
            families: vec![],
        };
        let v = cd_verdict(&homogeneous);
        assert_eq!(v.dedekind_finite.value, Truth::False);
        assert_eq!(v.bassian_finite.value, Truth::False);

        let three = CdDescriptor {
            entries: vec![
                CdEntry { ty: ty("const0"), multiplicity: ExtNat::one() },
                CdEntry { ty: ty("res(0,1)"), multiplicity: ExtNat::from(2) },
                CdEntry { ty: ty("thr(5)"), multiplicity: ExtNat::one() },
            ],
            families: vec![],
        };
        let v = cd_verdict(&three);
        assert_eq!(v.bassian_finite.value, Truth::True);
        assert_eq!(v.finite_injective_rank.value, Truth::True);
        assert_eq!(v.co_hopfian.value, Truth::False);
        assert_eq!(v.co_finitely_hopfian.value, Truth::False);

        let rational = CdDescriptor {
            entries: vec![CdEntry { ty: ty("constInf"), multiplicity: ExtNat::from(2) }],
            families: vec![],
        };
        let v = cd_verdict(&rational);
        assert_eq!(v.co_hopfian.value, Truth::True);
        assert_eq!(v.co_finitely_hopfian.value, Truth::True);
        assert_eq!(v.co_bassian_finite.value, Truth::False);
    }

    fn arb_tail() -> impl Strategy<Value = Tail> {
        prop_oneof![
            any::<bool>().prop_map(Tail::Const),
            (0u32..=4).prop_flat_map(|k| (0..1u64 << k).prop_map(move |r| Tail::Residue { r, k })),
            (0u64..12).prop_map(Tail::Threshold),
        ]
    }

    fn arb_char() -> impl Strategy<Value = Characteristic> {
        let exc = proptest::collection::btree_map(
            prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
            prop_oneof![(0u64..3).prop_map(ExtNat::from), Just(ExtNat::Infinity)],
            0..3,
        );
        (arb_tail(), exc).prop_map(|(t, e)| Characteristic::new(t, e).unwrap())
    }

    /// Brute-force `≤` on a window wide enough to see every period and threshold
    /// used by the generators above.
    fn windowed_le(a: &Characteristic, b: &Characteristic) -> bool {
        (0..256).all(|i| {
            let (x, y) = (a.eval_index(i), b.eval_index(i));
            !(x.is_infinite() && y.is_finite())
        })
    }

    proptest! {
        #[test]
        fn order_matches_window(a in arb_char(), b in arb_char()) {
            prop_assert_eq!(type_le(&a, &b), windowed_le(&a, &b));
        }

        #[test]
        fn partial_order(a in arb_char(), b in arb_char(), c in arb_char()) {
            prop_assert!(type_le(&a, &a));
            if type_le(&a, &b) && type_le(&b, &c) {
                prop_assert!(type_le(&a, &c));
            }
            let (ta, tb): (TypeDescriptor, TypeDescriptor) = (a.into(), b.into());
            let fwd = type_compare(&ta, &tb);
            let back = type_compare(&tb, &ta);
            let expected = match fwd {
                TypeOrder::Less => TypeOrder::Greater,
                TypeOrder::Greater => TypeOrder::Less,
                other => other,
            };
            prop_assert_eq!(back, expected);
        }

        #[test]
        fn text_round_trip(a in arb_char()) {
            prop_assert_eq!(a.to_string().parse::<Characteristic>().unwrap(), a);
        }
    }
}
