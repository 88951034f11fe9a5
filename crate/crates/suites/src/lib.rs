//! Named acceptance suites. Each suite checks one criterion against the
//! independent oracles in [`oracle`] and reports how many checks ran, which
//! failed, and whether it stayed inside its time budget.

pub mod oracle;
pub mod sample;

use std::time::{Duration, Instant};

use bassfin::arith::{ExtNat, Rational};
use bassfin::arring::{char_of_idempotent, divide_mod, split_idempotent, RingElement};
use bassfin::dsl::parse_group_expr;
use bassfin::locnum::{in_l, in_qw, split_rational, Word};
use bassfin::pgroup::{bassian_finite_bruteforce, embeds_criterion, find_monomorphism, FinitePGroup};
use bassfin::typesys::{
    atc_holds, cd_verdict, pointwise_le, type_compare, CdDescriptor, CdEntry, ChainFamily, Characteristic,
    FamilyTerm, TypeOrder,
};
use bassfin::verdict::{check_implications, evaluate, Truth};

pub use sample::DEFAULT_SEED;

/// Collects check outcomes, keeping the first few failure messages.
#[derive(Debug, Default)]
pub struct Checker {
    pub checks: u64,
    pub failed: u64,
    pub messages: Vec<String>,
}

impl Checker {
    pub fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.messages.len() < 10 {
                self.messages.push(message());
            }
        }
    }
}

#[derive(Debug)]
pub struct Report {
    pub id: u8,
    pub suite: &'static str,
    pub title: &'static str,
    pub checks: u64,
    pub failed: u64,
    pub messages: Vec<String>,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checks > 0 && self.elapsed <= self.budget
    }
}

pub struct Criterion {
    pub id: u8,
    pub suite: &'static str,
    pub title: &'static str,
    pub budget: Duration,
    run: fn(u64) -> Checker,
}

impl Criterion {
    pub fn run(&self, seed: u64) -> Report {
        let start = Instant::now();
        let c = (self.run)(seed);
        Report {
            id: self.id,
            suite: self.suite,
            title: self.title,
            checks: c.checks,
            failed: c.failed,
            messages: c.messages,
            elapsed: start.elapsed(),
            budget: self.budget,
        }
    }
}

const fn criterion(id: u8, suite: &'static str, title: &'static str, ms: u64, run: fn(u64) -> Checker) -> Criterion {
    Criterion { id, suite, title, budget: Duration::from_millis(ms), run }
}

/// Criteria 1 to 11; the CLI criterion lives with the binary.
pub const CRITERIA: [Criterion; 11] = [
    criterion(1, "lclass", "L-class reproduction", 1_000, lclass),
    criterion(2, "localization", "localization laws", 10_000, localization),
    criterion(3, "ring", "ring-R arithmetic", 30_000, ring),
    criterion(4, "endomorphisms", "endomorphism classification", 60_000, endomorphisms),
    criterion(5, "divisibility", "divisibility", 60_000, divisibility),
    criterion(6, "idempotents", "super-decomposability", 5_000, idempotents),
    criterion(7, "type-chain", "type chain", 5_000, type_chain),
    criterion(8, "cd-verdicts", "completely decomposable verdicts", 1_000, cd_verdicts),
    criterion(9, "pgroup-embedding", "p-group oracle equivalence", 300_000, pgroup_embedding),
    criterion(10, "sj", "S_j law", 60_000, sj_law),
    criterion(11, "verdict-chain", "verdict chain consistency", 30_000, verdict_chain),
];

pub fn find_suite(name: &str) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.suite == name || c.id.to_string() == name)
}

fn w(s: &str) -> Word {
    s.parse().expect("literal word")
}

fn words_up_to(len: u32) -> impl Iterator<Item = Word> {
    (0..=len).flat_map(Word::all_of_len)
}

fn to_i128(q: &bassfin::arith::Rational) -> (i128, u128) {
    let n = i128::try_from(q.numer()).expect("sampled numerators are small");
    let d = u128::try_from(q.denom()).expect("sampled denominators are small");
    (n, d)
}

fn lclass(_: u64) -> Checker {
    let mut c = Checker::default();
    let word = w("1011");
    let members: Vec<u64> = (0..64).filter(|&n| in_l(&word, n)).collect();
    c.check(members == [11, 27, 43, 59], || format!("L_1011 below 64 is {members:?}"));
    for v in words_up_to(5) {
        let s = v.to_string();
        for n in 0..64 {
            c.check(in_l(&v, n) == oracle::in_l(&s, n), || format!("in_L({s}, {n})"));
        }
    }
    c
}

fn localization(seed: u64) -> Checker {
    let mut c = Checker::default();
    let mut rng = sample::rng(seed);
    let words: Vec<Word> = words_up_to(3).collect();
    for i in 0..1_000 {
        // half of the samples are drawn inside some Q_w so the sum law gets exercised
        let q = if i % 2 == 0 {
            sample::rational(&mut rng)
        } else {
            sample::local_rational(&mut rng, &words[i % words.len()])
        };
        let (_, den) = to_i128(&q);
        for v in &words {
            let s = v.to_string();
            let inside = in_qw(&q, v).expect("small primes");
            let left = in_qw(&q, &v.prepend(false)).expect("small primes");
            let right = in_qw(&q, &v.prepend(true)).expect("small primes");
            c.check(inside == (left && right), || format!("intersection law at {q}, w={s}"));
            c.check(inside == oracle::in_qw(den, &s), || format!("membership of {q} in Q_{s}"));
            if inside {
                let (a, b) = split_rational(&q, v).expect("q lies in Q_w");
                let (_, da) = to_i128(&a);
                let (_, db) = to_i128(&b);
                c.check(
                    &a + &b == q && oracle::in_qw(da, &format!("0{s}")) && oracle::in_qw(db, &format!("1{s}")),
                    || format!("sum law at {q}, w={s}: {a} + {b}"),
                );
            }
        }
    }
    c
}

fn ring(seed: u64) -> Checker {
    let mut c = Checker::default();
    let mut rng = sample::rng(seed);
    let zero = RingElement::zero();
    let one = RingElement::one();
    for i in 0..300u32 {
        let a = sample::ring_element(&mut rng, i % 4, 0.2);
        let b = sample::ring_element(&mut rng, (i / 4) % 4, 0.2);
        let x = sample::ring_element(&mut rng, (i / 16) % 4, 0.2);
        let ctx = || format!("a={a}, b={b}, c={x}");
        c.check((&a + &b) + x.clone() == &a + &(&b + &x), || format!("additive associativity: {}", ctx()));
        c.check(&a + &b == &b + &a, || format!("additive commutativity: {}", ctx()));
        c.check((&a * &b) * x.clone() == &a * &(&b * &x), || format!("associativity: {}", ctx()));
        c.check(&a * &b == &b * &a, || format!("commutativity: {}", ctx()));
        c.check(&a * &(&b + &x) == &(&a * &b) + &(&a * &x), || format!("distributivity: {}", ctx()));
        c.check(&a + &zero == a && &a * &one == a, || format!("identities: {}", ctx()));
        c.check(&a + &(-&a) == zero, || format!("negation: {}", ctx()));
        c.check((&a * &b).is_valid().unwrap_or(false), || format!("closure: {}", ctx()));
        for m in a.level()..=a.level() + 2 {
            let r = a.refine(m).expect("level in range");
            let canon = a.canonicalize();
            c.check(
                r == a && r.canonicalize().dense() == canon.dense() && canon.canonicalize().dense() == canon.dense(),
                || format!("refine/canonicalize round trip of {a} at level {m}"),
            );
        }
    }
    let words: Vec<Word> = words_up_to(4).collect();
    for u in &words {
        for v in &words {
            let (su, sv) = (u.to_string(), v.to_string());
            let expected = if oracle::is_suffix(&su, &sv) {
                RingElement::basis_idempotent(v)
            } else if oracle::is_suffix(&sv, &su) {
                RingElement::basis_idempotent(u)
            } else {
                RingElement::zero()
            };
            let got = RingElement::basis_idempotent(u) * RingElement::basis_idempotent(v);
            c.check(got == expected, || format!("e_{su} * e_{sv} = {got}"));
        }
    }
    let two_three = RingElement::from_dense(1, vec![Rational::from(2), Rational::from(3)]).expect("valid");
    let three_two = RingElement::from_dense(1, vec![Rational::from(3), Rational::from(2)]).expect("valid");
    c.check(&two_three * &three_two == RingElement::from_integer(6), || "(2e_0+3e_1)(3e_0+2e_1) != 6".into());
    c.check(two_three.coker_order() == Ok(ExtNat::from(6)), || "coker(2e_0+3e_1) != 6".into());
    c
}

/// The cokernel order recomputed coefficient by coefficient with trial division.
fn oracle_coker(x: &RingElement) -> ExtNat {
    let mut order = 1u128;
    for (v, q) in x.terms() {
        if q.is_zero() {
            return ExtNat::Infinity;
        }
        let (n, _) = to_i128(q);
        order *= oracle::local_coker(n, &v.to_string());
    }
    ExtNat::from(u64::try_from(order).expect("small orders"))
}

fn endomorphisms(seed: u64) -> Checker {
    let mut c = Checker::default();
    let mut rng = sample::rng(seed);
    let one = RingElement::one();
    for i in 0..1_000u32 {
        let x = sample::ring_element(&mut rng, i % 4, 0.1);
        let y = sample::ring_element(&mut rng, (i / 4) % 4, 0.1);
        let class = x.classify_mult().expect("valid element");
        let coker = x.coker_order().expect("valid element");
        c.check(class.is_injective == coker.is_finite(), || format!("injective vs finite coker at {x}"));
        c.check(class.is_unit == coker.is_one(), || format!("unit vs coker 1 at {x}"));
        c.check(class.is_idempotent == (&x * &x == x), || format!("idempotent at {x}"));
        c.check(coker == oracle_coker(&x), || format!("coker of {x}: {coker}"));
        let product = (&x * &y).coker_order().expect("valid element");
        let expected = coker.clone() * y.coker_order().expect("valid element");
        c.check(product == expected, || format!("coker multiplicativity at {x}, {y}"));
        if class.is_unit {
            let inv = x.inverse().expect("unit");
            c.check(&x * &inv == one && inv.is_valid().unwrap_or(false), || format!("inverse of {x}"));
        }
    }
    c
}

fn divisibility(seed: u64) -> Checker {
    let mut c = Checker::default();
    let mut rng = sample::rng(seed);
    for level in 1..=3u32 {
        for _ in 0..40 {
            let x = sample::ring_element_exact(&mut rng, level);
            for m in 2..=12u64 {
                let mm = RingElement::from_integer(m);
                let y = divide_mod(&x, m).expect("level at least 1");
                let rest = (&mm * &y - x.clone()).canonicalize();
                c.check(
                    y.is_valid().unwrap_or(false) && rest.level() < x.level(),
                    || format!("m={m}, x={x}: m*y - x = {rest}"),
                );
                let mut cur = x.canonicalize();
                let mut steps = 0;
                while cur.level() > 0 && steps <= level {
                    let y = divide_mod(&cur, m).expect("level at least 1");
                    cur = (&mm * &y - cur).canonicalize();
                    steps += 1;
                }
                c.check(cur.level() == 0, || format!("iteration from {x} with m={m} stuck at {cur}"));
            }
        }
    }
    c
}

fn idempotents(_: u64) -> Checker {
    let mut c = Checker::default();
    let zero = RingElement::zero();
    let mut layer = vec![RingElement::one()];
    for depth in 1..=5 {
        let mut next = Vec::new();
        for eps in &layer {
            let (a, b) = split_idempotent(eps).expect("nonzero idempotent");
            c.check(
                !a.is_zero() && !b.is_zero() && &a * &a == a && &b * &b == b && &a * &b == zero && &a + &b == *eps,
                || format!("depth {depth}: split of {eps} into {a}, {b}"),
            );
            next.push(a);
            next.push(b);
        }
        layer = next;
    }
    c.check(layer.len() == 32, || format!("{} leaves", layer.len()));
    let total = layer.iter().fold(RingElement::zero(), |acc, e| acc + e.clone());
    c.check(total == RingElement::one(), || format!("leaves sum to {total}"));
    for i in 0..layer.len() {
        for j in i + 1..layer.len() {
            c.check(&layer[i] * &layer[j] == zero, || format!("leaves {i} and {j} not orthogonal"));
        }
    }
    c
}

fn type_chain(_: u64) -> Checker {
    let mut c = Checker::default();
    let chars: Vec<Characteristic> = (0..=6).map(|i| char_of_idempotent(&Word::zeros(i))).collect();
    for (i, ch) in chars.iter().enumerate() {
        let word = "0".repeat(i);
        for k in 0..128 {
            c.check(
                ch.eval_index(k).is_infinite() == !oracle::in_l(&word, k as u64),
                || format!("tau(e_0^{i}) at index {k}"),
            );
        }
    }
    for i in 0..chars.len() {
        for j in i + 1..chars.len() {
            let symbolic = type_compare(&chars[i].clone().into(), &chars[j].clone().into());
            let windowed = pointwise_le(&chars[i], &chars[j], 128) && !pointwise_le(&chars[j], &chars[i], 128);
            c.check(symbolic == TypeOrder::Less, || format!("symbolic {i} vs {j}: {symbolic}"));
            c.check(windowed, || format!("windowed {i} vs {j}"));
            c.check((symbolic == TypeOrder::Less) == windowed, || format!("methods disagree at {i}, {j}"));
        }
    }
    c
}

fn cd_verdicts(seed: u64) -> Checker {
    let mut c = Checker::default();
    let dedfin = CdDescriptor {
        entries: vec![],
        families: vec![FamilyTerm { family: ChainFamily::AscendingNest(Word::EMPTY), multiplicity: ExtNat::one() }],
    };
    for v in [cd_verdict(&dedfin), evaluate(&parse_group_expr("AscChain(\"\")").expect("valid"))] {
        c.check(
            v.dedekind_finite.value == Truth::True
                && v.bassian_finite.value == Truth::False
                && v.relatively_co_hopfian.value == Truth::False,
            || format!("chain example verdict {v:?}"),
        );
    }
    c.check(!atc_holds(&dedfin), || "chain example satisfies the type condition".into());
    let homogeneous = CdDescriptor {
        entries: vec![CdEntry { ty: Characteristic::zero().into(), multiplicity: ExtNat::Infinity }],
        families: vec![],
    };
    c.check(cd_verdict(&homogeneous).dedekind_finite.value == Truth::False, || "homogeneous descriptor".into());
    for text in ["Z^w", "R1(res(0,1))^w", "Q^w"] {
        let v = evaluate(&parse_group_expr(text).expect("valid"));
        c.check(v.dedekind_finite.value == Truth::False, || format!("{text} is Dedekind-finite"));
    }
    let mut rng = sample::rng(seed);
    for _ in 0..200 {
        let e = sample::finite_rank_cd_expr(&mut rng);
        let v = evaluate(&e);
        c.check(
            v.bassian_finite.value == Truth::True && v.relatively_co_hopfian.value == Truth::True,
            || format!("{e} is finite-rank but got {}", v.bassian_finite.value),
        );
    }
    c
}

fn pgroup_embedding(_: u64) -> Checker {
    let mut c = Checker::default();
    let shapes = sample::partitions_up_to(6);
    for p in [2u64, 3] {
        let groups: Vec<FinitePGroup> =
            shapes.iter().map(|e| FinitePGroup::new(p, e.clone()).expect("valid shape")).collect();
        for a in &groups {
            for b in &groups {
                let criterion = embeds_criterion(a, b).expect("same prime");
                let found = find_monomorphism(a, b).expect("desk-scale search");
                c.check(criterion == found.is_some(), || format!("{a} -> {b}: criterion {criterion}"));
                c.check(criterion == oracle::ulm_tails_dominated(a.exponents(), b.exponents()), || {
                    format!("{a} -> {b}: criterion disagrees with tail counts")
                });
                if let Some(phi) = found {
                    c.check(phi.is_valid(a, b) && phi.is_injective(a, b) == Ok(true), || {
                        format!("{a} -> {b}: witness is not a monomorphism")
                    });
                }
            }
            let (bassian, witness) = bassian_finite_bruteforce(a).expect("desk-scale search");
            c.check(bassian && witness.is_none(), || format!("{a} embeds in a proper summand"));
        }
    }
    c
}

fn sj_law(_: u64) -> Checker {
    let mut c = Checker::default();
    for p in [2u64, 3] {
        for shape in sample::partitions_up_to(6) {
            let g = FinitePGroup::new(p, shape.clone()).expect("valid shape");
            for j in 0..=7 {
                let expected = p.pow(oracle::sj_exponent(&shape, j));
                let got = g.sj_order(j);
                c.check(got == Ok(expected), || format!("|S_{j}| of {g}: {got:?}, expected {expected}"));
            }
        }
    }
    c
}

fn verdict_chain(seed: u64) -> Checker {
    let mut c = Checker::default();
    let mut rng = sample::rng(seed);
    for _ in 0..200 {
        let e = sample::group_expr(&mut rng);
        let v = evaluate(&e);
        c.check(check_implications(&v), || format!("implications violated for {e}"));
        for _ in 0..3 {
            let shuffled = sample::rearrange(&mut rng, &e);
            c.check(evaluate(&shuffled) == v, || format!("{e} and {shuffled} disagree"));
        }
    }
    c
}
