//! Group expressions and their property verdicts.
//!
//! Every expressible group is a split sum of a torsion part (cyclic, Prüfer and
//! unbounded-Ulm atoms) and a torsion-free part (rank-1 atoms, chain families
//! and copies of the ring `R`). Properties are decided on each side and then
//! combined; anything outside the reach of a rule is reported as `UNDECIDED`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::ExtNat;
use crate::locnum::Word;
use crate::pgroup::{torsion_verdict, PrimeComponent, TorsionDescriptor};
use crate::typesys::{cd_verdict, CdDescriptor, CdEntry, ChainFamily, Characteristic, FamilyTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Truth {
    True,
    False,
    Undecided,
}

impl Truth {
    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Undecided,
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "TRUE",
            Truth::False => "FALSE",
            Truth::Undecided => "UNDECIDED",
        })
    }
}

/// The rule that produced a value, with the result it rests on.
#[derive(Debug, Clone, Copy)]
pub struct Rule {
    pub name: &'static str,
    pub anchor: &'static str,
}

pub mod rules {
    use super::Rule;

    pub const FINITE_RANK_TF: Rule = Rule {
        name: "finite-rank-torsion-free",
        anchor: "torsion-free groups of finite rank are Bassian-finite and relatively co-Hopfian",
    };
    pub const ATC: Rule = Rule {
        name: "ascending-type-condition",
        anchor: "completely decomposable groups: Bassian-finite iff relatively co-Hopfian iff ascending type condition",
    };
    pub const CD_MULTIPLICITY: Rule = Rule {
        name: "type-multiplicity",
        anchor: "completely decomposable groups: a type of infinite multiplicity gives G isomorphic to a proper summand",
    };
    pub const TF_CO_HOPFIAN: Rule = Rule {
        name: "divisible-finite-rank",
        anchor: "torsion-free groups: co-Hopfian iff divisible of finite rank",
    };
    pub const CO_BASSIAN: Rule = Rule {
        name: "indecomposable",
        anchor: "co-Bassian-finite iff indecomposable",
    };
    pub const CD_FIR: Rule = Rule {
        name: "finite-rank-injective",
        anchor: "completely decomposable groups have finite injective rank iff they have finite rank",
    };
    pub const CO_FINITELY_HOPFIAN: Rule = Rule {
        name: "divisible-finite-rank",
        anchor: "groups of finite injective rank are co-finitely Hopfian iff divisible of finite rank",
    };
    pub const CO_FINITELY_HOPFIAN_OPEN: Rule = Rule {
        name: "no-finite-injective-rank",
        anchor: "co-finitely Hopfian is only decided for groups of finite injective rank",
    };
    pub const TORSION_CO_HOPFIAN: Rule = Rule {
        name: "p-primary-co-hopfian",
        anchor: "torsion groups: Bassian-finite iff relatively co-Hopfian iff co-Hopfian, checked prime by prime",
    };
    pub const TORSION_DEDEKIND: Rule = Rule {
        name: "p-primary-multiplicity",
        anchor: "a summand X^(w) makes a group isomorphic to a proper summand of itself",
    };
    pub const TORSION_DEDEKIND_OPEN: Rule = Rule {
        name: "p-primary-multiplicity",
        anchor: "Dedekind-finiteness of non-co-Hopfian torsion with finite multiplicities is not decided here",
    };
    pub const TORSION_FIR: Rule = Rule {
        name: "torsion-summand",
        anchor: "a nonzero torsion summand admits a non-injective endomorphism with finite cokernel or a surjective one",
    };
    pub const RING_R: Rule = Rule {
        name: "ring-R",
        anchor: "the ring R is Bassian-finite, relatively co-Hopfian and of finite injective rank",
    };
    pub const RING_R_DECOMPOSES: Rule = Rule {
        name: "super-decomposable",
        anchor: "the ring R has no nonzero indecomposable direct summand",
    };
    pub const RING_R_CO_HOPFIAN: Rule = Rule {
        name: "ring-R-co-hopfian",
        anchor: "co-Hopficity of the ring R is left open",
    };
    pub const RING_R_INFINITE: Rule = Rule {
        name: "ring-R-infinite-multiplicity",
        anchor: "R^(w) is isomorphic to the proper summand R^(w) of R + R^(w)",
    };
    pub const RING_R_MIXED: Rule = Rule {
        name: "ring-R-with-other-summands",
        anchor: "sums of R with further torsion-free summands are not decided here",
    };
    pub const SPLIT: Rule = Rule {
        name: "split-mixed",
        anchor: "a split mixed group has the property iff its torsion part and torsion-free quotient do",
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub value: Truth,
    pub rule: String,
    pub anchor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Finding {
    pub fn new(value: Truth, rule: Rule) -> Self {
        Finding {
            value,
            rule: rule.name.to_string(),
            anchor: rule.anchor.to_string(),
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub bassian_finite: Finding,
    pub dedekind_finite: Finding,
    pub co_hopfian: Finding,
    pub relatively_co_hopfian: Finding,
    pub co_bassian_finite: Finding,
    pub finite_injective_rank: Finding,
    pub co_finitely_hopfian: Finding,
}

impl Verdict {
    pub fn findings(&self) -> [(&'static str, &Finding); 7] {
        [
            ("bassian_finite", &self.bassian_finite),
            ("dedekind_finite", &self.dedekind_finite),
            ("co_hopfian", &self.co_hopfian),
            ("relatively_co_hopfian", &self.relatively_co_hopfian),
            ("co_bassian_finite", &self.co_bassian_finite),
            ("finite_injective_rank", &self.finite_injective_rank),
            ("co_finitely_hopfian", &self.co_finitely_hopfian),
        ]
    }

    pub fn has_undecided(&self) -> bool {
        self.findings().iter().any(|(_, f)| f.value == Truth::Undecided)
    }
}

/// `co_finitely_hopfian` from the finite-injective-rank finding.
pub fn co_finitely_hopfian(fir: &Finding, divisible_finite_rank: bool) -> Finding {
    match fir.value {
        Truth::True if divisible_finite_rank => Finding::new(Truth::True, rules::CO_FINITELY_HOPFIAN),
        Truth::True => Finding::new(Truth::False, rules::CO_FINITELY_HOPFIAN),
        _ => Finding::new(Truth::Undecided, rules::CO_FINITELY_HOPFIAN_OPEN),
    }
}

/// No TRUE/FALSE pair contradicts
/// co-Hopfian ⇒ relatively co-Hopfian ⇒ Bassian-finite ⇒ Dedekind-finite,
/// nor finite injective rank ⇒ relatively co-Hopfian.
pub fn check_implications(v: &Verdict) -> bool {
    let chain = [
        v.co_hopfian.value,
        v.relatively_co_hopfian.value,
        v.bassian_finite.value,
        v.dedekind_finite.value,
    ];
    for i in 0..chain.len() {
        for j in i + 1..chain.len() {
            if chain[i] == Truth::True && chain[j] == Truth::False {
                return false;
            }
        }
    }
    let fir = v.finite_injective_rank.value;
    !(fir == Truth::True && chain[1..].contains(&Truth::False))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Cyclic { p: u64, e: u32 },
    Prufer(u64),
    Z,
    Q,
    Rank1(Characteristic),
    AscChain(Word),
    DescChain(u64),
    UlmTail(u64),
    ARRing,
    Group(GroupExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub atom: Atom,
    pub multiplicity: ExtNat,
}

/// A finite direct sum of atoms with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupExpr {
    pub terms: Vec<Term>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Cyclic { p, e } => write!(f, "C({p},{e})"),
            Atom::Prufer(p) => write!(f, "Prufer({p})"),
            Atom::Z => f.write_str("Z"),
            Atom::Q => f.write_str("Q"),
            Atom::Rank1(c) => write!(f, "R1({c})"),
            Atom::AscChain(w) => write!(f, "AscChain(\"{w}\")"),
            Atom::DescChain(n) => write!(f, "DescChain({n})"),
            Atom::UlmTail(p) => write!(f, "UlmTail({p})"),
            Atom::ARRing => f.write_str("ARRing"),
            Atom::Group(g) => write!(f, "({g})"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.atom)?;
        match &self.multiplicity {
            ExtNat::Infinity => f.write_str("^w"),
            m if m.is_one() => Ok(()),
            m => write!(f, "^{m}"),
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl GroupExpr {
    /// Non-group atoms with their total multiplicities, in a canonical order.
    pub fn leaves(&self) -> Vec<(Atom, ExtNat)> {
        fn walk(g: &GroupExpr, outer: &ExtNat, out: &mut Vec<(Atom, ExtNat)>) {
            for t in &g.terms {
                let m = outer * &t.multiplicity;
                match &t.atom {
                    Atom::Group(inner) => walk(inner, &m, out),
                    a => out.push((a.clone(), m)),
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &ExtNat::one(), &mut out);
        out.sort_by_cached_key(|(a, m)| (a.to_string(), m.clone()));
        out
    }
}

struct Parts {
    torsion: TorsionDescriptor,
    cd: CdDescriptor,
    ring: ExtNat,
}

fn split_parts(leaves: &[(Atom, ExtNat)]) -> Parts {
    let mut torsion: BTreeMap<u64, PrimeComponent> = BTreeMap::new();
    let mut entries: BTreeMap<String, (Characteristic, ExtNat)> = BTreeMap::new();
    let mut families: BTreeMap<ChainFamily, ExtNat> = BTreeMap::new();
    let mut ring = ExtNat::zero();
    let mut add_entry = |c: Characteristic, m: &ExtNat| {
        let slot = entries.entry(c.to_string()).or_insert((c, ExtNat::zero()));
        slot.1 = &slot.1 + m;
    };
    for (atom, m) in leaves {
        match atom {
            Atom::Cyclic { p, e } => {
                let comp = torsion.entry(*p).or_default();
                let slot = comp.ulm.entry(e - 1).or_insert_with(ExtNat::zero);
                *slot = &*slot + m;
            }
            Atom::Prufer(p) => {
                let comp = torsion.entry(*p).or_default();
                comp.prufer_rank = &comp.prufer_rank + m;
            }
            Atom::UlmTail(p) => {
                let comp = torsion.entry(*p).or_default();
                comp.unbounded_tail = true;
                comp.tail_multiplicity = &comp.tail_multiplicity + m;
            }
            Atom::Z => add_entry(Characteristic::zero(), m),
            Atom::Q => add_entry(Characteristic::infinity(), m),
            Atom::Rank1(c) => add_entry(c.clone(), m),
            Atom::AscChain(w) => {
                let slot = families.entry(ChainFamily::AscendingNest(*w)).or_insert_with(ExtNat::zero);
                *slot = &*slot + m;
            }
            Atom::DescChain(n) => {
                let slot = families.entry(ChainFamily::DescendingThreshold(*n)).or_insert_with(ExtNat::zero);
                *slot = &*slot + m;
            }
            Atom::ARRing => ring = &ring + m,
            Atom::Group(_) => unreachable!("leaves are flattened"),
        }
    }
    Parts {
        torsion: TorsionDescriptor { primes: torsion },
        cd: CdDescriptor {
            entries: entries
                .into_values()
                .map(|(c, multiplicity)| CdEntry { ty: c.into(), multiplicity })
                .collect(),
            families: families
                .into_iter()
                .map(|(family, multiplicity)| FamilyTerm { family, multiplicity })
                .collect(),
        },
        ring,
    }
}

fn ring_verdict() -> Verdict {
    let holds = Finding::new(Truth::True, rules::RING_R);
    let fir = holds.clone();
    Verdict {
        bassian_finite: holds.clone(),
        dedekind_finite: holds.clone(),
        co_hopfian: Finding::new(Truth::Undecided, rules::RING_R_CO_HOPFIAN),
        relatively_co_hopfian: holds,
        co_bassian_finite: Finding::new(Truth::False, rules::RING_R_DECOMPOSES)
            .with_witness(json!({ "summand": "ARRing" })),
        co_finitely_hopfian: co_finitely_hopfian(&fir, false),
        finite_injective_rank: fir,
    }
}

fn torsion_free_verdict(cd: &CdDescriptor, ring: &ExtNat) -> Verdict {
    if ring.is_zero() {
        return cd_verdict(cd);
    }
    if ring.is_one() && cd.is_zero() {
        return ring_verdict();
    }
    let cdv = (!cd.is_zero()).then(|| cd_verdict(cd));
    let pick = |get: fn(&Verdict) -> &Finding| -> Finding {
        if let Some(f) = cdv.as_ref().map(get).filter(|f| f.value == Truth::False) {
            return f.clone();
        }
        if ring.is_infinite() {
            return Finding::new(Truth::False, rules::RING_R_INFINITE)
                .with_witness(json!({ "summand": "ARRing", "multiplicity": "inf" }));
        }
        Finding::new(Truth::Undecided, rules::RING_R_MIXED)
    };
    let fir = pick(|v| &v.finite_injective_rank);
    Verdict {
        bassian_finite: pick(|v| &v.bassian_finite),
        dedekind_finite: pick(|v| &v.dedekind_finite),
        co_hopfian: pick(|v| &v.co_hopfian),
        relatively_co_hopfian: pick(|v| &v.relatively_co_hopfian),
        co_bassian_finite: Finding::new(Truth::False, rules::RING_R_DECOMPOSES)
            .with_witness(json!({ "summand": "ARRing" })),
        co_finitely_hopfian: co_finitely_hopfian(&fir, false),
        finite_injective_rank: fir,
    }
}

fn combine(torsion: &Finding, free: &Finding) -> Finding {
    match (torsion.value, free.value) {
        (Truth::False, _) => Finding::new(Truth::False, rules::SPLIT)
            .with_witness(json!({ "side": "torsion", "finding": torsion })),
        (_, Truth::False) => Finding::new(Truth::False, rules::SPLIT)
            .with_witness(json!({ "side": "torsion-free", "finding": free })),
        (a, b) => Finding::new(a.and(b), rules::SPLIT),
    }
}

fn is_indecomposable(atom: &Atom) -> bool {
    matches!(
        atom,
        Atom::Cyclic { .. } | Atom::Prufer(_) | Atom::Z | Atom::Q | Atom::Rank1(_)
    )
}

pub fn evaluate(e: &GroupExpr) -> Verdict {
    let leaves = e.leaves();
    let parts = split_parts(&leaves);
    let torsion_zero = parts.torsion.is_zero();
    let free_zero = parts.cd.is_zero() && parts.ring.is_zero();

    let tv = torsion_verdict(&parts.torsion);
    let fv = torsion_free_verdict(&parts.cd, &parts.ring);
    let joint = |get: fn(&Verdict) -> &Finding| -> Finding {
        if torsion_zero {
            get(&fv).clone()
        } else if free_zero {
            get(&tv).clone()
        } else {
            combine(get(&tv), get(&fv))
        }
    };

    let fir = if torsion_zero {
        fv.finite_injective_rank.clone()
    } else {
        tv.finite_injective_rank.clone()
    };

    let co_bassian = match leaves.as_slice() {
        [(atom, m)] if m.is_one() && is_indecomposable(atom) => {
            Finding::new(Truth::True, rules::CO_BASSIAN)
        }
        [(Atom::ARRing, m)] if m.is_one() => fv.co_bassian_finite.clone(),
        [] => Finding::new(Truth::True, rules::CO_BASSIAN),
        _ => Finding::new(Truth::False, rules::CO_BASSIAN).with_witness(json!({
            "summands": leaves
                .iter()
                .map(|(a, m)| Term { atom: a.clone(), multiplicity: m.clone() }.to_string())
                .collect::<Vec<_>>(),
        })),
    };

    let divisible_finite = leaves
        .iter()
        .all(|(a, m)| matches!(a, Atom::Q) && m.is_finite());

    Verdict {
        bassian_finite: joint(|v| &v.bassian_finite),
        dedekind_finite: joint(|v| &v.dedekind_finite),
        co_hopfian: joint(|v| &v.co_hopfian),
        relatively_co_hopfian: joint(|v| &v.relatively_co_hopfian),
        co_bassian_finite: co_bassian,
        co_finitely_hopfian: co_finitely_hopfian(&fir, divisible_finite),
        finite_injective_rank: fir,
    }
}
