//! Parser for group expressions and characteristics.
//!
//! ```text
//! expr  := term ('+' term)*
//! term  := atom ('^' (nat | 'w'))?
//! atom  := 'C(' p ',' e ')' | 'Prufer(' p ')' | 'Z' | 'Q' | 'R1(' char ')'
//!        | 'AscChain("' word '")' | 'DescChain(' n ')' | 'UlmTail(' p ')'
//!        | 'ARRing' | '(' expr ')'
//! char  := tail (';exc(' prime '=' (nat | 'inf') (',' ...)* ')')?
//! tail  := 'res(' r ',' k ')' | 'thr(' n ')' | 'const0' | 'constInf'
//! ```
//!
//! Whitespace between tokens is ignored. The canonical serializer is the
//! `Display` impl of [`GroupExpr`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{is_prime, ExtNat};
use crate::locnum::Word;
use crate::typesys::{Characteristic, Tail, MAX_THRESHOLD};
use crate::verdict::{Atom, GroupExpr, Term};

/// Longest base word accepted in `AscChain`, leaving room to prepend zeros.
pub const MAX_CHAIN_BASE: u32 = 48;
/// Deepest parenthesis nesting accepted.
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("parse error at {pos}: expected {}, found {found}", expected.join(" | "))]
    Parse {
        pos: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("semantic error at {pos}: {message}")]
    Semantic { pos: usize, message: String },
}

impl DslError {
    pub fn pos(&self) -> usize {
        match self {
            DslError::Parse { pos, .. } | DslError::Semantic { pos, .. } => *pos,
        }
    }
}

pub fn parse_group_expr(text: &str) -> Result<GroupExpr, DslError> {
    let mut p = Parser { src: text, pos: 0, depth: 0 };
    let e = p.expr()?;
    p.end()?;
    Ok(e)
}

pub fn parse_characteristic(text: &str) -> Result<Characteristic, DslError> {
    let mut p = Parser { src: text, pos: 0, depth: 0 };
    let c = p.characteristic()?;
    p.end()?;
    Ok(c)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
}

enum Token<'a> {
    Ident(&'a str),
    Number(&'a str),
    Punct(char),
    Str(&'a str),
    End,
}

impl fmt::Display for Token<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) | Token::Number(s) => write!(f, "'{s}'"),
            Token::Punct(c) => write!(f, "'{c}'"),
            Token::Str(s) => write!(f, "\"{s}\""),
            Token::End => f.write_str("end of input"),
        }
    }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// The next token and the position just after it, without consuming it.
    fn peek(&mut self) -> (Token<'a>, usize) {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return (Token::End, self.pos);
        };
        let span = |pred: fn(char) -> bool| rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        if c.is_ascii_alphabetic() {
            let n = span(|c| c.is_ascii_alphanumeric() || c == '_');
            (Token::Ident(&rest[..n]), self.pos + n)
        } else if c.is_ascii_digit() {
            let n = span(|c| c.is_ascii_digit());
            (Token::Number(&rest[..n]), self.pos + n)
        } else if c == '"' {
            match rest[1..].find('"') {
                Some(n) => (Token::Str(&rest[1..1 + n]), self.pos + n + 2),
                None => (Token::Punct('"'), self.pos + 1),
            }
        } else {
            (Token::Punct(c), self.pos + c.len_utf8())
        }
    }

    fn fail<T>(&mut self, expected: &[&str]) -> Result<T, DslError> {
        let (found, _) = self.peek();
        Err(DslError::Parse {
            pos: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: found.to_string(),
        })
    }

    fn semantic<T>(&self, pos: usize, message: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Semantic { pos, message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        match self.peek() {
            (Token::Punct(d), next) if d == c => {
                self.pos = next;
                true
            }
            _ => false,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DslError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&[&format!("'{c}'")])
        }
    }

    fn end(&mut self) -> Result<(), DslError> {
        match self.peek() {
            (Token::End, _) => Ok(()),
            _ => self.fail(&["'+'", "end of input"]),
        }
    }

    /// A natural number together with its starting position.
    fn nat(&mut self) -> Result<(u64, usize), DslError> {
        match self.peek() {
            (Token::Number(s), next) => {
                let start = self.pos;
                self.pos = next;
                match s.parse::<u64>() {
                    Ok(n) => Ok((n, start)),
                    Err(_) => self.semantic(start, format!("number {s} is too large")),
                }
            }
            _ => self.fail(&["natural number"]),
        }
    }

    fn prime(&mut self) -> Result<u64, DslError> {
        let (p, at) = self.nat()?;
        if !is_prime(p) {
            return self.semantic(at, format!("{p} is not prime"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<GroupExpr, DslError> {
        let mut terms = vec![self.term()?];
        while self.eat('+') {
            terms.push(self.term()?);
        }
        Ok(GroupExpr { terms })
    }

    fn term(&mut self) -> Result<Term, DslError> {
        let atom = self.atom()?;
        let multiplicity = if self.eat('^') {
            match self.peek() {
                (Token::Ident("w"), next) => {
                    self.pos = next;
                    ExtNat::Infinity
                }
                (Token::Number(_), _) => {
                    let (m, at) = self.nat()?;
                    if m == 0 {
                        return self.semantic(at, "multiplicity must be at least 1");
                    }
                    ExtNat::from(m)
                }
                _ => return self.fail(&["natural number", "'w'"]),
            }
        } else {
            ExtNat::one()
        };
        Ok(Term { atom, multiplicity })
    }

    const ATOMS: [&'static str; 10] = [
        "'C'", "'Prufer'", "'Z'", "'Q'", "'R1'", "'AscChain'", "'DescChain'", "'UlmTail'", "'ARRing'",
        "'('",
    ];

    fn atom(&mut self) -> Result<Atom, DslError> {
        let start = self.pos;
        let (tok, next) = self.peek();
        let name = match tok {
            Token::Ident(name) => name,
            Token::Punct('(') => {
                if self.depth >= MAX_DEPTH {
                    return self.semantic(self.pos, "parentheses nested too deeply");
                }
                self.pos = next;
                self.depth += 1;
                let inner = self.expr()?;
                self.depth -= 1;
                self.expect(')')?;
                return Ok(Atom::Group(inner));
            }
            _ => return self.fail(&Self::ATOMS),
        };
        let atom = match name {
            "Z" | "Q" | "ARRing" => {
                self.pos = next;
                return Ok(match name {
                    "Z" => Atom::Z,
                    "Q" => Atom::Q,
                    _ => Atom::ARRing,
                });
            }
            "C" | "Prufer" | "R1" | "AscChain" | "DescChain" | "UlmTail" => {
                self.pos = next;
                self.expect('(')?;
                match name {
                    "C" => {
                        let p = self.prime()?;
                        self.expect(',')?;
                        let (e, at) = self.nat()?;
                        if e == 0 || e > u32::MAX as u64 {
                            return self.semantic(at, format!("exponent {e} out of range"));
                        }
                        Atom::Cyclic { p, e: e as u32 }
                    }
                    "Prufer" => Atom::Prufer(self.prime()?),
                    "UlmTail" => Atom::UlmTail(self.prime()?),
                    "R1" => Atom::Rank1(self.characteristic()?),
                    "DescChain" => {
                        let (n, at) = self.nat()?;
                        if n > MAX_THRESHOLD {
                            return self.semantic(at, format!("start {n} exceeds {MAX_THRESHOLD}"));
                        }
                        Atom::DescChain(n)
                    }
                    _ => Atom::AscChain(self.word()?),
                }
            }
            _ => return self.fail(&Self::ATOMS),
        };
        self.expect(')')?;
        debug_assert!(self.pos > start);
        Ok(atom)
    }

    fn word(&mut self) -> Result<Word, DslError> {
        match self.peek() {
            (Token::Str(s), next) => {
                let at = self.pos;
                self.pos = next;
                match s.parse::<Word>() {
                    Ok(w) if w.len() <= MAX_CHAIN_BASE => Ok(w),
                    Ok(_) => self.semantic(at, format!("word longer than {MAX_CHAIN_BASE}")),
                    Err(_) => self.semantic(at, format!("\"{s}\" is not a binary word")),
                }
            }
            _ => self.fail(&["quoted binary word"]),
        }
    }

    fn characteristic(&mut self) -> Result<Characteristic, DslError> {
        let start = self.pos;
        let tail = match self.peek() {
            (Token::Ident("const0"), next) => {
                self.pos = next;
                Tail::ZERO
            }
            (Token::Ident("constInf"), next) => {
                self.pos = next;
                Tail::INFINITY
            }
            (Token::Ident("res"), next) => {
                self.pos = next;
                self.expect('(')?;
                let (r, _) = self.nat()?;
                self.expect(',')?;
                let (k, at) = self.nat()?;
                self.expect(')')?;
                if k > 62 || r >> k != 0 {
                    return self.semantic(at, format!("residue {r} does not fit modulus 2^{k}"));
                }
                Tail::Residue { r, k: k as u32 }
            }
            (Token::Ident("thr"), next) => {
                self.pos = next;
                self.expect('(')?;
                let (n, at) = self.nat()?;
                self.expect(')')?;
                if n > MAX_THRESHOLD {
                    return self.semantic(at, format!("threshold {n} exceeds {MAX_THRESHOLD}"));
                }
                Tail::Threshold(n)
            }
            _ => return self.fail(&["'res'", "'thr'", "'const0'", "'constInf'"]),
        };
        let mut exceptions = BTreeMap::new();
        if self.eat(';') {
            match self.peek() {
                (Token::Ident("exc"), next) => self.pos = next,
                _ => return self.fail(&["'exc'"]),
            }
            self.expect('(')?;
            loop {
                let p = self.prime()?;
                let at = self.pos;
                self.expect('=')?;
                let v = match self.peek() {
                    (Token::Ident("inf"), next) => {
                        self.pos = next;
                        ExtNat::Infinity
                    }
                    (Token::Number(_), _) => ExtNat::from(self.nat()?.0),
                    _ => return self.fail(&["natural number", "'inf'"]),
                };
                if exceptions.insert(p, v).is_some() {
                    return self.semantic(at, format!("prime {p} listed twice"));
                }
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(')')?;
        }
        Characteristic::new(tail, exceptions)
            .or_else(|e| self.semantic(start, e.to_string()))
    }
}
