//! Arithmetic expressions over `R`, evaluated in `R ⊗ Q`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | int ('/' int)? | 'e"' word '"' | '(' expr ')'
//! ```
//!
//! Intermediate values may leave `R` (for instance `1/2` alone); only the
//! final result has to lie in `R`.

use bassfin::arith::Rational;
use bassfin::arring::{RingElement, MAX_LEVEL};
use bassfin::locnum::Word;

const MAX_DEPTH: usize = 64;
const MAX_DIGITS: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingExprError {
    pub pos: usize,
    pub message: String,
}

impl std::fmt::Display for RingExprError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ring expression error at {}: {}", self.pos, self.message)
    }
}

pub fn eval(text: &str) -> Result<RingElement, RingExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, depth: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return p.fail("expected '+', '-', '*' or end of input");
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn fail<T>(&self, message: impl Into<String>) -> Result<T, RingExprError> {
        Err(RingExprError { pos: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RingElement, RingExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.ring_add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.ring_sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RingElement, RingExprError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.ring_mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<u64, RingExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == start {
            self.pos = start;
            return self.fail("expected an integer");
        }
        if self.pos - start > MAX_DIGITS {
            self.pos = start;
            return self.fail(format!("integers are limited to {MAX_DIGITS} digits"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("at most 18 digits"))
    }

    fn factor(&mut self) -> Result<RingElement, RingExprError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.nested(|p| Ok(-&p.factor()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.nested(Self::expr)?;
                if self.peek() != Some(b')') {
                    return self.fail("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'e') => {
                self.pos += 1;
                if self.src.get(self.pos) != Some(&b'"') {
                    return self.fail("expected '\"' after 'e'");
                }
                let start = self.pos + 1;
                let Some(len) = self.src[start..].iter().position(|&b| b == b'"') else {
                    return self.fail("unterminated word");
                };
                let text = std::str::from_utf8(&self.src[start..start + len]).unwrap_or("?");
                let word: Word = match text.parse() {
                    Ok(w) => w,
                    Err(_) => return self.fail(format!("\"{text}\" is not a binary word")),
                };
                if word.len() > MAX_LEVEL {
                    return self.fail(format!("words are limited to length {MAX_LEVEL}"));
                }
                self.pos = start + len + 1;
                Ok(RingElement::basis_idempotent(&word))
            }
            Some(b) if b.is_ascii_digit() => {
                let num = self.integer()?;
                if self.peek() != Some(b'/') {
                    return Ok(RingElement::from_integer(num));
                }
                self.pos += 1;
                let at = self.pos;
                let den = self.integer()?;
                match Rational::new(num, den) {
                    Ok(q) => Ok(RingElement::one().scale(&q)),
                    Err(_) => Err(RingExprError { pos: at, message: "zero denominator".into() }),
                }
            }
            Some(_) => self.fail("expected an integer, a fraction, e\"w\", '-' or '('"),
            None => self.fail("unexpected end of input"),
        }
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T, RingExprError>) -> Result<T, RingExprError> {
        if self.depth >= MAX_DEPTH {
            return self.fail("expression nested too deeply");
        }
        self.depth += 1;
        let r = f(self);
        self.depth -= 1;
        r
    }
}
