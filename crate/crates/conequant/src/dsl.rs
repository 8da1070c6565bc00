//! Plain-text expression language for differential operators.
//!
//! Syntax: coordinates `z1..zn`, derivatives `d1..dn`, the imaginary unit
//! `i`, integer and rational literals (`3`, `1/2`), unary minus, `+`, `-`,
//! `*`, integer powers `^`, parentheses, and commutator brackets `[x, y]`.
//! Precedence is `^` over `*` over `+`/`-`.
//!
//! Printing is deterministic: terms appear in descending graded
//! lexicographic order of the derivative multi-index, then of the monomial,
//! and `parse(format(e))` elaborates back to `e`.

use crate::scalar::Scalar;
use crate::weyl::{MultiIndex, WeylElement};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Imag,
    Z(usize),
    D(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, start));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, start));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, start));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, start));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, start));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, start));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, start));
                i += 1;
            }
            '[' => {
                toks.push((Tok::LBracket, start));
                i += 1;
            }
            ']' => {
                toks.push((Tok::RBracket, start));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, start));
                i += 1;
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let n: BigInt = text[i..j].parse().expect("digits");
                toks.push((Tok::Int(n), start));
                i = j;
            }
            'z' | 'd' => {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == i + 1 {
                    return err(start, format!("expected an index after '{c}'"));
                }
                let idx: usize = text[i + 1..j].parse().map_err(|_| ParseError {
                    pos: start,
                    msg: "index too large".into(),
                })?;
                if idx == 0 {
                    return err(start, "variable indices start at 1");
                }
                toks.push((if c == 'z' { Tok::Z(idx) } else { Tok::D(idx) }, start));
                i = j;
            }
            'i' => {
                toks.push((Tok::Imag, start));
                i += 1;
            }
            _ => return err(start, format!("unexpected character '{c}'")),
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: text.len(),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.here();
        match self.next() {
            Some(got) if got == t => Ok(()),
            _ => err(pos, format!("expected {what}")),
        }
    }
}

struct Parser {
    lx: Lexer,
    n: usize,
}

/// Parse `text` and elaborate it directly to a normal-ordered operator in
/// ambient dimension `n`.
pub fn parse_weyl(text: &str, n: usize) -> Result<WeylElement, ParseError> {
    assert!(n >= 1, "ambient dimension must be at least 1");
    let mut p = Parser { lx: lex(text)?, n };
    let e = p.expr()?;
    if p.lx.peek().is_some() {
        return err(p.lx.here(), "unexpected trailing input");
    }
    Ok(e)
}

impl Parser {
    fn expr(&mut self) -> Result<WeylElement, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.lx.peek() {
                Some(Tok::Plus) => {
                    self.lx.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.lx.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WeylElement, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.lx.peek(), Some(Tok::Star)) {
            self.lx.next();
            let rhs = self.factor()?;
            acc = acc.normal_mul(&rhs).expect("uniform dimension");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<WeylElement, ParseError> {
        let base = self.atom()?;
        if matches!(self.lx.peek(), Some(Tok::Caret)) {
            self.lx.next();
            let pos = self.lx.here();
            let Some(Tok::Int(k)) = self.lx.next() else {
                return err(pos, "expected a nonnegative integer exponent");
            };
            let k: u32 = k.try_into().map_err(|_| ParseError {
                pos,
                msg: "exponent out of range".into(),
            })?;
            let mut acc = WeylElement::one(self.n);
            for _ in 0..k {
                acc = acc.normal_mul(&base).expect("uniform dimension");
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<WeylElement, ParseError> {
        let pos = self.lx.here();
        match self.lx.next() {
            Some(Tok::Int(num)) => {
                // Optional rational literal a/b.
                if matches!(self.lx.peek(), Some(Tok::Slash)) {
                    self.lx.next();
                    let dpos = self.lx.here();
                    let Some(Tok::Int(den)) = self.lx.next() else {
                        return err(dpos, "expected a denominator");
                    };
                    if den == BigInt::from(0) {
                        return err(dpos, "zero denominator");
                    }
                    return Ok(WeylElement::constant(
                        self.n,
                        Scalar::from_rational(BigRational::new(num, den)),
                    ));
                }
                Ok(WeylElement::constant(
                    self.n,
                    Scalar::from_rational(BigRational::from_integer(num)),
                ))
            }
            Some(Tok::Imag) => Ok(WeylElement::constant(self.n, Scalar::i())),
            Some(Tok::Z(k)) => {
                if k > self.n {
                    return err(pos, format!("index z{k} exceeds dimension {}", self.n));
                }
                Ok(WeylElement::coordinate(self.n, k - 1))
            }
            Some(Tok::D(k)) => {
                if k > self.n {
                    return err(pos, format!("index d{k} exceeds dimension {}", self.n));
                }
                Ok(WeylElement::partial(self.n, k - 1))
            }
            Some(Tok::Minus) => Ok(self.factor()?.neg()),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.lx.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::LBracket) => {
                let a = self.expr()?;
                self.lx.expect(Tok::Comma, "',' in commutator")?;
                let b = self.expr()?;
                self.lx.expect(Tok::RBracket, "']'")?;
                Ok(a.commutator(&b).expect("uniform dimension"))
            }
            Some(_) => err(pos, "unexpected token"),
            None => err(pos, "unexpected end of input"),
        }
    }
}

fn format_scalar_factor(c: &Scalar, has_tail: bool, out: &mut String) {
    let minus_one = -Scalar::one();
    if !has_tail {
        out.push_str(&c.to_string());
        return;
    }
    if *c == Scalar::one() {
        return;
    }
    if *c == minus_one {
        out.push('-');
        return;
    }
    let s = c.to_string();
    // Sums need parentheses in a product position.
    if c.is_real() || c.re.is_zero() {
        out.push_str(&s);
    } else {
        out.push('(');
        out.push_str(&s);
        out.push(')');
    }
    out.push('*');
}

fn push_vars(prefix: char, idx: &MultiIndex, out: &mut String, first: &mut bool) {
    for (k, &e) in idx.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !*first {
            out.push('*');
        }
        *first = false;
        out.push(prefix);
        out.push_str(&(k + 1).to_string());
        if e > 1 {
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

/// Deterministic normal-form rendering of an operator in DSL syntax.
pub fn format_weyl(e: &WeylElement) -> String {
    let mut pieces: Vec<String> = Vec::new();
    let mut entries: Vec<_> = e.terms().collect();
    entries.sort_by(|a, b| b.0.cmp(a.0));
    for (alpha, p) in entries {
        let mut monos: Vec<_> = p.terms().collect();
        monos.sort_by(|a, b| b.0.cmp(a.0));
        for (m, c) in monos {
            let mut s = String::new();
            let has_tail = m.total() > 0 || alpha.total() > 0;
            format_scalar_factor(c, has_tail, &mut s);
            let mut first = true;
            push_vars('z', m, &mut s, &mut first);
            push_vars('d', alpha, &mut s, &mut first);
            pieces.push(s);
        }
    }
    if pieces.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, piece) in pieces.iter().enumerate() {
        if k == 0 {
            out.push_str(piece);
        } else if let Some(rest) = piece.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(piece);
        }
    }
    out
}

impl fmt::Display for ParseErrorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.0 {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Helper used by the CLI to show several diagnostics at once.
#[derive(Debug)]
pub struct ParseErrorList(pub Vec<ParseError>);
