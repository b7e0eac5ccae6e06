//! Text format for polynomials.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (['*'] power)*
//! power  := atom ['^' integer]
//! atom   := number | 'x1' | 'x2' | '(' expr ')'
//! ```
//!
//! `3*x1^2*x2`, `3 x1^2 x2` and `x1^2(x1^2 - x2^2)` are all accepted.
//! Coefficients go through [`Coeff::parse_literal`], so rational
//! coefficient types parse decimal literals exactly.

use std::str::FromStr;

use thiserror::Error;

use super::BivarPoly;
use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParsePolyError {
    #[error("unexpected character {ch:?} at offset {pos}")]
    UnexpectedChar { pos: usize, ch: char },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("invalid number {text:?} at offset {pos}")]
    BadNumber { pos: usize, text: String },
    #[error("exponent at offset {pos} must be a non-negative integer")]
    BadExponent { pos: usize },
    #[error("unknown variable {name:?} at offset {pos}; expected x1 or x2")]
    UnknownVariable { pos: usize, name: String },
    #[error("empty polynomial")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Var(u8),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParsePolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::Open)),
            b')' => out.push((start, Tok::Close)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // scientific suffix, only when followed by a digit or sign+digit
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                out.push((start, Tok::Num(text[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let name = &text[start..i];
                let var = match name {
                    "x1" => 1,
                    "x2" => 2,
                    _ => {
                        return Err(ParsePolyError::UnknownVariable {
                            pos: start,
                            name: name.to_string(),
                        })
                    }
                };
                out.push((start, Tok::Var(var)));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParsePolyError::UnexpectedChar { pos: start, ch });
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, C> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    _c: std::marker::PhantomData<C>,
}

impl<C: Coeff> Parser<'_, C> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn unexpected(&self) -> ParsePolyError {
        match self.toks.get(self.pos) {
            None => ParsePolyError::UnexpectedEnd,
            Some((p, tok)) => ParsePolyError::UnexpectedChar {
                pos: *p,
                ch: match tok {
                    Tok::Num(s) => s.chars().next().unwrap_or('0'),
                    Tok::Var(_) => 'x',
                    Tok::Plus => '+',
                    Tok::Minus => '-',
                    Tok::Star => '*',
                    Tok::Caret => '^',
                    Tok::Open => '(',
                    Tok::Close => ')',
                },
            },
        }
    }

    fn expr(&mut self) -> Result<BivarPoly<C>, ParsePolyError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => self.pos += 1,
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BivarPoly<C>, ParsePolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(Tok::Num(_) | Tok::Var(_) | Tok::Open) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<BivarPoly<C>, ParsePolyError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.offset();
        match self.peek() {
            Some(Tok::Num(s)) => {
                let e: u32 = s.parse().map_err(|_| ParsePolyError::BadExponent { pos: at })?;
                self.pos += 1;
                Ok(base.pow(e))
            }
            None => Err(ParsePolyError::UnexpectedEnd),
            _ => Err(ParsePolyError::BadExponent { pos: at }),
        }
    }

    fn atom(&mut self) -> Result<BivarPoly<C>, ParsePolyError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                let c = C::parse_literal(&s).ok_or(ParsePolyError::BadNumber { pos: at, text: s })?;
                Ok(BivarPoly::constant(c))
            }
            Some(Tok::Var(1)) => {
                self.pos += 1;
                Ok(BivarPoly::x1())
            }
            Some(Tok::Var(_)) => {
                self.pos += 1;
                Ok(BivarPoly::x2())
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

impl<C: Coeff> FromStr for BivarPoly<C> {
    type Err = ParsePolyError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let toks = tokenize(text)?;
        if toks.is_empty() {
            return Err(ParsePolyError::Empty);
        }
        let mut parser = Parser::<C> {
            toks: &toks,
            pos: 0,
            end: text.len(),
            _c: std::marker::PhantomData,
        };
        let poly = parser.expr()?;
        if parser.pos != toks.len() {
            return Err(parser.unexpected());
        }
        Ok(poly)
    }
}
