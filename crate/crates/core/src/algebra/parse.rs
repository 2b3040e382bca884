//! Parser for the expression text format.
//!
//! ```text
//! expr    := ['+'|'-'] product (('+'|'-') product)*
//! product := power (['*'] power)*
//! power   := prefix ['^' ['-'] INT]
//! prefix  := 'd' '[' IDX ']' prefix | 'conj' '(' expr ')' | atom
//! atom    := NUMBER | 'i' | 'j' | 'g' | 'gp' | 's' | 'R'
//!          | FIELD ['[' IDX (',' IDX)* ']'] | '(' expr ')'
//! ```
//!
//! Negative exponents are allowed on the parameters only.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{AlgebraError, Expression, Field, Params};
use crate::ring::{cr, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("arity error at byte {pos}: {field} takes {expected} index(es), got {found}")]
    Arity { pos: usize, field: String, expected: usize, found: usize },
    #[error("index error at byte {pos}: index {index} used more than twice in one term")]
    Index { pos: usize, index: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Arity { pos, .. } | ParseError::Index { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigRational),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    End,
}

fn syntax(pos: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { pos, message: message.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
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
            b'[' => out.push((Tok::LBrack, start)),
            b']' => out.push((Tok::RBrack, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b',' => out.push((Tok::Comma, start)),
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &src[start..i];
                let v = parse_rational(text).ok_or_else(|| syntax(start, format!("bad number {text}")))?;
                out.push((Tok::Num(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let mut name = src[start..i].to_string();
                if name == "W" && i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                    name.push(bytes[i] as char);
                    i += 1;
                }
                out.push((Tok::Ident(name), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character {ch:?}")));
            }
        }
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

/// Index names as written, with occurrence counts, so that a name used a third
/// time is rejected even after the first two were contracted.
type Raw = BTreeMap<String, usize>;

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        self.toks.get(self.at + 1).map(|t| &t.0).unwrap_or(&Tok::End)
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn lift(pos: usize, e: AlgebraError) -> ParseError {
        match e {
            AlgebraError::Index(index) => ParseError::Index { pos, index },
            AlgebraError::Arity { field, expected, found } => ParseError::Arity { pos, field, expected, found },
            other => syntax(pos, other.to_string()),
        }
    }

    fn expr(&mut self) -> Result<(Expression, Raw), ParseError> {
        let mut negate = match self.peek() {
            Tok::Plus => {
                self.bump();
                false
            }
            Tok::Minus => {
                self.bump();
                true
            }
            _ => false,
        };
        let mut acc = Expression::zero();
        let mut raw = Raw::new();
        loop {
            let (p, r) = self.product()?;
            acc = acc.add(&if negate { p.neg() } else { p });
            for (k, n) in r {
                let e = raw.entry(k).or_insert(0);
                *e = (*e).max(n);
            }
            match self.peek() {
                Tok::Plus => negate = false,
                Tok::Minus => negate = true,
                _ => return Ok((acc, raw)),
            }
            self.bump();
        }
    }

    fn product(&mut self) -> Result<(Expression, Raw), ParseError> {
        let (mut acc, mut raw) = self.power()?;
        loop {
            let mut pos = self.pos();
            let (rhs, r) = match self.peek() {
                Tok::Star => {
                    self.bump();
                    pos = self.pos();
                    if *self.peek() == Tok::Minus {
                        self.bump();
                        let (e, r) = self.power()?;
                        (e.neg(), r)
                    } else {
                        self.power()?
                    }
                }
                Tok::Ident(_) | Tok::Num(_) | Tok::LParen => self.power()?,
                _ => return Ok((acc, raw)),
            };
            for (k, n) in r {
                let e = raw.entry(k.clone()).or_insert(0);
                *e += n;
                if *e > 2 {
                    return Err(ParseError::Index { pos, index: k });
                }
            }
            acc = acc.mul(&rhs).map_err(|e| Self::lift(pos, e))?;
        }
    }

    fn power(&mut self) -> Result<(Expression, Raw), ParseError> {
        let start = self.pos();
        let (base, param, raw) = self.prefix()?;
        if *self.peek() != Tok::Caret {
            return Ok((base, raw));
        }
        self.bump();
        let exp_start = self.pos();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let pos = self.pos();
        let n = match self.bump() {
            Tok::Num(v) if v.is_integer() => v.to_integer().to_i32().ok_or_else(|| syntax(pos, "exponent too large"))?,
            _ => return Err(syntax(pos, "expected integer exponent")),
        };
        let n = if negative { -n } else { n };
        match param {
            Some(p) => Ok((Expression::param(Params { g: p.g * n, gp: p.gp * n, s: p.s * n, r: p.r * n }), raw)),
            None if n >= 0 => {
                let mut powered = Raw::new();
                for (k, c) in raw {
                    let c = c * n as usize;
                    if c > 2 {
                        return Err(ParseError::Index { pos: start, index: k });
                    }
                    powered.insert(k, c);
                }
                Ok((base.pow(n as u32).map_err(|e| Self::lift(start, e))?, powered))
            }
            None => Err(syntax(exp_start, "negative exponent allowed on g, gp, s, R only")),
        }
    }

    fn prefix(&mut self) -> Result<(Expression, Option<Params>, Raw), ParseError> {
        let start = self.pos();
        match (self.peek(), self.peek2()) {
            (Tok::Ident(d), Tok::LBrack) if d == "d" => {
                self.bump();
                self.bump();
                let idx = self.index()?;
                self.expect(Tok::RBrack, "']'")?;
                let (inner, _, mut raw) = self.prefix()?;
                let e = inner.derive(&idx).map_err(|e| Self::lift(start, e))?;
                let c = raw.entry(idx.clone()).or_insert(0);
                *c += 1;
                if *c > 2 {
                    return Err(ParseError::Index { pos: start, index: idx });
                }
                Ok((e, None, raw))
            }
            (Tok::Ident(c), Tok::LParen) if c == "conj" => {
                self.bump();
                self.bump();
                let (inner, raw) = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok((inner.conj(), None, raw))
            }
            _ => self.atom(),
        }
    }

    fn index(&mut self) -> Result<String, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(name) if name.bytes().all(|b| b.is_ascii_alphanumeric()) => Ok(name),
            _ => Err(syntax(pos, "expected index name")),
        }
    }

    fn atom(&mut self) -> Result<(Expression, Option<Params>, Raw), ParseError> {
        let start = self.pos();
        match self.bump() {
            Tok::Num(v) => Ok((Expression::constant(cr(v, BigRational::zero())), None, Raw::new())),
            Tok::LParen => {
                let (e, raw) = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok((e, None, raw))
            }
            Tok::Ident(name) => {
                let param = match name.as_str() {
                    "i" => return Ok((Expression::imag(1, 1), None, Raw::new())),
                    "j" => return Ok((Expression::j_pow(1), None, Raw::new())),
                    "g" => Some(Params::g(1)),
                    "gp" => Some(Params::gp(1)),
                    "s" => Some(Params::s(1)),
                    "R" => Some(Params::r(1)),
                    _ => None,
                };
                if let Some(p) = param {
                    return Ok((Expression::param(p), Some(p), Raw::new()));
                }
                let field = Field::from_name(&name).ok_or_else(|| syntax(start, format!("unknown identifier {name}")))?;
                let mut idx = Vec::new();
                if *self.peek() == Tok::LBrack {
                    self.bump();
                    loop {
                        idx.push(self.index()?);
                        match self.bump() {
                            Tok::Comma => continue,
                            Tok::RBrack => break,
                            _ => return Err(syntax(self.pos(), "expected ',' or ']'")),
                        }
                    }
                }
                if idx.len() != field.arity() {
                    return Err(ParseError::Arity {
                        pos: start,
                        field: field.name().into(),
                        expected: field.arity(),
                        found: idx.len(),
                    });
                }
                let refs: Vec<&str> = idx.iter().map(String::as_str).collect();
                let e = Expression::field(field, &refs).map_err(|e| Self::lift(start, e))?;
                let mut raw = Raw::new();
                for i in idx {
                    *raw.entry(i).or_insert(0) += 1;
                }
                Ok((e, None, raw))
            }
            Tok::End => Err(syntax(start, "unexpected end of input")),
            other => Err(syntax(start, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses the text format into a canonical expression.
pub fn parse(src: &str) -> Result<Expression, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let (e, _) = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_style_inputs() {
        let e = parse("d[mu]W3[nu]*d[mu]W3[nu]").unwrap();
        assert_eq!(e.len(), 1);
        assert!(e.free_indices().is_empty());
        let e = parse("W+[mu]W-[mu] + 2 j^2 rho^2").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(parse("g^2 g^-2").unwrap(), parse("1").unwrap());
        assert_eq!(parse("d[mu]d[nu]rho").unwrap(), parse("d[nu]d[mu]rho").unwrap());
    }

    #[test]
    fn arity_errors_carry_position() {
        match parse("rho + A1[mu,nu]") {
            Err(ParseError::Arity { pos, expected: 1, found: 2, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("rho[mu]"), Err(ParseError::Arity { pos: 0, .. })));
        assert!(matches!(parse("Z"), Err(ParseError::Arity { .. })));
    }

    #[test]
    fn index_errors_carry_position() {
        match parse("Z[mu]*Z[mu]*Aem[mu]") {
            Err(ParseError::Index { index, pos }) => {
                assert_eq!(index, "mu");
                assert_eq!(pos, 12);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("d[mu]Z[mu]*Z[mu]"), Err(ParseError::Index { .. })));
        assert!(matches!(parse("Z[mu]^3"), Err(ParseError::Index { .. })));
        assert!(parse("(Z[mu] + Aem[mu])*W3[mu]").is_ok());
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse("Z[mu] +"), Err(ParseError::Syntax { pos: 7, .. })));
        assert!(matches!(parse("foo"), Err(ParseError::Syntax { pos: 0, .. })));
        assert!(matches!(parse("Z[mu]^-1"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("(rho"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("rho $"), Err(ParseError::Syntax { pos: 4, .. })));
    }

    #[test]
    fn charged_fields_lex_with_sign() {
        let a = parse("W+[mu]*W-[mu]").unwrap();
        let b = parse("W-[nu] W+[nu]").unwrap();
        assert_eq!(a, b);
        let c = parse("W3[mu]-W+[mu]").unwrap();
        assert_eq!(c.len(), 2);
    }
}
