//! Parser for polynomial and rational-function strings.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | ident | '(' expr ')'
//! ```
//!
//! A rational literal `a/b` is the quotient of two integer atoms. No implicit
//! multiplication. Errors carry 1-based line and column.

use num_bigint::BigInt;
use num_traits::Zero;

use super::mratfun::RationalFunction;
use super::poly::{MultiPoly, MAX_EXPONENT};
use super::rational::{qi, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(src[s..i].parse().unwrap()), s));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[s..i].to_string()), s));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap();
            return Err(Error::parse_at(
                src,
                i,
                format!("unexpected character '{ch}'"),
            ));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: Vec<String>,
}

impl<'a> Parser<'a> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |t| t.1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse_at(self.src, self.offset(), msg)
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((Tok::Op(c), _)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let at = self.offset();
            let t = self.unary()?;
            if c == '*' {
                acc = acc.mul(&t);
            } else {
                acc = acc
                    .div(&t)
                    .ok_or_else(|| Error::parse_at(self.src, at, "division by zero"))?;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.toks.get(self.pos).cloned() {
                Some((Tok::Int(n), off)) => {
                    self.pos += 1;
                    let e: u32 = match u32::try_from(&n) {
                        Ok(e) if e < MAX_EXPONENT => e,
                        _ => return Err(Error::parse_at(self.src, off, "exponent too large")),
                    };
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(self.err("unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(RationalFunction::from_poly(MultiPoly::constant(
                &self.vars,
                qi(&n),
            ))),
            Tok::Ident(name) => {
                let p = MultiPoly::var(&self.vars, &name);
                self.vars = p.vars().to_vec();
                Ok(RationalFunction::from_poly(p))
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Op(c) => {
                self.pos -= 1;
                Err(self.err(format!("unexpected '{c}'")))
            }
        }
    }
}

fn run(src: &str, vars: &[&str]) -> Result<(RationalFunction, Vec<String>)> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::parse_at(src, 0, "empty expression"));
    }
    let mut p = Parser {
        src,
        toks,
        pos: 0,
        vars: vars.iter().map(|s| s.to_string()).collect(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok((e, p.vars))
}

/// Parse a polynomial. Variables in `vars` come first in the variable list;
/// others are appended in order of appearance.
pub fn parse_poly(src: &str, vars: &[&str]) -> Result<MultiPoly> {
    let (e, vs) = run(src, vars)?;
    match e.as_poly() {
        Some(p) => Ok(p.with_vars(&vs).unwrap()),
        None => Err(Error::parse_at(
            src,
            0,
            "expected a polynomial, found a quotient",
        )),
    }
}

/// Parse a rational function string such as `(3*x^2+1)/(2*y)`.
pub fn parse_rational_function(src: &str, vars: &[&str]) -> Result<RationalFunction> {
    let (e, vs) = run(src, vars)?;
    Ok(RationalFunction::new(
        e.num().with_vars(&vs).unwrap(),
        e.den().with_vars(&vs).unwrap(),
    ))
}

/// Parse a rational constant `a`, `-a` or `a/b`.
pub fn parse_rational(src: &str) -> Result<Q> {
    let p = parse_poly(src, &[])?;
    p.constant_value()
        .filter(|_| p.used_vars().is_empty())
        .ok_or_else(|| Error::parse_at(src, 0, "expected a rational number"))
        .map(|c| if c.is_zero() { Q::zero() } else { c })
}
