//! Parser for the textual polynomial syntax (`3/2*x^2*y - 1`, `x1_[1,2;1,1]`).

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::ParseError;
use crate::frac::Frac;
use crate::poly::PolyCtx;
use crate::ring::{Field, Ring};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Name(String, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn is_name_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_name_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::new(self.pos, msg))
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected a nonnegative integer exponent");
            }
            let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            let e: u32 = text
                .parse()
                .map_err(|_| ParseError::new(start, "exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(Expr::Int(text.parse().expect("digits")))
            }
            Some(c) if is_name_start(c) => {
                let start = self.pos;
                while self.pos < self.src.len() && is_name_char(self.src[self.pos]) {
                    self.pos += 1;
                }
                if self.src.get(self.pos) == Some(&b'[') {
                    while self.pos < self.src.len() && self.src[self.pos] != b']' {
                        self.pos += 1;
                    }
                    if self.pos == self.src.len() {
                        return Err(ParseError::new(start, "unterminated `[` in name"));
                    }
                    self.pos += 1;
                }
                let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let name: String = text.chars().filter(|c| !c.is_whitespace()).collect();
                Ok(Expr::Name(name, start))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    if !src.is_ascii() {
        let at = src.char_indices().find(|(_, c)| !c.is_ascii()).map(|(i, _)| i).unwrap_or(0);
        return Err(ParseError::new(at, "non-ASCII character"));
    }
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.sum()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Evaluates an expression into a fraction field, resolving names through `resolve`.
pub fn eval_frac<C: Field>(
    e: &Expr,
    ctx: PolyCtx<C::Ctx>,
    resolve: &dyn Fn(&str) -> Option<Frac<C>>,
) -> Result<Frac<C>, ParseError> {
    Ok(match e {
        Expr::Int(n) => {
            let q = BigRational::from_integer(n.clone());
            let s = Scalar::from_rational(C::characteristic(ctx.coeff), &q).expect("integers always map");
            Frac::from_scalar(ctx, &s)
        }
        Expr::Name(n, at) => {
            resolve(n).ok_or_else(|| ParseError::new(*at, alloc::format!("unknown name `{}`", n)))?
        }
        Expr::Neg(a) => eval_frac(a, ctx, resolve)?.neg(),
        Expr::Add(a, b) => eval_frac(a, ctx, resolve)?.add(&eval_frac(b, ctx, resolve)?),
        Expr::Sub(a, b) => eval_frac(a, ctx, resolve)?.sub(&eval_frac(b, ctx, resolve)?),
        Expr::Mul(a, b) => eval_frac(a, ctx, resolve)?.mul(&eval_frac(b, ctx, resolve)?),
        Expr::Div(a, b, at) => {
            let d = eval_frac(b, ctx, resolve)?;
            if d.is_zero() {
                return Err(ParseError::new(*at, "division by zero"));
            }
            eval_frac(a, ctx, resolve)?.div(&d)
        }
        Expr::Pow(a, k) => eval_frac(a, ctx, resolve)?.pow(*k),
    })
}

/// Names occurring in an expression, in order of first appearance.
pub fn names(e: &Expr) -> Vec<String> {
    fn walk(e: &Expr, out: &mut Vec<String>) {
        match e {
            Expr::Int(_) => {}
            Expr::Name(n, _) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => walk(a, out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(e, &mut out);
    out
}
