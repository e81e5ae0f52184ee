//! Small recursive-descent parser for arithmetic expressions.
//!
//! Grammar: sums of products of powers; atoms are numbers, identifiers,
//! bracketed literals `[...]` and parenthesised expressions. Juxtaposition
//! is not multiplication; write `*`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::polynomial::Polynomial;
use super::ring::RingSpec;
use crate::coefficients::LocalRational;
use crate::error::{Error, Result};

/// Value domain the parser evaluates into.
pub trait ExprContext {
    type Value: Clone;
    fn constant(&self, c: LocalRational) -> Result<Self::Value>;
    /// Identifiers and bracketed literals (passed with their brackets).
    fn symbol(&self, name: &str) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: &Self::Value) -> Result<Self::Value>;
    fn scale(&self, a: &Self::Value, c: &LocalRational) -> Result<Self::Value>;
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Bracket(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(text.parse().map_err(|_| Error::Parse(text.clone()))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if c == '[' {
            let start = i;
            while i < chars.len() && chars[i] != ']' {
                i += 1;
            }
            if i == chars.len() {
                return Err(Error::Parse("unterminated '['".into()));
            }
            i += 1;
            out.push(Token::Bracket(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

/// Parsed value, keeping pure constants separate so division and exponents stay exact.
#[derive(Clone)]
enum Val<T> {
    Const(LocalRational),
    Value(T),
}

struct Parser<'a, C: ExprContext> {
    ctx: &'a C,
    tokens: Vec<Token>,
    pos: usize,
}

impl<C: ExprContext> Parser<'_, C> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn lift(&self, v: Val<C::Value>) -> Result<C::Value> {
        match v {
            Val::Const(c) => self.ctx.constant(c),
            Val::Value(x) => Ok(x),
        }
    }

    fn add(&self, a: Val<C::Value>, b: Val<C::Value>) -> Result<Val<C::Value>> {
        match (a, b) {
            (Val::Const(x), Val::Const(y)) => Ok(Val::Const(&x + &y)),
            (a, b) => Ok(Val::Value(self.ctx.add(&self.lift(a)?, &self.lift(b)?)?)),
        }
    }

    fn mul(&self, a: Val<C::Value>, b: Val<C::Value>) -> Result<Val<C::Value>> {
        match (a, b) {
            (Val::Const(x), Val::Const(y)) => Ok(Val::Const(&x * &y)),
            (Val::Const(x), Val::Value(v)) | (Val::Value(v), Val::Const(x)) => Ok(Val::Value(self.ctx.scale(&v, &x)?)),
            (Val::Value(x), Val::Value(y)) => Ok(Val::Value(self.ctx.mul(&x, &y)?)),
        }
    }

    fn neg(&self, a: Val<C::Value>) -> Result<Val<C::Value>> {
        match a {
            Val::Const(x) => Ok(Val::Const(-x)),
            Val::Value(v) => Ok(Val::Value(self.ctx.neg(&v)?)),
        }
    }

    fn expr(&mut self) -> Result<Val<C::Value>> {
        let mut acc = if self.eat('-') {
            let t = self.term()?;
            self.neg(t)?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.add(acc, t)?;
            } else if self.eat('-') {
                let t = self.term()?;
                let t = self.neg(t)?;
                acc = self.add(acc, t)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Val<C::Value>> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                let f = self.power()?;
                acc = self.mul(acc, f)?;
            } else if self.eat('/') {
                match self.power()? {
                    Val::Const(c) => acc = self.mul(acc, Val::Const(c.inv()?))?,
                    Val::Value(_) => return Err(Error::Parse("division by a non-constant".into())),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Val<C::Value>> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = match self.tokens.get(self.pos) {
            Some(Token::Num(n)) => u32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?,
            _ => return Err(Error::Parse("expected an exponent".into())),
        };
        self.pos += 1;
        match base {
            Val::Const(c) => Ok(Val::Const(c.pow(e))),
            Val::Value(v) => {
                let mut acc = Val::Const(LocalRational::one());
                for _ in 0..e {
                    acc = self.mul(acc, Val::Value(v.clone()))?;
                }
                Ok(acc)
            }
        }
    }

    fn atom(&mut self) -> Result<Val<C::Value>> {
        let tok = self.peek().cloned().ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Token::Num(n) => Ok(Val::Const(LocalRational::from_integer(n))),
            Token::Ident(s) | Token::Bracket(s) => Ok(Val::Value(self.ctx.symbol(&s)?)),
            Token::Op('(') => {
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(v)
            }
            Token::Op('-') => {
                let v = self.power()?;
                self.neg(v)
            }
            Token::Op(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
        }
    }
}

/// Evaluate `input` in the given context.
pub fn parse_with<C: ExprContext>(ctx: &C, input: &str) -> Result<C::Value> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { ctx, tokens, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    p.lift(v)
}

struct PolyContext<'a>(&'a Arc<RingSpec>);

impl ExprContext for PolyContext<'_> {
    type Value = Polynomial;

    fn constant(&self, c: LocalRational) -> Result<Polynomial> {
        Polynomial::constant(self.0, c)
    }

    fn symbol(&self, name: &str) -> Result<Polynomial> {
        Polynomial::var(self.0, name)
    }

    fn add(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        a.add(b)
    }

    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        a.mul(b)
    }

    fn neg(&self, a: &Polynomial) -> Result<Polynomial> {
        Ok(a.neg())
    }

    fn scale(&self, a: &Polynomial, c: &LocalRational) -> Result<Polynomial> {
        a.scale(c)
    }
}

/// Parse a polynomial in the generators of `ring`, e.g. `"-2*a1^2 + 5*a2"`.
pub fn parse_polynomial(ring: &Arc<RingSpec>, input: &str) -> Result<Polynomial> {
    parse_with(&PolyContext(ring), input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedpoly::CoefficientMode;

    fn ring() -> Arc<RingSpec> {
        RingSpec::curve_coefficients(5, 5, CoefficientMode::LocalZ5)
    }

    #[test]
    fn precedence() {
        let r = ring();
        let a = parse_polynomial(&r, "a1 + 2*a2^2").unwrap();
        let b = parse_polynomial(&r, "(a2*2)*a2 + a1").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_polynomial(&r, "-a1^2").unwrap().to_string(), "-a1^2");
        assert_eq!(parse_polynomial(&r, "(a1 - a1)").unwrap().to_string(), "0");
        assert_eq!(parse_polynomial(&r, "3/2*a1").unwrap().to_string(), "3/2*a1");
        assert_eq!(parse_polynomial(&r, "(1/5)^2*a1").unwrap().to_string(), "1/25*a1");
    }

    #[test]
    fn errors() {
        let r = ring();
        for bad in ["", "a1 +", "a9", "a1/a2", "(a1", "a1 $ a2", "a1^"] {
            assert!(parse_polynomial(&r, bad).is_err(), "{bad}");
        }
    }
}
