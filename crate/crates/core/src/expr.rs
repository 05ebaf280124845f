//! A small arithmetic expression language shared by the element, polynomial
//! and number-field parsers.
//!
//! Supports integers, identifiers, `sqrt(D)` for integer `D`, `+ - * / ^`,
//! parentheses and implicit multiplication (`2x`, `3(1+t)`). Exponents are
//! integer literals, optionally negative (`pi^-2`).

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Sqrt(BigInt),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
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
            out.push(Tok::Int(text.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in {:?}", self.pos, self.src))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(
                self.peek(),
                Some(Tok::Int(_) | Tok::Ident(_) | Tok::Op('('))
            ) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn signed_int(&mut self) -> Result<BigInt> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.err("expected integer")),
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let n = if self.eat('(') {
            let n = self.signed_int()?;
            if !self.eat(')') {
                return Err(self.err("expected ')'"));
            }
            n
        } else {
            self.signed_int()?
        };
        i64::try_from(n).map_err(|_| self.err("exponent out of range"))
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat('^') {
            let k = self.exponent()?;
            Ok(Expr::Pow(Box::new(base), k))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "sqrt" {
                    if !self.eat('(') {
                        return Err(self.err("expected '(' after sqrt"));
                    }
                    let d = self.signed_int()?;
                    if !self.eat(')') {
                        return Err(self.err("sqrt takes an integer argument"));
                    }
                    Ok(Expr::Sqrt(d))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err("expected a number, name or '('")),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        src: s,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Interpretation of expressions in some arithmetic.
pub trait ExprTarget {
    type Value: Clone;

    fn int(&self, n: &BigInt) -> Result<Self::Value>;
    fn var(&self, name: &str) -> Result<Self::Value>;
    fn sqrt(&self, d: &BigInt) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: &Self::Value) -> Result<Self::Value>;
    /// Negative exponents go through `div`.
    fn one(&self) -> Result<Self::Value> {
        self.int(&BigInt::from(1))
    }
}

pub fn eval<T: ExprTarget>(e: &Expr, t: &T) -> Result<T::Value> {
    match e {
        Expr::Int(n) => t.int(n),
        Expr::Var(v) => t.var(v),
        Expr::Sqrt(d) => t.sqrt(d),
        Expr::Neg(a) => t.neg(&eval(a, t)?),
        Expr::Add(a, b) => t.add(&eval(a, t)?, &eval(b, t)?),
        Expr::Sub(a, b) => t.sub(&eval(a, t)?, &eval(b, t)?),
        Expr::Mul(a, b) => t.mul(&eval(a, t)?, &eval(b, t)?),
        Expr::Div(a, b) => t.div(&eval(a, t)?, &eval(b, t)?),
        Expr::Pow(a, k) => {
            let base = eval(a, t)?;
            let mut acc = t.one()?;
            let mut sq = base;
            let mut m = k.unsigned_abs();
            while m > 0 {
                if m & 1 == 1 {
                    acc = t.mul(&acc, &sq)?;
                }
                m >>= 1;
                if m > 0 {
                    sq = t.mul(&sq, &sq)?;
                }
            }
            if *k < 0 {
                t.div(&t.one()?, &acc)
            } else {
                Ok(acc)
            }
        }
    }
}

impl Expr {
    /// Whether the expression mentions the named variable.
    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Expr::Var(v) => v == name,
            Expr::Int(_) | Expr::Sqrt(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.mentions(name),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.mentions(name) || b.mentions(name)
            }
        }
    }

    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Expr::Int(n) if n.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Ints;
    impl ExprTarget for Ints {
        type Value = i64;
        fn int(&self, n: &BigInt) -> Result<i64> {
            Ok(i64::try_from(n.clone()).unwrap())
        }
        fn var(&self, name: &str) -> Result<i64> {
            match name {
                "x" => Ok(3),
                _ => Err(Error::Parse(name.into())),
            }
        }
        fn sqrt(&self, d: &BigInt) -> Result<i64> {
            Ok((i64::try_from(d.clone()).unwrap() as f64).sqrt() as i64)
        }
        fn add(&self, a: &i64, b: &i64) -> Result<i64> {
            Ok(a + b)
        }
        fn sub(&self, a: &i64, b: &i64) -> Result<i64> {
            Ok(a - b)
        }
        fn mul(&self, a: &i64, b: &i64) -> Result<i64> {
            Ok(a * b)
        }
        fn div(&self, a: &i64, b: &i64) -> Result<i64> {
            Ok(a / b)
        }
        fn neg(&self, a: &i64) -> Result<i64> {
            Ok(-a)
        }
    }

    fn ev(s: &str) -> i64 {
        eval(&parse(s).unwrap(), &Ints).unwrap()
    }

    #[test]
    fn precedence_and_implicit_products() {
        assert_eq!(ev("x^4 + 2x + 1"), 88);
        assert_eq!(ev("-x^2"), -9);
        assert_eq!(ev("2(x+1)^2"), 32);
        assert_eq!(ev("1 - 2 - 3"), -4);
        assert_eq!(ev("12/2/3"), 2);
        assert_eq!(ev("sqrt(16)*x"), 12);
        assert_eq!(ev("x^(2)"), 9);
    }

    #[test]
    fn errors() {
        assert!(parse("").is_err());
        assert!(parse("1 +").is_err());
        assert!(parse("(1").is_err());
        assert!(parse("1 $ 2").is_err());
        assert!(parse("x^y").is_err());
        assert!(parse("sqrt(x)").is_err());
    }

    #[test]
    fn mentions() {
        assert!(parse("x^2 + c").unwrap().mentions("c"));
        assert!(!parse("x^2 + 1").unwrap().mentions("c"));
    }
}
