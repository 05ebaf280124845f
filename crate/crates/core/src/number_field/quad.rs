//! Exact arithmetic in quadratic fields `Q(sqrt(delta))`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::dynamics::{Embedding, ExactCoeff};
use crate::error::{Error, Result};
use crate::expr::{self, ExprTarget};
use crate::padic::PadicElement;
use crate::poly::{self, CoeffDisplay};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct QuadField {
    delta: i64,
}

fn is_squarefree(n: i64) -> bool {
    let mut m = n.unsigned_abs();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d * d) {
            return false;
        }
        if m.is_multiple_of(d) {
            m /= d;
        }
        d += 1;
    }
    true
}

impl QuadField {
    pub fn new(delta: i64) -> Result<Self> {
        if delta == 0 || delta == 1 || !is_squarefree(delta) {
            return Err(Error::InvalidInput(format!(
                "delta = {delta} must be a squarefree integer other than 0 and 1"
            )));
        }
        Ok(QuadField { delta })
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn element(&self, a: BigRational, b: BigRational) -> QuadElement {
        QuadElement {
            a,
            b,
            delta: self.delta,
        }
    }

    pub fn from_int(&self, n: i64) -> QuadElement {
        self.rational(BigRational::from_integer(n.into()))
    }

    pub fn rational(&self, a: BigRational) -> QuadElement {
        QuadElement {
            a,
            b: <BigRational as Zero>::zero(),
            delta: self.delta,
        }
    }

    pub fn sqrt_delta(&self) -> QuadElement {
        self.element(<BigRational as Zero>::zero(), <BigRational as One>::one())
    }

    /// `(1 + sqrt(delta))/2` when `delta = 1 mod 4`, else `sqrt(delta)`.
    pub fn integral_generator(&self) -> QuadElement {
        let half = BigRational::new(1.into(), 2.into());
        if self.delta.rem_euclid(4) == 1 {
            self.element(half.clone(), half)
        } else {
            self.sqrt_delta()
        }
    }

    pub fn parse(&self, s: &str) -> Result<QuadElement> {
        expr::eval(&expr::parse(s)?, self)
    }
}

/// `a + b sqrt(delta)`. Rational elements built through the generic ring
/// interface carry `delta = 0` and combine with any field.
#[derive(Clone, Debug)]
pub struct QuadElement {
    a: BigRational,
    b: BigRational,
    delta: i64,
}

fn join(d1: i64, d2: i64) -> i64 {
    match (d1, d2) {
        (0, d) | (d, 0) => d,
        (x, y) if x == y => x,
        (x, y) => panic!("elements of Q(sqrt({x})) and Q(sqrt({y})) cannot be combined"),
    }
}

impl QuadElement {
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn is_rational_value(&self) -> bool {
        self.b.is_zero()
    }

    fn delta_q(&self, d: i64) -> BigRational {
        BigRational::from_integer(d.into())
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - self.delta_q(self.delta) * &self.b * &self.b
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn conj(&self) -> QuadElement {
        QuadElement {
            a: self.a.clone(),
            b: -&self.b,
            delta: self.delta,
        }
    }

    /// Height: largest absolute numerator or denominator among `a`, `b`.
    pub fn height(&self) -> BigInt {
        [
            self.a.numer(),
            self.a.denom(),
            self.b.numer(),
            self.b.denom(),
        ]
        .into_iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or_default()
    }

    fn fmt_sqrt(&self) -> String {
        if self.delta == -1 {
            "i".to_string()
        } else {
            format!("sqrt({})", self.delta)
        }
    }

    fn b_term(&self, b: &BigRational) -> String {
        let s = self.fmt_sqrt();
        if b.is_one() {
            s
        } else {
            format!("{b}*{s}")
        }
    }
}

impl PartialEq for QuadElement {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.delta == other.delta)
    }
}

impl Eq for QuadElement {}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) if self.b.is_negative() => write!(f, "-{}", self.b_term(&-&self.b)),
            (true, false) => f.write_str(&self.b_term(&self.b)),
            (false, false) if self.b.is_negative() => {
                write!(f, "{} - {}", self.a, self.b_term(&-&self.b))
            }
            (false, false) => write!(f, "{} + {}", self.a, self.b_term(&self.b)),
        }
    }
}

impl Serialize for QuadElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl poly::Ring for QuadElement {
    fn zero() -> Self {
        QuadElement {
            a: <BigRational as Zero>::zero(),
            b: <BigRational as Zero>::zero(),
            delta: 0,
        }
    }

    fn one() -> Self {
        QuadElement {
            a: <BigRational as One>::one(),
            b: <BigRational as Zero>::zero(),
            delta: 0,
        }
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }

    fn add(&self, o: &Self) -> Self {
        QuadElement {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            delta: join(self.delta, o.delta),
        }
    }

    fn sub(&self, o: &Self) -> Self {
        QuadElement {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            delta: join(self.delta, o.delta),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let d = join(self.delta, o.delta);
        QuadElement {
            a: &self.a * &o.a + self.delta_q(d) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            delta: d,
        }
    }

    fn neg(&self) -> Self {
        QuadElement {
            a: -&self.a,
            b: -&self.b,
            delta: self.delta,
        }
    }

    fn try_div(&self, o: &Self) -> Option<Self> {
        Some(poly::Ring::mul(self, &poly::Field::inv(o)?))
    }

    fn from_i64(n: i64) -> Self {
        QuadElement {
            a: BigRational::from_integer(n.into()),
            b: <BigRational as Zero>::zero(),
            delta: 0,
        }
    }
}

impl poly::Field for QuadElement {
    fn inv(&self) -> Option<Self> {
        if poly::Ring::is_zero(self) {
            return None;
        }
        let n = self.norm();
        Some(QuadElement {
            a: &self.a / &n,
            b: -&self.b / &n,
            delta: self.delta,
        })
    }
}

impl CoeffDisplay for QuadElement {
    fn render(&self) -> (String, bool) {
        (self.to_string(), self.a.is_zero() || self.b.is_zero())
    }

    fn is_negative_atom(&self) -> bool {
        if self.b.is_zero() {
            self.a.is_negative()
        } else {
            self.a.is_zero() && self.b.is_negative()
        }
    }
}

impl ExactCoeff for QuadElement {
    fn embed(&self, emb: &Embedding) -> Result<PadicElement> {
        let a = PadicElement::from_rational(&emb.field, &self.a);
        if self.b.is_zero() {
            return Ok(a);
        }
        let s = emb.sqrt_delta.as_ref().ok_or_else(|| {
            Error::InvalidInput(
                "embedding a quadratic element needs an image of sqrt(delta)".into(),
            )
        })?;
        let b = PadicElement::from_rational(&emb.field, &self.b);
        a.checked_add(&b.checked_mul(s)?)
    }

    fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Square root of a rational number, if rational.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(
        exact_sqrt(q.numer())?,
        exact_sqrt(q.denom())?,
    ))
}

impl ExprTarget for QuadField {
    type Value = QuadElement;

    fn int(&self, n: &BigInt) -> Result<QuadElement> {
        Ok(self.rational(BigRational::from_integer(n.clone())))
    }

    fn var(&self, name: &str) -> Result<QuadElement> {
        let half = BigRational::new(1.into(), 2.into());
        match (name, self.delta) {
            ("i", -1) => Ok(self.sqrt_delta()),
            ("w" | "zeta3", -3) => Ok(self.element(-half.clone(), half)),
            _ => Err(Error::Parse(format!(
                "unknown name {name:?} in Q(sqrt({}))",
                self.delta
            ))),
        }
    }

    fn sqrt(&self, d: &BigInt) -> Result<QuadElement> {
        if let Some(r) = exact_sqrt(d) {
            return Ok(self.rational(BigRational::from_integer(r)));
        }
        let delta = BigInt::from(self.delta);
        if (d % &delta).is_zero() {
            if let Some(s) = exact_sqrt(&(d / &delta)) {
                return Ok(
                    self.element(<BigRational as Zero>::zero(), BigRational::from_integer(s))
                );
            }
        }
        Err(Error::Parse(format!(
            "sqrt({d}) does not lie in Q(sqrt({}))",
            self.delta
        )))
    }

    fn add(&self, a: &QuadElement, b: &QuadElement) -> Result<QuadElement> {
        Ok(poly::Ring::add(a, b))
    }

    fn sub(&self, a: &QuadElement, b: &QuadElement) -> Result<QuadElement> {
        Ok(poly::Ring::sub(a, b))
    }

    fn mul(&self, a: &QuadElement, b: &QuadElement) -> Result<QuadElement> {
        Ok(poly::Ring::mul(a, b))
    }

    fn div(&self, a: &QuadElement, b: &QuadElement) -> Result<QuadElement> {
        poly::Ring::try_div(a, b).ok_or_else(|| Error::Parse("division by zero".into()))
    }

    fn neg(&self, a: &QuadElement) -> Result<QuadElement> {
        Ok(poly::Ring::neg(a))
    }
}
