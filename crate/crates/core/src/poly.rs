//! Dense univariate polynomials over exact commutative rings.
//!
//! Everything here is exact: no truncation, no floating point. The ring
//! trait is deliberately small, covering what composition, Möbius products
//! and exact division by monic (or unit-led) divisors need.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A commutative ring with exact arithmetic.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    /// `self / other` when the quotient exists in the ring.
    fn try_div(&self, other: &Self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        let mut acc = Self::zero();
        let one = Self::one();
        let step = if n >= 0 { one } else { one.neg() };
        for _ in 0..n.unsigned_abs() {
            acc = acc.add(&step);
        }
        acc
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        let (q, r) = num_integer::Integer::div_rem(self, other);
        Zero::is_zero(&r).then_some(q)
    }
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_div(&self, other: &Self) -> Option<Self> {
        (!Zero::is_zero(other)).then(|| self / other)
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// Dense polynomial; `coeffs[i]` is the coefficient of `x^i`. The
/// representation is kept trimmed so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly {
            coeffs: vec![R::zero(), R::one()],
        }
    }

    pub fn monomial(c: R, degree: usize) -> Self {
        let mut coeffs = vec![R::zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(R::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Evaluate at a ring element by Horner's rule.
    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| {
            acc.mul(inner).add(&Poly::constant(c.clone()))
        })
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&R::from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::constant(R::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient and remainder, valid when the divisor's leading coefficient
    /// divides every leading coefficient encountered. Returns `None` otherwise.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead = divisor.leading()?.clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quot = vec![R::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let q = top.try_div(&lead)?;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&q.mul(dc));
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Some((Poly::new(quot), Poly::new(rem)))
    }

    /// Exact quotient; `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<F: Field> Poly<F> {
    pub fn make_monic(&self) -> Self {
        match self.leading().and_then(F::inv) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("field division");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// True when the polynomial has no repeated root over an algebraic closure.
    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        Poly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Poly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly::mul(self, other)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn try_div(&self, other: &Self) -> Option<Self> {
        self.div_exact(other)
    }
    fn from_i64(n: i64) -> Self {
        Poly::constant(R::from_i64(n))
    }
}

/// Coefficient types that know how to print themselves inside a polynomial.
pub trait CoeffDisplay {
    /// Render the coefficient; `atomic` is true when it needs no parentheses
    /// when followed by a variable.
    fn render(&self) -> (String, bool);
    fn is_negative_atom(&self) -> bool {
        false
    }
}

impl CoeffDisplay for BigInt {
    fn render(&self) -> (String, bool) {
        (self.to_string(), true)
    }
    fn is_negative_atom(&self) -> bool {
        self.is_negative()
    }
}

impl CoeffDisplay for BigRational {
    fn render(&self) -> (String, bool) {
        (self.to_string(), true)
    }
    fn is_negative_atom(&self) -> bool {
        self.is_negative()
    }
}

impl<R: Ring + CoeffDisplay> CoeffDisplay for Poly<R> {
    fn render(&self) -> (String, bool) {
        let terms = self.coeffs.iter().filter(|c| !c.is_zero()).count();
        (format_poly(self, "c"), terms <= 1)
    }
    fn is_negative_atom(&self) -> bool {
        let mut nonzero = self.coeffs.iter().filter(|c| !c.is_zero());
        match (nonzero.next(), nonzero.next()) {
            (Some(c), None) => c.is_negative_atom(),
            _ => false,
        }
    }
}

/// Format with variable `var`, highest degree first: `x^2 - x + 1`.
pub fn format_poly<R: Ring + CoeffDisplay>(p: &Poly<R>, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, c) in p.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let (mut body, atomic) = c.render();
        let negative = atomic && c.is_negative_atom();
        if negative {
            body = body[1..].to_string();
        }
        let sign = if negative { "-" } else { "+" };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if i == 0 {
            out.push_str(&body);
        } else if body == "1" {
            out.push_str(&mono);
        } else if atomic {
            out.push_str(&format!("{body}*{mono}"));
        } else {
            out.push_str(&format!("({body})*{mono}"));
        }
    }
    out
}

impl<R: Ring + CoeffDisplay> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self, "x"))
    }
}

/// Möbius function by trial division.
pub fn mobius(mut n: u64) -> i32 {
    assert!(n > 0);
    let mut result = 1;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            n /= q;
            if n.is_multiple_of(q) {
                return 0;
            }
            result = -result;
        }
        q += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> Poly<BigInt> {
        Poly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn arithmetic_basics() {
        let a = zp(&[1, 1]);
        let b = zp(&[-1, 1]);
        assert_eq!(a.mul(&b), zp(&[-1, 0, 1]));
        assert_eq!(a.add(&b), zp(&[0, 2]));
        assert_eq!(a.sub(&a), Poly::zero());
        assert_eq!(a.pow(3), zp(&[1, 3, 3, 1]));
    }

    #[test]
    fn compose_and_eval() {
        let phi = zp(&[-1, 0, 1]);
        let phi2 = phi.compose(&phi);
        assert_eq!(phi2, zp(&[0, 0, -2, 0, 1]));
        assert_eq!(phi2.eval(&BigInt::from(0)), BigInt::from(0));
    }

    #[test]
    fn exact_division_by_monic() {
        let a = zp(&[-1, 0, 0, 1]);
        let b = zp(&[-1, 1]);
        assert_eq!(a.div_exact(&b), Some(zp(&[1, 1, 1])));
        assert_eq!(zp(&[1, 0, 1]).div_exact(&b), None);
    }

    #[test]
    fn non_unit_leading_coefficient_over_z() {
        assert!(zp(&[1, 0, 1]).div_rem(&zp(&[0, 2])).is_none());
    }

    #[test]
    fn gcd_and_squarefree() {
        let q = |c: &[i64]| zp(c).map(|v| BigRational::from_integer(v.clone()));
        let g = q(&[-1, 0, 1]).gcd(&q(&[1, 2, 1]));
        assert_eq!(g, q(&[1, 1]));
        assert!(q(&[-1, 0, 1]).is_squarefree());
        assert!(!q(&[1, 2, 1]).is_squarefree());
    }

    #[test]
    fn mobius_and_divisors() {
        let mu: Vec<i32> = (1..=12).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn display() {
        assert_eq!(zp(&[1, -1, 1]).to_string(), "x^2 - x + 1");
        assert_eq!(zp(&[-3, 0, 2]).to_string(), "2*x^2 - 3");
        assert_eq!(Poly::<BigInt>::zero().to_string(), "0");
    }
}
