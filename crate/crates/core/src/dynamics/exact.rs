//! Polynomial maps with exact coefficients and their dynatomic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{self, ExprTarget};
use crate::padic::{FieldRef, PadicElement};
use crate::poly::{divisors, format_poly, mobius, CoeffDisplay, Field, Poly, Ring};

use super::local::LocalPoly;

/// Where exact coefficients land when mapped into a local field. Quadratic
/// coefficients need a chosen image of `sqrt(delta)`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub field: FieldRef,
    pub sqrt_delta: Option<PadicElement>,
}

impl Embedding {
    pub fn new(field: &FieldRef) -> Self {
        Embedding {
            field: field.clone(),
            sqrt_delta: None,
        }
    }

    pub fn with_sqrt(field: &FieldRef, sqrt_delta: PadicElement) -> Self {
        Embedding {
            field: field.clone(),
            sqrt_delta: Some(sqrt_delta),
        }
    }
}

/// Exact coefficient rings usable in [`DynPoly`].
pub trait ExactCoeff: Ring + CoeffDisplay {
    fn embed(&self, emb: &Embedding) -> Result<PadicElement>;
    fn is_rational(&self) -> bool;
}

impl ExactCoeff for BigRational {
    fn embed(&self, emb: &Embedding) -> Result<PadicElement> {
        Ok(PadicElement::from_rational(&emb.field, self))
    }

    fn is_rational(&self) -> bool {
        true
    }
}

/// A polynomial map `phi(X) = a_0 + a_1 X + ... + a_d X^d` with `d >= 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DynPoly<C> {
    poly: Poly<C>,
}

impl<C: Ring> DynPoly<C> {
    pub fn new(poly: Poly<C>) -> Result<Self> {
        match poly.degree() {
            Some(d) if d >= 2 => Ok(DynPoly { poly }),
            d => Err(Error::InvalidInput(format!(
                "a dynamical polynomial needs degree >= 2, got {}",
                d.map_or("-inf".to_string(), |d| d.to_string())
            ))),
        }
    }

    pub fn poly(&self) -> &Poly<C> {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().expect("degree checked at construction")
    }

    pub fn coeffs(&self) -> &[C] {
        self.poly.coeffs()
    }

    /// `phi^n(X)` as an exact polynomial.
    pub fn iterate_poly(&self, n: u32) -> Poly<C> {
        let mut acc = Poly::x();
        for _ in 0..n {
            acc = self.poly.compose(&acc);
        }
        acc
    }

    pub fn eval(&self, x: &C) -> C {
        self.poly.eval(x)
    }

    pub fn iterate(&self, x: &C, n: u64) -> C {
        let mut y = x.clone();
        for _ in 0..n {
            y = self.poly.eval(&y);
        }
        y
    }

    /// `Phi_n = prod_{i | n} (phi^i(X) - X)^mu(n/i)`, by exact division.
    pub fn dynatomic(&self, n: u64) -> Result<DynatomicPoly<C>> {
        if n == 0 {
            return Err(Error::InvalidInput("dynatomic index must be >= 1".into()));
        }
        let x = Poly::x();
        let mut num = Poly::constant(C::one());
        let mut den = Poly::constant(C::one());
        let mut iter = Poly::x();
        let mut done = 0;
        for i in divisors(n) {
            while done < i {
                iter = self.poly.compose(&iter);
                done += 1;
            }
            match mobius(n / i) {
                1 => num = num.mul(&iter.sub(&x)),
                -1 => den = den.mul(&iter.sub(&x)),
                _ => {}
            }
        }
        let (q, r) = num.div_rem(&den).ok_or_else(|| {
            Error::InexactDivision(format!("Phi_{n}: leading coefficient not invertible"))
        })?;
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!(
                "Phi_{n}: nonzero remainder"
            )));
        }
        Ok(DynatomicPoly { n, poly: q })
    }

    /// Checks `phi^m(X) - X = prod_{n | m} Phi_n(X)` exactly.
    pub fn verify_mobius(&self, m: u64) -> Result<bool> {
        let mut prod = Poly::constant(C::one());
        for n in divisors(m) {
            prod = prod.mul(self.dynatomic(n)?.poly());
        }
        Ok(prod == self.iterate_poly(m as u32).sub(&Poly::x()))
    }
}

impl<C: ExactCoeff> DynPoly<C> {
    /// Image over a local field; every coefficient must be integral there.
    pub fn image(&self, emb: &Embedding) -> Result<LocalPoly> {
        let coeffs = self
            .poly
            .coeffs()
            .iter()
            .map(|c| c.embed(emb))
            .collect::<Result<Vec<_>>>()?;
        for c in &coeffs {
            if !c.is_zero() && !c.is_integral() {
                return Err(Error::NotIntegral(c.shift()));
            }
        }
        LocalPoly::new(coeffs, self.poly.coeff(0).is_rational())
    }
}

impl<C: Ring + CoeffDisplay> fmt::Display for DynPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.poly, "x"))
    }
}

/// The `n`-th dynatomic polynomial of a map.
#[derive(Clone, Debug, PartialEq)]
pub struct DynatomicPoly<C> {
    n: u64,
    poly: Poly<C>,
}

impl<C: Ring> DynatomicPoly<C> {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn poly(&self) -> &Poly<C> {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }
}

impl<C: Field> DynatomicPoly<C> {
    /// No repeated roots over an algebraic closure: `gcd(Phi_n, Phi_n') = 1`.
    pub fn is_squarefree(&self) -> bool {
        self.poly.is_squarefree()
    }
}

/// `sum_{i | n} mu(n/i) d^i`, the degree of `Phi_n` for a degree-`d` map.
pub fn dynatomic_degree(d: u64, n: u64) -> i128 {
    divisors(n)
        .into_iter()
        .map(|i| mobius(n / i) as i128 * (d as i128).pow(i as u32))
        .sum()
}

#[derive(Serialize)]
pub struct DynatomicReport {
    pub n: u64,
    pub degree: usize,
    pub poly: String,
}

impl<C: Ring + CoeffDisplay> DynatomicPoly<C> {
    pub fn report(&self) -> DynatomicReport {
        DynatomicReport {
            n: self.n,
            degree: self.degree(),
            poly: format_poly(&self.poly, "x"),
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing

/// Lifts a constant-level target to polynomials in `x`.
pub struct PolyTarget<'a, T> {
    pub coeff: &'a T,
}

impl<T> ExprTarget for PolyTarget<'_, T>
where
    T: ExprTarget,
    T::Value: Ring,
{
    type Value = Poly<T::Value>;

    fn int(&self, n: &BigInt) -> Result<Self::Value> {
        Ok(Poly::constant(self.coeff.int(n)?))
    }

    fn var(&self, name: &str) -> Result<Self::Value> {
        if name == "x" || name == "X" {
            Ok(Poly::x())
        } else {
            Ok(Poly::constant(self.coeff.var(name)?))
        }
    }

    fn sqrt(&self, d: &BigInt) -> Result<Self::Value> {
        Ok(Poly::constant(self.coeff.sqrt(d)?))
    }

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        Ok(a.add(b))
    }

    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        Ok(a.sub(b))
    }

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        Ok(a.mul(b))
    }

    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        match b.degree() {
            Some(0) => {
                let c = &b.coeffs()[0];
                let coeffs = a
                    .coeffs()
                    .iter()
                    .map(|x| self.coeff.div(x, c))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Poly::new(coeffs))
            }
            None => Err(Error::Parse("division by zero".into())),
            _ => Err(Error::Parse("division by a non-constant polynomial".into())),
        }
    }

    fn neg(&self, a: &Self::Value) -> Result<Self::Value> {
        Ok(a.neg())
    }
}

/// Rational constants; `sqrt(D)` only for perfect squares.
pub struct RationalTarget;

fn exact_sqrt(d: &BigInt) -> Option<BigInt> {
    if d.is_negative() {
        return None;
    }
    let r = d.sqrt();
    (&r * &r == *d).then_some(r)
}

impl ExprTarget for RationalTarget {
    type Value = BigRational;

    fn int(&self, n: &BigInt) -> Result<BigRational> {
        Ok(BigRational::from_integer(n.clone()))
    }

    fn var(&self, name: &str) -> Result<BigRational> {
        Err(Error::Parse(format!("unknown name {name:?}")))
    }

    fn sqrt(&self, d: &BigInt) -> Result<BigRational> {
        exact_sqrt(d)
            .map(BigRational::from_integer)
            .ok_or_else(|| Error::Parse(format!("sqrt({d}) is not rational")))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
        Ok(a + b)
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
        Ok(a - b)
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
        Ok(a * b)
    }

    fn div(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
        if Zero::is_zero(b) {
            return Err(Error::Parse("division by zero".into()));
        }
        Ok(a / b)
    }

    fn neg(&self, a: &BigRational) -> Result<BigRational> {
        Ok(-a)
    }
}

/// Rational polynomials in a symbolic parameter `c`.
pub struct SymbolicTarget;

impl ExprTarget for SymbolicTarget {
    type Value = Poly<BigRational>;

    fn int(&self, n: &BigInt) -> Result<Self::Value> {
        Ok(Poly::constant(BigRational::from_integer(n.clone())))
    }

    fn var(&self, name: &str) -> Result<Self::Value> {
        match name {
            "c" => Ok(Poly::x()),
            _ => Err(Error::Parse(format!("unknown name {name:?}"))),
        }
    }

    fn sqrt(&self, d: &BigInt) -> Result<Self::Value> {
        Ok(Poly::constant(RationalTarget.sqrt(d)?))
    }

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        Ok(a.add(b))
    }

    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        Ok(a.sub(b))
    }

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        Ok(a.mul(b))
    }

    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        match b.degree() {
            Some(0) => Ok(a.scale(&(<BigRational as One>::one() / &b.coeffs()[0]))),
            _ => Err(Error::Parse(
                "only division by nonzero rational constants is allowed".into(),
            )),
        }
    }

    fn neg(&self, a: &Self::Value) -> Result<Self::Value> {
        Ok(a.neg())
    }
}

pub fn parse_poly_with<T>(s: &str, target: &T) -> Result<Poly<T::Value>>
where
    T: ExprTarget,
    T::Value: Ring,
{
    let e = expr::parse(s)?;
    expr::eval(&e, &PolyTarget { coeff: target })
}

/// Parses a polynomial in `x` with rational coefficients.
pub fn parse_rational_poly(s: &str) -> Result<DynPoly<BigRational>> {
    DynPoly::new(parse_poly_with(s, &RationalTarget)?)
}

/// Parses a polynomial in `x` whose coefficients may involve a symbol `c`.
pub fn parse_symbolic_poly(s: &str) -> Result<DynPoly<Poly<BigRational>>> {
    DynPoly::new(parse_poly_with(s, &SymbolicTarget)?)
}

/// `x^2 + c` with `c` substituted.
pub fn unicritical<C: Ring>(d: usize, c: C) -> DynPoly<C> {
    let mut coeffs = vec![C::zero(); d + 1];
    coeffs[0] = c;
    coeffs[d] = C::one();
    DynPoly::new(Poly::new(coeffs)).expect("degree >= 2")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn parse_examples() {
        let p = parse_rational_poly("x^4 + 2x + 1").unwrap();
        assert_eq!(p.coeffs(), &[q(1), q(2), q(0), q(0), q(1)]);
        let p = parse_rational_poly("x^2 - 71/48").unwrap();
        assert_eq!(p.coeffs()[0], BigRational::new((-71).into(), 48.into()));
        assert!(parse_rational_poly("x").is_err());
        assert!(parse_rational_poly("x^2 + c").is_err());
        assert!(parse_rational_poly("1/x").is_err());
    }

    #[test]
    fn low_dynatomic_polys_of_unicritical_family() {
        let phi = parse_symbolic_poly("x^2 + c").unwrap();
        assert_eq!(phi.dynatomic(1).unwrap().poly().to_string(), "x^2 - x + c");
        assert_eq!(
            phi.dynatomic(2).unwrap().poly().to_string(),
            "x^2 + x + c + 1"
        );
        let phi3 = phi.dynatomic(3).unwrap();
        assert_eq!(phi3.degree(), 6);
        assert_eq!(dynatomic_degree(2, 3), 6);
        let phi = parse_rational_poly("x^2 - 1").unwrap();
        assert_eq!(phi.dynatomic(1).unwrap().poly().to_string(), "x^2 - x - 1");
    }

    #[test]
    fn mobius_identity_small() {
        let phi = parse_symbolic_poly("x^2 + c").unwrap();
        for m in 1..=4 {
            assert!(phi.verify_mobius(m).unwrap());
        }
    }

    #[test]
    fn dynatomic_degrees() {
        assert_eq!(dynatomic_degree(2, 1), 2);
        assert_eq!(dynatomic_degree(2, 4), 12);
        assert_eq!(dynatomic_degree(3, 2), 6);
        assert_eq!(dynatomic_degree(2, 6), 54);
    }

    #[test]
    fn exact_iteration() {
        let phi = parse_rational_poly("x^2 - 1").unwrap();
        assert_eq!(phi.iterate(&q(0), 2), q(0));
        assert_eq!(phi.iterate(&q(1), 3), q(0));
        assert_eq!(phi.iterate_poly(2).to_string(), "x^4 - 2*x^2");
    }
}
