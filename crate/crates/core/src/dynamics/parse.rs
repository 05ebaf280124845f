//! Parsing polynomials with local-field coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::exact::RationalTarget;
use super::local::LocalPoly;
use crate::error::{Error, Result};
use crate::expr::{self, ExprTarget};
use crate::padic::{ElementTarget, FieldRef, PadicElement};

/// Polynomials in `x` as coefficient vectors, constant term first.
struct LocalTarget<'a> {
    elem: ElementTarget<'a>,
}

impl LocalTarget<'_> {
    fn zero(&self) -> PadicElement {
        PadicElement::zero(self.elem.field)
    }
}

impl ExprTarget for LocalTarget<'_> {
    type Value = Vec<PadicElement>;

    fn int(&self, n: &BigInt) -> Result<Self::Value> {
        Ok(vec![self.elem.int(n)?])
    }

    fn var(&self, name: &str) -> Result<Self::Value> {
        match name {
            "x" | "X" => Ok(vec![self.zero(), PadicElement::one(self.elem.field)]),
            _ => Ok(vec![self.elem.var(name)?]),
        }
    }

    fn sqrt(&self, d: &BigInt) -> Result<Self::Value> {
        Ok(vec![self.elem.sqrt(d)?])
    }

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        (0..a.len().max(b.len()))
            .map(|i| {
                let z = self.zero();
                a.get(i).unwrap_or(&z).checked_add(b.get(i).unwrap_or(&z))
            })
            .collect()
    }

    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        self.add(a, &self.neg(b)?)
    }

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].checked_add(&x.checked_mul(y)?)?;
            }
        }
        Ok(out)
    }

    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        if b.len() != 1 {
            return Err(Error::Parse("division by a non-constant polynomial".into()));
        }
        a.iter().map(|x| x.checked_div(&b[0])).collect()
    }

    fn neg(&self, a: &Self::Value) -> Result<Self::Value> {
        Ok(a.iter().map(|x| -x).collect())
    }
}

/// Constant term of a polynomial expression if it is visibly rational;
/// `None` when it involves field generators.
struct ConstTarget;

impl ExprTarget for ConstTarget {
    type Value = Option<BigRational>;

    fn int(&self, n: &BigInt) -> Result<Self::Value> {
        Ok(Some(BigRational::from_integer(n.clone())))
    }

    fn var(&self, name: &str) -> Result<Self::Value> {
        Ok(matches!(name, "x" | "X").then(BigRational::zero))
    }

    fn sqrt(&self, d: &BigInt) -> Result<Self::Value> {
        Ok(RationalTarget.sqrt(d).ok())
    }

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        Ok(a.as_ref().zip(b.as_ref()).map(|(x, y)| x + y))
    }

    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        Ok(a.as_ref().zip(b.as_ref()).map(|(x, y)| x - y))
    }

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        match (a, b) {
            (Some(z), _) | (_, Some(z)) if z.is_zero() => Ok(Some(BigRational::zero())),
            (Some(x), Some(y)) => Ok(Some(x * y)),
            _ => Ok(None),
        }
    }

    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        match (a, b) {
            (Some(z), _) if z.is_zero() => Ok(Some(BigRational::zero())),
            (Some(x), Some(y)) if !y.is_zero() => Ok(Some(x / y)),
            _ => Ok(None),
        }
    }

    fn neg(&self, a: &Self::Value) -> Result<Self::Value> {
        Ok(a.as_ref().map(|x| -x))
    }
}

/// Parses a polynomial in `x` whose coefficients are field elements written
/// with `pi`, `t`, `i`, `sqrt(D)` and rationals. The constant term counts as
/// rational when it is written without field generators.
pub fn parse_local_poly(field: &FieldRef, s: &str) -> Result<LocalPoly> {
    let e = expr::parse(s)?;
    let coeffs = expr::eval(
        &e,
        &LocalTarget {
            elem: ElementTarget { field },
        },
    )?;
    let a0_rational = expr::eval(&e, &ConstTarget)?.is_some();
    LocalPoly::new(coeffs, a0_rational)
}
