//! Newton-Hensel lifting and square roots.

use num_rational::BigRational;

use super::element::PadicElement;
use super::field::FieldRef;
use crate::error::{Error, Result};

/// Something whose roots can be refined by Newton iteration.
pub trait NewtonTarget {
    /// Returns `(g(x), g'(x))`.
    fn eval_with_derivative(&self, x: &PadicElement) -> (PadicElement, PadicElement);
}

/// Polynomial with coefficients in a local field, lowest degree first.
#[derive(Clone, Debug)]
pub struct PadicPoly {
    coeffs: Vec<PadicElement>,
}

impl PadicPoly {
    pub fn new(coeffs: Vec<PadicElement>) -> Self {
        PadicPoly { coeffs }
    }

    pub fn from_rationals(field: &FieldRef, coeffs: &[BigRational]) -> Self {
        PadicPoly {
            coeffs: coeffs
                .iter()
                .map(|c| PadicElement::from_rational(field, c))
                .collect(),
        }
    }

    pub fn from_ints(field: &FieldRef, coeffs: &[i64]) -> Self {
        PadicPoly {
            coeffs: coeffs
                .iter()
                .map(|&c| PadicElement::from_int(field, c))
                .collect(),
        }
    }

    pub fn coeffs(&self) -> &[PadicElement] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &PadicElement) -> PadicElement {
        let mut acc = PadicElement::zero(x.field());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> PadicPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &PadicElement::from_int(c.field(), i as i64))
            .collect();
        PadicPoly { coeffs }
    }
}

impl NewtonTarget for PadicPoly {
    fn eval_with_derivative(&self, x: &PadicElement) -> (PadicElement, PadicElement) {
        let mut g = PadicElement::zero(x.field());
        let mut dg = PadicElement::zero(x.field());
        for c in self.coeffs.iter().rev() {
            dg = &(&dg * x) + &g;
            g = &(&g * x) + c;
        }
        (g, dg)
    }
}

/// Newton iteration from `x0` to the unique root `r` with
/// `v(r - x0) > v(g'(x0))`, returned modulo `pi^target_prec`.
pub fn hensel_lift<T: NewtonTarget + ?Sized>(
    g: &T,
    x0: &PadicElement,
    target_prec: i64,
) -> Result<PadicElement> {
    let field = x0.field().clone();
    let n = field.precision();
    let mut x = x0.lifted();
    let (g0, d0) = g.eval_with_derivative(&x);
    let s = d0.valuation().finite().ok_or_else(|| {
        Error::HenselConditionFailed("g'(x0) vanishes to the working precision".into())
    })?;
    let v0 = g0.valuation().lower_bound();
    if v0 <= 2 * s {
        return Err(Error::HenselConditionFailed(format!(
            "v(g(x0)) = {v0}, v(g'(x0)) = {s}"
        )));
    }
    if target_prec > n - s {
        return Err(Error::PrecisionExhausted(format!(
            "target precision {target_prec} exceeds N - v(g'(x0)) = {}",
            n - s
        )));
    }
    // quadratic convergence: ~log2(N) steps, with slack for slow starts
    for _ in 0..(2 * 64 - (n as u64).leading_zeros() as usize + 8) {
        let (gx, dx) = g.eval_with_derivative(&x);
        if gx.valuation().lower_bound() >= target_prec + s {
            return Ok(x.truncate(target_prec));
        }
        let step = gx.checked_div(&dx)?;
        x = (&x - &step).lifted();
    }
    Err(Error::PrecisionExhausted(
        "Newton iteration did not converge".into(),
    ))
}

/// Square root, or `None` when `a` is certified not to be a square.
///
/// The returned root is the one of `±r` whose digit vector is smaller.
pub fn sqrt(a: &PadicElement) -> Result<Option<PadicElement>> {
    let field = a.field().clone();
    if a.is_zero() {
        let prec = a.precision().div_euclid(2) + a.precision().rem_euclid(2);
        return Ok(Some(PadicElement::zero_with_precision(&field, prec)));
    }
    let v = a.shift();
    if v % 2 != 0 {
        return Ok(None);
    }
    let pi_v = PadicElement::uniformizer(&field).pow(v.unsigned_abs());
    let unit = if v >= 0 {
        a.checked_div(&pi_v)?
    } else {
        a.checked_mul(&pi_v)?
    };
    let rel = unit.relative_precision();
    let root = if field.p() == 2 {
        sqrt_unit_two(&unit, rel)?
    } else {
        sqrt_unit_odd(&unit, rel)?
    };
    let Some(root) = root else { return Ok(None) };
    let neg = -&root;
    let root = if neg.integral_digits(root.precision() as usize)?
        < root.integral_digits(root.precision() as usize)?
    {
        neg
    } else {
        root
    };
    let half = PadicElement::uniformizer(&field).pow((v / 2).unsigned_abs());
    Ok(Some(if v >= 0 {
        root.checked_mul(&half)?
    } else {
        root.checked_div(&half)?
    }))
}

fn square_target(u: &PadicElement) -> PadicPoly {
    let field = u.field();
    PadicPoly::new(vec![
        -u.lifted(),
        PadicElement::zero(field),
        PadicElement::one(field),
    ])
}

fn sqrt_unit_odd(u: &PadicElement, rel: i64) -> Result<Option<PadicElement>> {
    let field = u.field();
    let k = field.residue_field();
    let Some(r) = k.sqrt(&u.residue()?) else {
        return Ok(None);
    };
    let x0 = PadicElement::from_residue(field, &r);
    let root = hensel_lift(&square_target(u), &x0, field.precision())?;
    Ok(Some(root.truncate(rel)))
}

fn sqrt_unit_two(u: &PadicElement, rel: i64) -> Result<Option<PadicElement>> {
    let field = u.field();
    let e = field.e() as i64;
    if rel < 2 * e + 1 {
        return Err(Error::PrecisionTooLowToDecide(format!(
            "a 2-adic unit must be known mod pi^{} to decide squareness, have pi^{rel}",
            2 * e + 1
        )));
    }
    let k = field.residue_field();
    let q = k.size();
    let count = q.pow(e as u32 + 1);
    let target = u.truncate(2 * e + 1);
    for idx in 0..count {
        let mut rest = idx;
        let digits: Vec<_> = (0..=e)
            .map(|_| {
                let d = k.from_index(rest % q);
                rest /= q;
                d
            })
            .collect();
        if digits[0].is_zero() {
            continue;
        }
        let x0 = PadicElement::from_digits(field, &digits, field.precision());
        if (&x0 * &x0).congruent(&target) {
            let root = hensel_lift(&square_target(u), &x0, field.precision() - e)?;
            return Ok(Some(root.truncate(rel - e)));
        }
    }
    Ok(None)
}
