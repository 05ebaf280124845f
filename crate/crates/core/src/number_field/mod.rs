//! Quadratic number fields, the prime above 2, classification of the
//! quadratic maps `x^2 + c` and preperiodic portraits.

mod classify;
mod portrait;
mod quad;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::dynamics::{Embedding, ExactCoeff};
use crate::error::{Error, Result};
use crate::padic::{make_field, qp, sqrt, unramified, PadicElement, Valuation};
use crate::poly::Ring;

pub use classify::{
    classify_quadratic, classify_with, three_cycle_obstruction, Check, Classification, LinearForm,
    ObstructionCertificate, QuadPeriodicPoint,
};
pub use portrait::{compute_portrait, Portrait, DEFAULT_DEPTH_CAP};
pub use quad::{rational_sqrt, QuadElement, QuadField};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum SplitKind {
    Split,
    Ramified,
    Inert,
}

/// How 2 decomposes in `Q(sqrt(delta))`, with the completion at the chosen
/// prime above 2.
#[derive(Clone, Debug, Serialize)]
pub struct SplittingData {
    pub kind: SplitKind,
    pub e: usize,
    pub f: usize,
    /// For split fields, which of the two primes above 2 is used: `false`
    /// sends `sqrt(delta)` to the root that is smaller mod 8.
    pub other_prime: bool,
    /// Image of `sqrt(delta)` in the completion, as text.
    pub sqrt_delta_image: String,
}

pub fn splitting_of_two(k: &QuadField) -> SplittingData {
    splitting_with_prime(k, false)
}

/// Like [`splitting_of_two`], optionally using the second prime above 2
/// when 2 splits.
pub fn splitting_with_prime(k: &QuadField, other_prime: bool) -> SplittingData {
    let d = k.delta();
    let (kind, e, f) = match d.rem_euclid(8) {
        1 => (SplitKind::Split, 1, 1),
        5 => (SplitKind::Inert, 1, 2),
        _ => (SplitKind::Ramified, 2, 1),
    };
    let mut data = SplittingData {
        kind,
        e,
        f,
        other_prime: other_prime && kind == SplitKind::Split,
        sqrt_delta_image: String::new(),
    };
    data.sqrt_delta_image = completion(k, &data, 24)
        .ok()
        .and_then(|emb| emb.sqrt_delta)
        .map(|s| s.to_string())
        .unwrap_or_default();
    data
}

/// The completion of `K` at the chosen prime above 2 with `n` digits of
/// precision, together with the image of `sqrt(delta)`.
pub fn completion(k: &QuadField, data: &SplittingData, n: i64) -> Result<Embedding> {
    let d = k.delta();
    match data.kind {
        SplitKind::Split => {
            let field = qp(2, n)?;
            let root = sqrt(&PadicElement::from_int(&field, d))?
                .ok_or_else(|| Error::InvalidInput(format!("{d} has no square root in Q_2")))?;
            let r8 = root
                .to_integer_mod()
                .expect("Q_2 element")
                .mod_floor(&BigInt::from(8));
            let smaller = r8 < BigInt::from(4);
            let root = if smaller != data.other_prime {
                root
            } else {
                -&root
            };
            Ok(Embedding::with_sqrt(&field, root))
        }
        SplitKind::Inert => {
            let field = unramified(2, 2, n)?;
            let root = sqrt(&PadicElement::from_int(&field, d))?
                .ok_or_else(|| Error::InvalidInput(format!("{d} has no square root in Q_4")))?;
            Ok(Embedding::with_sqrt(&field, root))
        }
        SplitKind::Ramified => {
            // sqrt(delta) = pi when delta = 2 mod 4, and pi + 1 when delta = 3 mod 4
            let (eisen, shift) = if d.rem_euclid(4) == 2 {
                (vec![vec![-d], vec![0], vec![1]], 0)
            } else {
                (vec![vec![1 - d], vec![2], vec![1]], 1)
            };
            let field = make_field(2, 1, 2, Some(eisen), n)?;
            let root = &PadicElement::uniformizer(&field) + &PadicElement::from_int(&field, shift);
            Ok(Embedding::with_sqrt(&field, root))
        }
    }
}

fn v2(n: &BigInt) -> i64 {
    n.trailing_zeros().map_or(0, |z| z as i64)
}

fn v2_rational(q: &BigRational) -> i64 {
    v2(q.numer()) - v2(q.denom())
}

/// Valuation at the chosen prime above 2, normalized so the uniformizer of
/// the completion has valuation 1. `None` for zero.
pub fn valuation_at_2(x: &QuadElement, data: &SplittingData) -> Result<Option<i64>> {
    if Ring::is_zero(x) {
        return Ok(None);
    }
    let vn = v2_rational(&x.norm());
    match data.kind {
        SplitKind::Inert => Ok(Some(vn / 2)),
        SplitKind::Ramified => Ok(Some(vn)),
        SplitKind::Split => {
            // v(x) + v(conj x) = v_2(N(x)) and v(conj x) >= min(v(a), v(b)),
            // so this many digits always suffice.
            let mut lo = v2_rational(x.a());
            if !Zero::is_zero(x.b()) {
                lo = lo.min(v2_rational(x.b()));
            }
            let n = (vn - lo).abs() + lo.abs() + 16;
            let k = QuadField::new(x.delta())?;
            let emb = completion(&k, data, n)?;
            match x.embed(&emb)?.valuation() {
                Valuation::Finite(v) => Ok(Some(v)),
                Valuation::AtLeast(v) => Err(Error::PrecisionExhausted(format!(
                    "image of {x} vanishes to {v} digits"
                ))),
            }
        }
    }
}

/// Exact square root in `K`, or `None`. Of the two roots the one with
/// positive rational part is returned (positive `sqrt(delta)` coefficient
/// when the rational part is zero).
pub fn is_square(k: &QuadField, z: &QuadElement) -> Option<QuadElement> {
    if Ring::is_zero(z) {
        return Some(k.from_int(0));
    }
    let zero = <BigRational as Zero>::zero();
    let delta = BigRational::from_integer(k.delta().into());
    let candidate = if Zero::is_zero(z.b()) {
        // w = x with x^2 = a, or w = y sqrt(delta) with delta y^2 = a
        match rational_sqrt(z.a()) {
            Some(x) => k.rational(x),
            None => k.element(zero, rational_sqrt(&(z.a() / &delta))?),
        }
    } else {
        // (x + y sqrt(delta))^2 = z gives x^2 = (a +- sqrt(N(z)))/2, y = b/(2x)
        let n = rational_sqrt(&z.norm())?;
        let two = BigRational::from_integer(2.into());
        [(z.a() + &n) / &two, (z.a() - &n) / &two]
            .iter()
            .find_map(|x2| {
                let x = rational_sqrt(x2).filter(|x| !Zero::is_zero(x))?;
                let y = z.b() / (&two * &x);
                Some(k.element(x, y))
            })?
    };
    let w = if candidate.a().is_negative()
        || (Zero::is_zero(candidate.a()) && candidate.b().is_negative())
    {
        Ring::neg(&candidate)
    } else {
        candidate
    };
    (Ring::mul(&w, &w) == *z).then_some(w)
}
