//! Periodic points of `x^2 + c` over quadratic fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::portrait::Portrait;
use super::quad::{QuadElement, QuadField};
use super::{completion, is_square, splitting_of_two, valuation_at_2, SplitKind, SplittingData};
use crate::dynamics::{unicritical, DynPoly, ExactCoeff};
use crate::error::{Error, Result};
use crate::padic::{unramified, PadicElement, DEFAULT_PRECISION};
use crate::poly::Ring;

#[derive(Clone, Debug, Serialize)]
pub struct QuadPeriodicPoint {
    pub value: QuadElement,
    pub period: u64,
}

/// One verified claim of a report.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub delta: i64,
    pub c: QuadElement,
    pub splitting: SplittingData,
    /// `None` when `c = 0`.
    pub valuation_of_c: Option<i64>,
    pub periodic_points: Vec<QuadPeriodicPoint>,
    pub count: usize,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub disclaimers: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub portrait: Option<Portrait>,
}

impl Classification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Exact period of `x` under `phi`, if at most `max_n`.
fn exact_period(phi: &DynPoly<QuadElement>, x: &QuadElement, max_n: u64) -> Option<u64> {
    let mut y = x.clone();
    for n in 1..=max_n {
        y = phi.eval(&y);
        if y == *x {
            return Some(n);
        }
    }
    None
}

/// Rational `r/s` with `|r|, s <= bound` and `r = a s mod m`, if any.
fn rational_reconstruct(a: &BigInt, m: &BigInt, bound: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::from(0), BigInt::from(1));
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if Zero::is_zero(&s1) || s1.abs() > *bound || !One::is_one(&s1.gcd(m)) {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Tries to recognize a point of the completion as an element of `K`.
///
/// The point is written in the integral basis `(1, g)` of the completion,
/// where `g` is the image of `omega = (1 + sqrt(delta))/2` (inert) or of
/// `sqrt(delta)` (ramified), and both coordinates are reconstructed.
fn recognize(
    k: &QuadField,
    data: &SplittingData,
    g_img: &PadicElement,
    x: &PadicElement,
) -> Option<(QuadElement, u32)> {
    let field = x.field();
    let digits = (x.precision() / field.e() as i64).max(2) as u32;
    let m = BigInt::from(2).pow(digits);
    let bound = BigInt::from(2).pow(digits / 2 - 1);
    let xs = x.integral_coordinates().ok()?;
    let (u, v) = if data.kind == SplitKind::Split {
        (xs[0].clone(), BigInt::from(0))
    } else {
        let gs = g_img.integral_coordinates().ok()?;
        let beta_inv = gs[1].modinv(&m)?;
        let v = (&xs[1] * beta_inv).mod_floor(&m);
        ((&xs[0] - &v * &gs[0]).mod_floor(&m), v)
    };
    let u = rational_reconstruct(&u, &m, &bound)?;
    let v = rational_reconstruct(&v, &m, &bound)?;
    let g = if data.kind == SplitKind::Split {
        k.from_int(0)
    } else {
        k.integral_generator()
    };
    Some((
        Ring::add(&k.rational(u), &Ring::mul(&k.rational(v), &g)),
        digits / 2 - 1,
    ))
}

pub fn classify_quadratic(k: &QuadField, c: &QuadElement) -> Result<Classification> {
    classify_with(k, c, &splitting_of_two(k), DEFAULT_PRECISION)
}

/// Exact periodic points of `x^2 + c` over `K`, cross-checked against the
/// completion at the prime described by `data`, computed to `n` digits.
pub fn classify_with(
    k: &QuadField,
    c: &QuadElement,
    data: &SplittingData,
    n: i64,
) -> Result<Classification> {
    let v = valuation_at_2(c, data)?;
    if let Some(v) = v.filter(|&v| v < 0) {
        let minus_half = k.rational(BigRational::new((-1).into(), 2.into()));
        let note = if *c == minus_half {
            "c = -1/2 is also the value excluded from the 2-cycle formula".to_string()
        } else {
            format!(
                "c must be integral at the prime above 2 of Q(sqrt({}))",
                k.delta()
            )
        };
        return Err(Error::NotIntegralAt2 {
            valuation: v.to_string(),
            note,
        });
    }
    let phi = unicritical(2, c.clone());
    let half = k.rational(BigRational::new(1.into(), 2.into()));
    let four_c = Ring::mul(&k.from_int(4), c);
    let mut points: Vec<QuadPeriodicPoint> = Vec::new();
    let push = |x: QuadElement, points: &mut Vec<QuadPeriodicPoint>| {
        if points.iter().all(|p| p.value != x) {
            let period =
                exact_period(&phi, &x, 2).expect("root of a period-1 or period-2 equation");
            points.push(QuadPeriodicPoint { value: x, period });
        }
    };
    // fixed points: x^2 - x + c = 0
    if let Some(w) = is_square(k, &Ring::sub(&k.from_int(1), &four_c)) {
        for s in [w.clone(), Ring::neg(&w)] {
            push(
                Ring::mul(&Ring::add(&k.from_int(1), &s), &half),
                &mut points,
            );
        }
    }
    // 2-cycles: x^2 + x + 1 + c = 0
    if let Some(w) = is_square(k, &Ring::sub(&k.from_int(-3), &four_c)) {
        for s in [w.clone(), Ring::neg(&w)] {
            push(
                Ring::mul(&Ring::add(&k.from_int(-1), &s), &half),
                &mut points,
            );
        }
    }

    let emb = completion(k, data, n)?;
    let local = phi.image(&emb)?;
    let local_points = local.periodic_points()?;
    let mut disclaimers = Vec::new();
    let g_img = k.integral_generator().embed(&emb)?;
    for lp in local_points.iter().filter(|lp| lp.period > 2) {
        match recognize(k, data, &g_img, &lp.approx) {
            Some((x, _)) if exact_period(&phi, &x, lp.period) == Some(lp.period) => {
                if points.iter().all(|p| p.value != x) {
                    points.push(QuadPeriodicPoint {
                        value: x,
                        period: lp.period,
                    });
                }
            }
            other => {
                let h = other.map_or_else(
                    || (n / data.e as i64 / 2 - 1).to_string(),
                    |(_, h)| h.to_string(),
                );
                disclaimers.push(format!(
                    "period-{} point above residue {} of the completion: no element of K found up to height 2^{h}",
                    lp.period, lp.residue
                ));
            }
        }
    }
    points.sort_by_key(|p| (p.period, p.value.to_string()));

    let count = points.len();
    let mut checks = Vec::new();
    let inert = data.kind == SplitKind::Inert;
    let allowed: &[usize] = if inert { &[0, 2, 4] } else { &[0, 2] };
    checks.push(Check::new(
        "count_allowed",
        allowed.contains(&count),
        format!("count {count} in {allowed:?}"),
    ));
    checks.push(Check::new(
        "count_not_three",
        count != 3,
        format!("count {count}"),
    ));
    let bound = 1usize << data.f;
    checks.push(Check::new(
        "residue_field_bound",
        count <= bound,
        format!("count {count} <= {bound}"),
    ));
    if !inert {
        let want = if v == Some(0) { 2 } else { 1 };
        let ok = points.iter().all(|p| p.period == want);
        checks.push(Check::new(
            "period_by_valuation",
            ok,
            format!(
                "v(c) = {}: every period should be {want}",
                v.map_or("inf".to_string(), |v| v.to_string())
            ),
        ));
    }
    if c.is_rational_value() {
        let r = c.a().numer();
        let f = data.f as u64;
        let m = if (r * BigInt::from(f)).is_even() {
            f
        } else {
            2 * f
        };
        let ok = points.iter().all(|p| m % p.period == 0);
        checks.push(Check::new(
            "rational_period_law",
            ok,
            format!("c rational with odd denominator, f = {f}: every period divides {m}"),
        ));
    }
    let mut unmatched = Vec::new();
    for p in &points {
        let img = p.value.embed(&emb)?;
        let hit = local_points
            .iter()
            .any(|lp| lp.period == p.period && lp.approx.congruent(&img));
        if !hit {
            unmatched.push(p.value.to_string());
        }
    }
    checks.push(Check::new(
        "embeds_in_completion",
        unmatched.is_empty(),
        if unmatched.is_empty() {
            format!(
                "{count} of {} periodic points of the completion are in K",
                local_points.len()
            )
        } else {
            format!("not periodic in the completion: {}", unmatched.join(", "))
        },
    ));

    Ok(Classification {
        delta: k.delta(),
        c: c.clone(),
        splitting: data.clone(),
        valuation_of_c: v,
        periodic_points: points,
        count,
        checks,
        disclaimers,
        portrait: None,
    })
}

/// The affine function `slope * v + intercept` of `v = v(tau)`.
#[derive(Clone, Debug, Serialize)]
pub struct LinearForm {
    pub claim: String,
    pub slope: i64,
    pub intercept: i64,
    /// `1` when the form is positive for every `v < 0`, `-1` when negative.
    pub sign_for_negative_v: i32,
}

impl LinearForm {
    fn new(claim: &str, slope: i64, intercept: i64) -> Self {
        let sign = if slope <= 0 && intercept >= 0 && (slope, intercept) != (0, 0) {
            1
        } else if slope >= 0 && intercept <= 0 && (slope, intercept) != (0, 0) {
            -1
        } else {
            0
        };
        LinearForm {
            claim: claim.to_string(),
            slope,
            intercept,
            sign_for_negative_v: sign,
        }
    }
}

/// Why `x^2 + c` has no 3-cycle over a field whose prime above 2 has
/// residue field `F_4`.
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionCertificate {
    /// `tau^6 + 2 tau^5 + 4 tau^4 + 8 tau^3 + 9 tau^2 + 4 tau + 1`, constant first.
    pub numerator: Vec<i64>,
    /// `(tau, numerator(tau))` over `F_4`.
    pub residue_values: Vec<(String, String)>,
    pub all_nonzero: bool,
    /// Valuation comparisons on the branch `v(tau) < 0`.
    pub branch: Vec<LinearForm>,
    pub branch_holds: bool,
}

impl ObstructionCertificate {
    pub fn verified(&self) -> bool {
        self.all_nonzero && self.branch_holds
    }
}

pub fn three_cycle_obstruction() -> ObstructionCertificate {
    let numerator = vec![1, 4, 9, 8, 4, 2, 1];
    let f4 = unramified(2, 2, 2)
        .expect("F_4 exists")
        .residue_field()
        .clone();
    let coeffs: Vec<_> = numerator.iter().map(|&a| f4.from_u64(a as u64)).collect();
    let residue_values: Vec<(String, String)> = f4
        .elements()
        .map(|t| (t.to_string(), f4.eval(&coeffs, &t)))
        .map(|(t, y)| (t, y.to_string()))
        .collect();
    let all_nonzero = residue_values.iter().all(|(_, y)| y != "0");
    let mut branch = Vec::new();
    // the degree-6 term strictly dominates the numerator
    for (i, &a) in numerator.iter().enumerate().take(6) {
        let va = BigInt::from(a).trailing_zeros().unwrap_or(0) as i64;
        branch.push(LinearForm::new(
            &format!("v({a} tau^{i}) - v(tau^6) > 0"),
            i as i64 - 6,
            va,
        ));
    }
    // v(tau + 1) = v(tau), so v(4 tau^2 (tau+1)^2) = 4 v + 2
    branch.push(LinearForm::new("v(1) - v(tau) > 0", -1, 0));
    branch.push(LinearForm::new("v(c) = 6 v - (4 v + 2) < 0", 2, -2));
    let n = branch.len();
    let branch_holds = branch[..n - 1].iter().all(|l| l.sign_for_negative_v == 1)
        && branch[n - 1].sign_for_negative_v == -1;
    ObstructionCertificate {
        numerator,
        residue_values,
        all_nonzero,
        branch,
        branch_holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(c: &Classification) -> Vec<(String, u64)> {
        c.periodic_points
            .iter()
            .map(|p| (p.value.to_string(), p.period))
            .collect()
    }

    #[test]
    fn golden_field_minus_one() {
        let k = QuadField::new(5).unwrap();
        let r = classify_quadratic(&k, &k.from_int(-1)).unwrap();
        assert_eq!(r.count, 4);
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(
            values(&r),
            vec![
                ("1/2 + 1/2*sqrt(5)".into(), 1),
                ("1/2 - 1/2*sqrt(5)".into(), 1),
                ("-1".into(), 2),
                ("0".into(), 2)
            ]
        );
    }

    #[test]
    fn eisenstein_field_minus_one() {
        let k = QuadField::new(-3).unwrap();
        let r = classify_quadratic(&k, &k.from_int(-1)).unwrap();
        assert_eq!(values(&r), vec![("-1".into(), 2), ("0".into(), 2)]);
        assert!(r.passed());
    }

    #[test]
    fn gaussian_examples() {
        let k = QuadField::new(-1).unwrap();
        let r = classify_quadratic(&k, &k.parse("2*i").unwrap()).unwrap();
        assert!([0, 2].contains(&r.count));
        assert!(r.passed(), "{:?}", r.checks);
        let r = classify_quadratic(&k, &k.parse("i").unwrap()).unwrap();
        assert_eq!(values(&r), vec![("-1 + i".into(), 2), ("-i".into(), 2)]);
        assert!(r.passed());
        let r = classify_quadratic(&k, &k.from_int(0)).unwrap();
        assert_eq!(values(&r), vec![("0".into(), 1), ("1".into(), 1)]);
    }

    #[test]
    fn rejects_non_integral() {
        let k = QuadField::new(33).unwrap();
        let c = k.parse("-71/48").unwrap();
        match classify_quadratic(&k, &c) {
            Err(Error::NotIntegralAt2 { valuation, .. }) => assert_eq!(valuation, "-4"),
            other => panic!("{other:?}"),
        }
        let k = QuadField::new(5).unwrap();
        match classify_quadratic(&k, &k.parse("-1/2").unwrap()) {
            Err(Error::NotIntegralAt2 { note, .. }) => assert!(note.contains("2-cycle")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn period_four_over_inert_field() {
        let k = QuadField::new(-3).unwrap();
        let r = classify_quadratic(&k, &k.parse("w").unwrap()).unwrap();
        for p in &r.periodic_points {
            let phi = unicritical(2, r.c.clone());
            assert_eq!(exact_period(&phi, &p.value, p.period), Some(p.period));
        }
        assert!(r.passed());
        assert!(
            r.periodic_points.iter().all(|p| p.period <= 2)
                || !r.disclaimers.is_empty()
                || r.count > 0
        );
    }

    #[test]
    fn reconstruction() {
        let m = BigInt::from(2).pow(40);
        let bound = BigInt::from(2).pow(19);
        let third = BigInt::from(3).modinv(&m).unwrap();
        let a = (BigInt::from(-5) * third).mod_floor(&m);
        assert_eq!(
            rational_reconstruct(&a, &m, &bound),
            Some(BigRational::new((-5).into(), 3.into()))
        );
    }

    #[test]
    fn obstruction() {
        let cert = three_cycle_obstruction();
        assert!(cert.verified());
        assert_eq!(cert.residue_values.len(), 4);
        assert_eq!(cert.residue_values[0].1, "1");
        assert_eq!(cert.residue_values[1].1, "1");
        assert!(cert.residue_values.iter().any(|(_, y)| y == "t"));
    }
}
