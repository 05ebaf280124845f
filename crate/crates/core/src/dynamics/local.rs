//! Dynamics of polynomial maps over the ring of integers of a local field.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{hensel_lift, FieldRef, NewtonTarget, PadicElement, ResidueElement};
use crate::poly::divisors;

/// A polynomial map with coefficients in a local field.
#[derive(Clone, Debug)]
pub struct LocalPoly {
    coeffs: Vec<PadicElement>,
    a0_rational: bool,
}

/// Proof that a point outside the unit ball escapes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionCertificate {
    /// `v(lambda) < 0`.
    pub v_lambda: i64,
    /// `v(phi(lambda))`, measured.
    pub v_image: i64,
    /// `d * v(lambda) + v(a_d)`, which the measurement must equal.
    pub predicted: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactValue {
    pub value: String,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct PeriodicPoint {
    pub residue: ResidueElement,
    pub period: u64,
    pub approx: PadicElement,
    pub exact_value: Option<ExactValue>,
}

#[derive(Serialize)]
struct PeriodicPointJson<'a> {
    residue: String,
    period: u64,
    approx_digits: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_value: Option<&'a ExactValue>,
}

impl Serialize for PeriodicPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PeriodicPointJson {
            residue: self.residue.to_string(),
            period: self.period,
            approx_digits: self.approx.to_string(),
            exact_value: self.exact_value.as_ref(),
        }
        .serialize(s)
    }
}

impl fmt::Display for LocalPoly {
    /// Coefficients are shown without their precision suffix.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let text = c.short_text();
            let text = text.as_str();
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            terms.push(match (text, mono.is_empty()) {
                (t, true) if t.contains(" + ") => format!("({t})"),
                (t, true) => t.to_string(),
                ("1", false) => mono,
                ("-1", false) => format!("-{mono}"),
                (t, false) if t.contains(" + ") => format!("({t})*{mono}"),
                (t, false) => format!("{t}*{mono}"),
            });
        }
        write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
    }
}

/// Counts of points by exact period.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodCensus {
    pub m: u64,
    pub k: u32,
    pub f: usize,
    pub counts: BTreeMap<u64, usize>,
    /// `k m = f`: counts are predicted by dynatomic degrees.
    pub count_exact: bool,
}

/// `g(X) = phi^n(X) - X`, evaluated by iterating rather than expanding.
struct IterateMinusX<'a> {
    phi: &'a LocalPoly,
    n: u64,
}

impl NewtonTarget for IterateMinusX<'_> {
    fn eval_with_derivative(&self, x: &PadicElement) -> (PadicElement, PadicElement) {
        let mut y = x.clone();
        let mut dy = PadicElement::one(x.field());
        for _ in 0..self.n {
            let (fy, dfy) = self.phi.eval_with_derivative(&y);
            dy = &dy * &dfy;
            y = fy;
        }
        (&y - x, &dy - &PadicElement::one(x.field()))
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

impl LocalPoly {
    /// `a0_rational` records whether the constant term came from `Q`, which
    /// matters for the period law.
    pub fn new(coeffs: Vec<PadicElement>, a0_rational: bool) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 3 {
            return Err(Error::InvalidInput(
                "a dynamical polynomial needs degree >= 2".into(),
            ));
        }
        let field = coeffs[0].field().clone();
        if coeffs.iter().any(|c| c.field() != &field) {
            return Err(Error::FieldMismatch);
        }
        Ok(LocalPoly {
            coeffs,
            a0_rational,
        })
    }

    pub fn field(&self) -> &FieldRef {
        self.coeffs[0].field()
    }

    pub fn coeffs(&self) -> &[PadicElement] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn a0_rational(&self) -> bool {
        self.a0_rational
    }

    pub fn eval(&self, x: &PadicElement) -> PadicElement {
        let mut acc = PadicElement::zero(x.field());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_with_derivative(&self, x: &PadicElement) -> (PadicElement, PadicElement) {
        let mut g = PadicElement::zero(x.field());
        let mut dg = PadicElement::zero(x.field());
        for c in self.coeffs.iter().rev() {
            dg = &(&dg * x) + &g;
            g = &(&g * x) + c;
        }
        (g, dg)
    }

    /// `phi^n(x)`; `phi^0(x) = x`.
    pub fn iterate(&self, x: &PadicElement, n: u64) -> PadicElement {
        let mut y = x.clone();
        for _ in 0..n {
            y = self.eval(&y);
        }
        y
    }

    fn all_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero() || c.is_integral())
    }

    fn positive_valuation(c: &PadicElement) -> bool {
        c.valuation().lower_bound() > 0
    }

    /// Good reduction with `v(a_i) > 0` whenever `p` does not divide `i`.
    pub fn check_star(&self) -> Result<bool> {
        let d = self.degree();
        let p = self.field().p();
        if !(d as u64).is_multiple_of(p) {
            return Err(Error::DegreeNotDivisibleByP { degree: d, p });
        }
        Ok(self.all_integral()
            && self.coeffs[d].is_unit()
            && self
                .coeffs
                .iter()
                .enumerate()
                .all(|(i, c)| (i as u64).is_multiple_of(p) || Self::positive_valuation(c)))
    }

    /// `k` with `d = p^k`, if any.
    pub fn prime_power_exponent(&self) -> Option<u32> {
        let p = self.field().p();
        let mut d = self.degree() as u64;
        let mut k = 0;
        while d.is_multiple_of(p) {
            d /= p;
            k += 1;
        }
        (d == 1 && k > 0).then_some(k)
    }

    /// Monic of degree `p^k` with every middle coefficient in the maximal ideal.
    pub fn check_star_star(&self) -> Result<bool> {
        let d = self.degree();
        if self.prime_power_exponent().is_none() {
            return Err(Error::DegreeNotPrimePower {
                degree: d,
                p: self.field().p(),
            });
        }
        let one = PadicElement::one(self.field());
        Ok(self.coeffs[d] == one
            && (self.coeffs[0].is_zero() || self.coeffs[0].is_integral())
            && self.coeffs[1..d].iter().all(Self::positive_valuation))
    }

    /// For `|lambda| > 1`, certifies `v(phi(lambda)) = d v(lambda) + v(a_d) < v(lambda)`,
    /// so the orbit escapes and `lambda` is not periodic.
    pub fn expansion_witness(&self, lambda: &PadicElement) -> Result<Option<ExpansionCertificate>> {
        if !self.check_star()? {
            return Err(Error::StarConditionFailed(
                "expansion needs good reduction of the stated shape".into(),
            ));
        }
        let v = match lambda.valuation().finite() {
            Some(v) if v < 0 => v,
            _ => return Ok(None),
        };
        let d = self.degree() as i64;
        let vd = self.coeffs[d as usize].shift();
        let predicted = d * v + vd;
        let image = self.eval(lambda);
        match image.valuation().finite() {
            Some(v_image) if v_image == predicted && predicted < v => {
                Ok(Some(ExpansionCertificate {
                    v_lambda: v,
                    v_image,
                    predicted,
                }))
            }
            _ => Ok(None),
        }
    }

    /// Reduction of the coefficients to the residue field.
    pub fn residue_coeffs(&self) -> Result<Vec<ResidueElement>> {
        self.coeffs.iter().map(|c| c.residue()).collect()
    }

    /// Function table of the reduced map on `F_{p^f}`, indexed by residue index.
    pub fn residue_table(&self) -> Result<Vec<u64>> {
        let k = self.field().residue_field();
        let coeffs = self.residue_coeffs()?;
        Ok(k.elements()
            .map(|x| k.index(&k.eval(&coeffs, &x)))
            .collect())
    }

    /// Exact period of `x` if some `n <= max_n` has `phi^n(x) = x` to the
    /// precision of `x`. The default bound is `2 lcm(p, f)`.
    pub fn exact_period(&self, x: &PadicElement, max_n: Option<u64>) -> Option<u64> {
        let field = self.field();
        let max_n = max_n.unwrap_or(2 * lcm(field.p(), field.f() as u64));
        let mut y = x.clone();
        for n in 1..=max_n {
            y = self.eval(&y);
            if y.congruent(x) {
                return Some(n);
            }
        }
        None
    }

    /// All periodic points in the field, sorted by residue index then period.
    ///
    /// Periodic points are integral (outside the unit ball the orbit
    /// escapes), each residue class holds at most one (the map contracts
    /// within a class), and above every periodic residue of period `n` the
    /// equation `phi^n(X) = X` has a simple root, found by Hensel lifting.
    pub fn periodic_points(&self) -> Result<Vec<PeriodicPoint>> {
        if !self.check_star()? {
            return Err(Error::StarConditionFailed(format!("x -> {self}")));
        }
        let field = self.field().clone();
        // coefficients known to fewer digits than the field bound the lift
        let n_prec = self
            .coeffs
            .iter()
            .map(|c| c.precision())
            .min()
            .unwrap_or(field.precision());
        let k = field.residue_field();
        let table = self.residue_table()?;
        let q = table.len();
        let mut done = vec![false; q];
        let mut points = Vec::new();
        for start in 0..q {
            if done[start] {
                continue;
            }
            let Some(period) = residue_period(&table, start) else {
                continue;
            };
            let r = k.from_index(start as u64);
            let g = IterateMinusX {
                phi: self,
                n: period,
            };
            let x0 = PadicElement::from_residue(&field, &r);
            let root = hensel_lift(&g, &x0, n_prec)?;
            // the rest of the cycle is the orbit of the lifted root
            let mut y = root;
            for _ in 0..period {
                let res = y.residue()?;
                let idx = k.index(&res) as usize;
                done[idx] = true;
                points.push(PeriodicPoint {
                    residue: res,
                    period,
                    approx: y.clone(),
                    exact_value: None,
                });
                y = self.eval(&y);
            }
            let back = &points[points.len() - period as usize].approx;
            if !y.congruent(back) {
                return Err(Error::PrecisionExhausted(format!(
                    "lifted cycle of period {period} does not close at precision {n_prec}"
                )));
            }
        }
        for pt in &points {
            let n = pt.period;
            let mut y = pt.approx.clone();
            for j in 1..n {
                y = self.eval(&y);
                if divisors(n).contains(&j) && y.congruent(&pt.approx) {
                    return Err(Error::PrecisionExhausted(format!(
                        "point above residue {} returns after {j} < {n} steps",
                        pt.residue
                    )));
                }
            }
        }
        points.sort_by_key(|pt| (k.index(&pt.residue), pt.period));
        Ok(points)
    }

    /// Counts of periodic points by exact period, with the `k m = f` flag.
    pub fn exact_period_census(&self) -> Result<PeriodCensus> {
        if !self.check_star_star()? {
            return Err(Error::HypothesisFailed(
                "the map is not monic of the required shape".into(),
            ));
        }
        let field = self.field();
        let k = self.prime_power_exponent().expect("checked");
        let f = field.f();
        if !(k as usize).is_multiple_of(f) && !self.a0_rational {
            return Err(Error::HypothesisFailed(format!(
                "f = {f} does not divide k = {k} and a_0 is not known to be rational"
            )));
        }
        let m = m_value(field, &self.coeffs[0], k)?;
        let mut counts = BTreeMap::new();
        for pt in self.periodic_points()? {
            *counts.entry(pt.period).or_insert(0) += 1;
        }
        Ok(PeriodCensus {
            m,
            k,
            f,
            counts,
            count_exact: k as u64 * m == f as u64,
        })
    }
}

/// Residue period of `start` under the table, or `None` if it is not periodic.
pub fn residue_period(table: &[u64], start: usize) -> Option<u64> {
    let mut x = start;
    for n in 1..=table.len() as u64 {
        x = table[x] as usize;
        if x == start {
            return Some(n);
        }
    }
    None
}

/// Smallest `m >= 1` with `v(a0 m) >= 1` and `f | k m`; at most `lcm(p, f)`.
pub fn m_value(field: &FieldRef, a0: &PadicElement, k: u32) -> Result<u64> {
    if !a0.is_zero() && !a0.is_integral() {
        return Err(Error::NotIntegral(a0.shift()));
    }
    let p = field.p();
    let f = field.f() as u64;
    let e = field.e() as i64;
    let va = a0.valuation().lower_bound();
    let bound = lcm(p, f);
    for m in 1..=bound {
        let mut vp_m = 0i64;
        let mut r = m;
        while r % p == 0 {
            r /= p;
            vp_m += 1;
        }
        if va + e * vp_m >= 1 && (k as u64 * m).is_multiple_of(f) {
            return Ok(m);
        }
    }
    unreachable!("m = lcm(p, f) always qualifies")
}
