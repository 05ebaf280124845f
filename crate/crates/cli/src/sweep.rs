use num_rational::BigRational;
use perdyn::dynamics::{dynatomic_degree, m_value, PeriodCensus};
use perdyn::error::{Error, Result};
use perdyn::oracle::oracle_count;
use perdyn::padic::{parse_element, unramified, FieldRef, PadicElement};
use perdyn::poly::divisors;
use perdyn::LocalPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::args::SweepKind;
use crate::report::{Assertion, Report};

/// Digits given to random coefficients.
const RANDOM_DIGITS: usize = 6;
/// Counterexamples kept per row.
const MAX_DUMPS: usize = 5;

/// Deterministic generator for one sweep row.
pub fn row_rng(seed: u64, p: u64, f: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (p << 16) ^ f as u64)
}

/// A random integral element with `RANDOM_DIGITS` digits, and whether it
/// is visibly rational (all digits in the prime field).
pub fn random_element(rng: &mut ChaCha8Rng, field: &FieldRef, unit: bool) -> (PadicElement, bool) {
    let k = field.residue_field();
    let q = k.size();
    let p = field.p();
    let idx: Vec<u64> = (0..RANDOM_DIGITS)
        .map(|j| {
            if j == 0 && unit {
                rng.gen_range(1..q)
            } else {
                rng.gen_range(0..q)
            }
        })
        .collect();
    let digits: Vec<_> = idx.iter().map(|&i| k.from_index(i)).collect();
    let rational = field.e() == 1 && idx.iter().all(|&i| i < p);
    (
        PadicElement::from_digits(field, &digits, field.precision()),
        rational,
    )
}

/// `x^p + c` with `c` random.
pub fn random_unicritical(rng: &mut ChaCha8Rng, field: &FieldRef) -> LocalPoly {
    let d = field.p() as usize;
    let (c, rational) = random_element(rng, field, false);
    let mut coeffs = vec![PadicElement::zero(field); d + 1];
    coeffs[0] = c;
    coeffs[d] = PadicElement::one(field);
    LocalPoly::new(coeffs, rational).expect("degree >= 2")
}

/// Good reduction, degree `p j` for `j` in 1..=2, and `pi | a_i` whenever
/// `p` does not divide `i`.
pub fn random_star(rng: &mut ChaCha8Rng, field: &FieldRef) -> LocalPoly {
    let p = field.p() as usize;
    let d = p * rng.gen_range(1..=2);
    let pi = PadicElement::uniformizer(field);
    let mut rational = false;
    let coeffs = (0..=d)
        .map(|i| {
            let (a, r) = random_element(rng, field, i == d);
            if i == 0 {
                rational = r;
            }
            if i % p != 0 {
                &a * &pi
            } else {
                a
            }
        })
        .collect();
    LocalPoly::new(coeffs, rational).expect("degree >= 2")
}

/// Monic of degree `p^k`, middle coefficients in the maximal ideal, and
/// `a_0` rational whenever `f` does not divide `k`.
pub fn random_star_star(rng: &mut ChaCha8Rng, field: &FieldRef) -> LocalPoly {
    let p = field.p() as usize;
    let k = if p == 2 { rng.gen_range(1..=2) } else { 1 };
    let d = p.pow(k);
    let pi = PadicElement::uniformizer(field);
    let mut coeffs: Vec<PadicElement> = (0..=d)
        .map(|_| &random_element(rng, field, false).0 * &pi)
        .collect();
    coeffs[d] = PadicElement::one(field);
    let rational = if (k as usize).is_multiple_of(field.f()) {
        let (a0, r) = random_element(rng, field, false);
        coeffs[0] = a0;
        r
    } else {
        coeffs[0] = PadicElement::from_int(field, rng.gen_range(-50..=50));
        true
    };
    LocalPoly::new(coeffs, rational).expect("degree >= 2")
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleCheck {
    pub poly: String,
    pub count: usize,
    pub periods: Vec<u64>,
    pub oracle: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<PeriodCensus>,
    pub failures: Vec<String>,
}

/// Bound and oracle agreement; with `exact`, also the exact count and the
/// period law.
pub fn check_sample(phi: &LocalPoly, levels: u32, budget: u64, exact: bool) -> Result<SampleCheck> {
    let field = phi.field();
    let q = field.residue_size() as usize;
    let points = phi.periodic_points()?;
    let count = points.len();
    let periods: Vec<u64> = points.iter().map(|p| p.period).collect();
    let mut failures = Vec::new();
    if count > q {
        failures.push(format!("{count} points exceed p^f = {q}"));
    }
    let oracle = if levels > 0 {
        oracle_count(phi, levels, budget)?
    } else {
        Vec::new()
    };
    if oracle.iter().any(|&c| c != count) {
        failures.push(format!(
            "oracle counts {oracle:?} differ from {count} lifted points"
        ));
    }
    let census = if exact {
        let c = phi.exact_period_census()?;
        if count != q {
            failures.push(format!("{count} points, expected exactly p^f = {q}"));
        }
        if let Some(n) = periods.iter().find(|&&n| c.m % n != 0) {
            failures.push(format!("exact period {n} does not divide m = {}", c.m));
        }
        Some(c)
    } else {
        None
    };
    Ok(SampleCheck {
        poly: phi.to_string(),
        count,
        periods,
        oracle,
        census,
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub p: u64,
    pub f: usize,
    pub kind: String,
    pub samples: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_count: usize,
    pub counterexamples: Vec<SampleCheck>,
}

impl SweepRow {
    fn new(p: u64, f: usize, kind: &str) -> Self {
        SweepRow {
            p,
            f,
            kind: kind.to_string(),
            samples: 0,
            passed: 0,
            failed: 0,
            max_count: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, s: SampleCheck) {
        self.samples += 1;
        self.max_count = self.max_count.max(s.count);
        if s.failures.is_empty() {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.counterexamples.len() < MAX_DUMPS {
                self.counterexamples.push(s);
            }
        }
    }
}

pub fn kind_name(kind: SweepKind) -> &'static str {
    match kind {
        SweepKind::Unicritical => "unicritical",
        SweepKind::Star => "star",
        SweepKind::StarStar => "star-star",
        SweepKind::RationalC => "rational-c",
    }
}

/// One row of random samples over the unramified extension of degree `f`.
#[allow(clippy::too_many_arguments)]
pub fn sweep_row(
    p: u64,
    f: usize,
    kind: SweepKind,
    samples: usize,
    levels: u32,
    seed: u64,
    precision: i64,
    budget: u64,
) -> Result<SweepRow> {
    let field = unramified(p, f, precision)?;
    let mut rng = row_rng(seed, p, f);
    let mut row = SweepRow::new(p, f, kind_name(kind));
    for _ in 0..samples {
        let (phi, exact) = match kind {
            SweepKind::Unicritical => (random_unicritical(&mut rng, &field), false),
            SweepKind::Star => (random_star(&mut rng, &field), false),
            SweepKind::StarStar => (random_star_star(&mut rng, &field), true),
            SweepKind::RationalC => unreachable!("handled by rational_c_row"),
        };
        row.record(check_sample(&phi, levels, budget, exact)?);
    }
    Ok(row)
}

/// `x^2 + r/s` over the unramified extension of `Q_2` of degree `f`, for
/// `r` in [-20, 20] and `s` in {1, 3, 5}.
///
/// Every periodic point satisfies `phi^m(x) = x` with `m = f` when `r f`
/// is even and `m = 2 f` otherwise. When `r f` is even the number of points
/// of exact period `n | f` is `deg Phi_n`, and over `Q_2` the exact period
/// is `m` itself.
pub fn rational_c_row(f: usize, precision: i64) -> Result<SweepRow> {
    let field = unramified(2, f, precision)?;
    let mut row = SweepRow::new(2, f, "rational-c");
    for s in [1i64, 3, 5] {
        for r in -20i64..=20 {
            let c = BigRational::new(r.into(), s.into());
            let a0 = PadicElement::from_rational(&field, &c);
            let coeffs = vec![
                a0.clone(),
                PadicElement::zero(&field),
                PadicElement::one(&field),
            ];
            let phi = LocalPoly::new(coeffs, true)?;
            let mut check = check_sample(&phi, 0, 0, false)?;
            check.poly = format!("x^2 + {c}");
            let m = if (r * f as i64) % 2 == 0 {
                f as u64
            } else {
                2 * f as u64
            };
            let law_m = m_value(&field, &a0, 1)?;
            if law_m != m {
                check.failures.push(format!("m = {law_m}, expected {m}"));
            }
            for &n in &check.periods {
                if m % n != 0 {
                    check
                        .failures
                        .push(format!("exact period {n} does not divide {m}"));
                }
                if f == 1 && n != m {
                    check
                        .failures
                        .push(format!("exact period {n} differs from {m} over Q_2"));
                }
            }
            if m == f as u64 {
                for n in divisors(m) {
                    let got = check.periods.iter().filter(|&&x| x == n).count() as i128;
                    let want = dynatomic_degree(2, n);
                    if got != want {
                        check.failures.push(format!(
                            "{got} points of exact period {n}, deg Phi_{n} = {want}"
                        ));
                    }
                }
            }
            row.record(check);
        }
    }
    Ok(row)
}

/// The map `x^2 + omega` over the unramified quadratic extension of `Q_2`,
/// `omega = (-1 + sqrt(-3))/2`: a point of exact period 4 exists although
/// `m = 2`, because `a_0` is irrational and `f = 2` does not divide `k = 1`.
pub fn nonexample(precision: i64) -> Result<(SampleCheck, Vec<Assertion>)> {
    let field = unramified(2, 2, precision)?;
    let omega = parse_element(&field, "(-1 + sqrt(-3))/2")?;
    let phi = LocalPoly::new(
        vec![
            omega.clone(),
            PadicElement::zero(&field),
            PadicElement::one(&field),
        ],
        false,
    )?;
    let mut check = check_sample(&phi, 0, 0, false)?;
    let m = m_value(&field, &omega, 1)?;
    let mut assertions = Vec::new();
    let hyp = phi.exact_period_census();
    assertions.push(Assertion::new(
        "nonexample_outside_hypothesis",
        matches!(hyp, Err(Error::HypothesisFailed(_))),
        "f = 2 does not divide k = 1 and a_0 is irrational",
    ));
    let four = check.periods.iter().filter(|&&n| n == 4).count();
    assertions.push(Assertion::new(
        "nonexample_period_four",
        four > 0 && m == 2,
        format!("{four} points of exact period 4, m = {m}"),
    ));
    // g(x) = phi^4(x) - x at omega equals -2 - 2 sqrt(-3), and g' is a unit
    let g = phi.iterate(&omega, 4).checked_sub(&omega)?;
    let want = parse_element(&field, "-2 - 2*sqrt(-3)")?;
    assertions.push(Assertion::new(
        "nonexample_residual",
        g == want,
        format!(
            "phi^4(omega) - omega = -2 - 2*sqrt(-3) to {} digits",
            g.precision().min(want.precision())
        ),
    ));
    check.census = None;
    Ok((check, assertions))
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_verify_bounds(
    ps: &[u64],
    fs: &[usize],
    kind: SweepKind,
    samples: usize,
    levels: u32,
    include_nonexample: bool,
    seed: u64,
    precision: i64,
    budget: u64,
) -> Result<Report> {
    let mut rows = Vec::new();
    if kind == SweepKind::RationalC {
        if ps.iter().any(|&p| p != 2) {
            return Err(Error::InvalidInput(
                "the rational-c sweep is for p = 2".into(),
            ));
        }
        for &f in fs {
            rows.push(rational_c_row(f, precision)?);
        }
    } else {
        for &p in ps {
            for &f in fs {
                rows.push(sweep_row(
                    p, f, kind, samples, levels, seed, precision, budget,
                )?);
            }
        }
    }
    let mut assertions: Vec<Assertion> = rows
        .iter()
        .map(|r| {
            Assertion::new(
                format!("{}_p{}_f{}", r.kind, r.p, r.f),
                r.failed == 0,
                format!(
                    "{}/{} samples pass, max count {}",
                    r.passed, r.samples, r.max_count
                ),
            )
        })
        .collect();
    let mut text = vec![
        format!("seed {seed}"),
        format!(
            "{:<12} {:>3} {:>3} {:>8} {:>6} {:>6} {:>5}",
            "kind", "p", "f", "samples", "pass", "fail", "max"
        ),
    ];
    for r in &rows {
        text.push(format!(
            "{:<12} {:>3} {:>3} {:>8} {:>6} {:>6} {:>5}",
            r.kind, r.p, r.f, r.samples, r.passed, r.failed, r.max_count
        ));
        for c in &r.counterexamples {
            text.push(format!(
                "  counterexample x -> {}: {}",
                c.poly,
                c.failures.join("; ")
            ));
        }
    }
    let mut nonexample_json = json!(null);
    if include_nonexample {
        let (check, extra) = nonexample(precision)?;
        text.push(format!(
            "nonexample x -> {}: periods {:?}",
            check.poly, check.periods
        ));
        nonexample_json = serde_json::to_value(&check).expect("sample serializes");
        assertions.extend(extra);
    }
    let result = json!({
        "seed": seed,
        "kind": kind_name(kind),
        "levels": levels,
        "rows": rows,
        "nonexample": nonexample_json,
    });
    Ok(Report::new("verify-bounds", result, text, assertions))
}
