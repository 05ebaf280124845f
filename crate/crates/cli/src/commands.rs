use std::fs;
use std::path::Path;

use perdyn::dynamics::{
    dynatomic_degree, parse_local_poly, parse_rational_poly, parse_symbolic_poly, DynatomicPoly,
};
use perdyn::error::{Error, Result};
use perdyn::number_field::{
    classify_with, compute_portrait, splitting_with_prime, three_cycle_obstruction, QuadField,
    SplitKind,
};
use perdyn::oracle::{build_map, to_dot};
use perdyn::padic::{make_field, FieldRef};
use perdyn::poly::{divisors, CoeffDisplay, Ring};
use perdyn::{DynPoly, LocalPoly};
use serde_json::json;

use crate::args::FieldArgs;
use crate::report::{Assertion, Report};

/// Largest `d^n` accepted by `dynatomic`.
pub const DYNATOMIC_DEGREE_CAP: u64 = 1 << 12;

fn parse_eisenstein(s: &str) -> Result<Vec<Vec<i64>>> {
    let s = s.trim();
    if s.starts_with('[') {
        return serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("eisenstein coordinates: {e}")));
    }
    let poly = parse_rational_poly(s)?;
    poly.coeffs()
        .iter()
        .map(|c| {
            if !c.is_integer() {
                return Err(Error::Parse(format!(
                    "Eisenstein coefficient {c} is not an integer"
                )));
            }
            i64::try_from(c.to_integer())
                .map(|n| vec![n])
                .map_err(|_| Error::Parse("coefficient too large".into()))
        })
        .collect()
}

pub fn build_field(args: &FieldArgs, precision: i64) -> Result<FieldRef> {
    let eisen = match (&args.eisenstein, args.e) {
        (Some(s), _) => Some(parse_eisenstein(s)?),
        (None, 1) => None,
        (None, e) => {
            let mut c = vec![vec![0]; e + 1];
            c[0] = vec![-(args.p as i64)];
            c[e] = vec![1];
            Some(c)
        }
    };
    make_field(args.p, args.f, args.e, eisen, precision)
}

fn field_json(field: &FieldRef) -> serde_json::Value {
    serde_json::to_value(field.spec()).expect("field spec serializes")
}

/// Points, periods and, when the hypotheses hold, the exact-count and
/// period-law checks.
pub fn periodic_report(field: &FieldRef, phi: &LocalPoly, poly_text: &str) -> Result<Report> {
    let points = phi.periodic_points()?;
    let q = field.residue_size();
    let mut assertions = vec![Assertion::new(
        "count_bound",
        points.len() as u64 <= q,
        format!("{} periodic points <= p^f = {q}", points.len()),
    )];
    let mut text = vec![
        format!("map: x -> {phi}"),
        format!(
            "field: p = {}, f = {}, e = {}, N = {}",
            field.p(),
            field.f(),
            field.e(),
            field.precision()
        ),
        format!("periodic points: {} (bound p^f = {q})", points.len()),
    ];
    for pt in &points {
        text.push(format!(
            "  residue {:<6} period {:<3} {}",
            pt.residue.to_string(),
            pt.period,
            pt.approx.short_text()
        ));
    }
    let census = match phi.exact_period_census() {
        Ok(c) => Some(c),
        Err(
            Error::HypothesisFailed(_)
            | Error::DegreeNotPrimePower { .. }
            | Error::DegreeNotDivisibleByP { .. },
        ) => None,
        Err(e) => return Err(e),
    };
    let mut census_json = json!(null);
    match &census {
        Some(c) => {
            text.push(format!(
                "exactness hypothesis holds: k = {}, m = {}, census {:?}{}",
                c.k,
                c.m,
                c.counts,
                if c.count_exact { " (k m = f)" } else { "" }
            ));
            assertions.push(Assertion::new(
                "exact_count",
                points.len() as u64 == q,
                format!("{} periodic points = p^f = {q}", points.len()),
            ));
            let bad: Vec<u64> = points
                .iter()
                .map(|p| p.period)
                .filter(|n| c.m % n != 0)
                .collect();
            assertions.push(Assertion::new(
                "periods_divide_m",
                bad.is_empty(),
                format!(
                    "every exact period divides m = {}{}",
                    c.m,
                    if bad.is_empty() {
                        String::new()
                    } else {
                        format!("; violators {bad:?}")
                    }
                ),
            ));
            if c.count_exact {
                let d = phi.degree() as u64;
                for n in divisors(c.m) {
                    let want = dynatomic_degree(d, n);
                    let got = c.counts.get(&n).copied().unwrap_or(0);
                    assertions.push(Assertion::new(
                        format!("census_period_{n}"),
                        got as i128 == want,
                        format!("{got} points of exact period {n}, deg Phi_{n} = {want}"),
                    ));
                }
                // repeated roots would make the degree overcount
                if let Ok(exact) = parse_rational_poly(poly_text) {
                    for n in divisors(c.m) {
                        let phin = exact.dynatomic(n)?;
                        assertions.push(Assertion::new(
                            format!("squarefree_phi_{n}"),
                            phin.is_squarefree(),
                            format!("Phi_{n} = {} has distinct roots", phin.report().poly),
                        ));
                    }
                }
            }
            census_json = serde_json::to_value(c).expect("census serializes");
        }
        None => text.push("exactness hypothesis does not hold; only the bound applies".to_string()),
    }
    let result = json!({
        "field": field_json(field),
        "poly": phi.to_string(),
        "bound": q,
        "count": points.len(),
        "points": points,
        "exactness": census_json,
    });
    Ok(Report::new("periodic", result, text, assertions))
}

pub fn cmd_periodic(args: &FieldArgs, poly: &str, precision: i64) -> Result<Report> {
    let field = build_field(args, precision)?;
    let phi = parse_local_poly(&field, poly)?;
    periodic_report(&field, &phi, poly)
}

fn dynatomic_report<C: Ring + CoeffDisplay>(
    phi: &DynPoly<C>,
    n: u64,
    verify: Option<u64>,
    squarefree: impl Fn(&DynatomicPoly<C>) -> Option<bool>,
) -> Result<Report> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let d = phi.degree() as u64;
    let top = n.max(verify.unwrap_or(0));
    if d.checked_pow(top as u32)
        .is_none_or(|x| x > DYNATOMIC_DEGREE_CAP)
    {
        return Err(Error::InvalidInput(format!(
            "degree {d}^{top} exceeds the cap {DYNATOMIC_DEGREE_CAP}"
        )));
    }
    let phin = phi.dynatomic(n)?;
    let report = phin.report();
    let want = dynatomic_degree(d, n);
    let mut assertions = vec![Assertion::new(
        "degree",
        report.degree as i128 == want,
        format!(
            "deg Phi_{n} = {} = sum over i | n of mu(n/i) d^i = {want}",
            report.degree
        ),
    )];
    let mut text = vec![
        format!("map: x -> {phi}"),
        format!("Phi_{n}(x) = {}", report.poly),
    ];
    let mut mobius = Vec::new();
    if let Some(m) = verify {
        for j in 1..=m {
            let ok = phi.verify_mobius(j)?;
            mobius.push(json!({"m": j, "holds": ok}));
            assertions.push(Assertion::new(
                format!("mobius_{j}"),
                ok,
                format!("phi^{j}(x) - x = product of Phi_n(x) over n | {j}"),
            ));
        }
        text.push(format!("product identity checked for m = 1..{m}"));
    }
    let result = json!({
        "poly": phi.to_string(),
        "dynatomic": report,
        "expected_degree": want,
        "squarefree": squarefree(&phin),
        "mobius": mobius,
    });
    Ok(Report::new("dynatomic", result, text, assertions))
}

pub fn cmd_dynatomic(poly: &str, symbolic_c: bool, n: u64, verify: Option<u64>) -> Result<Report> {
    if symbolic_c {
        // Q[c] is not a field, so the repeated-root test is skipped
        dynatomic_report(&parse_symbolic_poly(poly)?, n, verify, |_| None)
    } else {
        dynatomic_report(&parse_rational_poly(poly)?, n, verify, |p| {
            Some(p.is_squarefree())
        })
    }
}

pub fn cmd_classify(
    delta: i64,
    c: &str,
    portrait: bool,
    depth_cap: usize,
    other_prime: bool,
    precision: i64,
) -> Result<Report> {
    let k = QuadField::new(delta)?;
    let c = k.parse(c)?;
    let data = splitting_with_prime(&k, other_prime);
    let mut report = classify_with(&k, &c, &data, precision)?;
    let mut assertions: Vec<Assertion> = report
        .checks
        .iter()
        .map(|ch| Assertion::new(ch.name.clone(), ch.passed, ch.detail.clone()))
        .collect();
    let mut text = vec![
        format!("K = Q(sqrt({delta})), c = {c}"),
        format!(
            "2 is {:?} (e = {}, f = {}), sqrt({delta}) -> {}",
            data.kind, data.e, data.f, data.sqrt_delta_image
        ),
        format!(
            "v(c) = {}",
            report
                .valuation_of_c
                .map_or("infinity".to_string(), |v| v.to_string())
        ),
        format!("periodic points in K: {}", report.count),
    ];
    for p in &report.periodic_points {
        text.push(format!("  {:<24} period {}", p.value.to_string(), p.period));
    }
    for d in &report.disclaimers {
        text.push(format!("note: {d}"));
    }
    let mut obstruction = json!(null);
    if data.kind == SplitKind::Inert {
        let cert = three_cycle_obstruction();
        assertions.push(Assertion::new(
            "no_three_cycle",
            cert.verified(),
            "3-cycle numerator is nonzero on F_4 and the |tau| > 1 branch forces v(c) < 0",
        ));
        obstruction = serde_json::to_value(&cert).expect("certificate serializes");
    }
    let mut dot = None;
    if portrait {
        let p = compute_portrait(&k, &c, depth_cap)?;
        let closed = p.edges.iter().all(|&(i, j)| {
            let x = &p.vertices[i];
            Ring::add(&Ring::mul(x, x), &c) == p.vertices[j]
        });
        assertions.push(Assertion::new(
            "portrait_closed",
            closed && p.edges.len() == p.vertices.len(),
            format!("{} vertices, each mapped inside the set", p.vertices.len()),
        ));
        text.push(format!(
            "portrait: {} (hash {})",
            p.label,
            &p.graph_hash[..16]
        ));
        dot = Some(p.to_dot(&format!("x^2 + {c} over Q(sqrt({delta}))")));
        report.portrait = Some(p);
    }
    let mut result = serde_json::to_value(&report).expect("classification serializes");
    if !obstruction.is_null() {
        result["three_cycle_obstruction"] = obstruction;
    }
    let mut out = Report::new("classify", result, text, assertions);
    out.dot = dot;
    Ok(out)
}

pub fn cmd_oracle(
    args: &FieldArgs,
    poly: &str,
    levels: u32,
    dot_path: Option<&Path>,
    precision: i64,
    budget: u64,
) -> Result<Report> {
    let field = build_field(args, precision)?;
    let phi = parse_local_poly(&field, poly)?;
    if levels == 0 {
        return Err(Error::InvalidInput("--levels must be >= 1".into()));
    }
    let mut counts = Vec::new();
    let mut last = None;
    for m in 1..=levels {
        let map = build_map(&phi, m, budget)?;
        counts.push(map.census().count());
        last = Some(map);
    }
    let map = last.expect("levels >= 1");
    let mut text = vec![
        format!("map: x -> {phi}"),
        format!("periodic counts at levels 1..{levels}: {counts:?}"),
    ];
    let stable = counts.windows(2).all(|w| w[0] == w[1]);
    let mut assertions = vec![Assertion::new(
        "stable",
        stable,
        format!("counts {counts:?} constant across levels"),
    )];
    let lifted = match phi.periodic_points() {
        Ok(points) => Some(points.len()),
        Err(Error::StarConditionFailed(_)) => None,
        Err(e) => return Err(e),
    };
    match lifted {
        Some(n) => {
            text.push(format!("Hensel count: {n}"));
            assertions.push(Assertion::new(
                "matches_hensel",
                counts.iter().all(|&c| c == n),
                format!("oracle counts equal the {n} lifted points"),
            ));
        }
        None => text.push("map is outside the lifting hypothesis; no Hensel count".to_string()),
    }
    let dot = to_dot(&map, &format!("x -> {phi} on O/pi^{levels}"));
    if let Some(path) = dot_path {
        fs::write(path, &dot)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
        text.push(format!("wrote {}", path.display()));
    }
    let result = json!({
        "field": field_json(&field),
        "poly": phi.to_string(),
        "levels": levels,
        "counts": counts,
        "hensel_count": lifted,
        "cycles": map.census().cycles,
    });
    let mut out = Report::new("oracle", result, text, assertions);
    out.dot = Some(dot);
    Ok(out)
}
