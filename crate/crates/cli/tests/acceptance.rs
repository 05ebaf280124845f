//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use perdyn::dynamics::{
    parse_local_poly, parse_rational_poly, parse_symbolic_poly, DynPoly, LocalPoly,
};
use perdyn::number_field::{
    classify_quadratic, compute_portrait, three_cycle_obstruction, QuadElement, QuadField,
    DEFAULT_DEPTH_CAP,
};
use perdyn::oracle::{build_map, oracle_count, to_dot, DEFAULT_BUDGET};
use perdyn::padic::{make_field, parse_element, unramified, FieldRef, PadicElement};
use perdyn::poly::{Poly, Ring};
use perdyn_cli::sweep::{nonexample, rational_c_row, sweep_row};
use perdyn_cli::SweepKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn digits_agree(x: &PadicElement, y: &PadicElement) -> i64 {
    (x - y).valuation().lower_bound()
}

fn x2_minus_1_over_q4() -> Outcome {
    let k = unramified(2, 2, 64).map_err(err)?;
    let start = Instant::now();
    let phi = parse_local_poly(&k, "x^2 - 1").map_err(err)?;
    let points = phi.periodic_points().map_err(err)?;
    let elapsed = start.elapsed();
    ensure(points.len() == 4, || format!("{} points", points.len()))?;
    let fixed: Vec<_> = points
        .iter()
        .filter(|p| p.period == 1)
        .map(|p| p.approx.clone())
        .collect();
    let cycle: Vec<_> = points
        .iter()
        .filter(|p| p.period == 2)
        .map(|p| p.approx.clone())
        .collect();
    ensure(fixed.len() == 2 && cycle.len() == 2, || {
        "expected two fixed points and one 2-cycle".into()
    })?;
    // Vieta for x^2 - x - 1, independent of any square root routine
    let one = PadicElement::one(&k);
    let sum = &fixed[0] + &fixed[1];
    let prod = &fixed[0] * &fixed[1];
    ensure(
        digits_agree(&sum, &one) >= 32 && digits_agree(&prod, &-&one) >= 32,
        || "fixed points fail Vieta".into(),
    )?;
    let golden = [
        parse_element(&k, "(1 + sqrt(5))/2").map_err(err)?,
        parse_element(&k, "(1 - sqrt(5))/2").map_err(err)?,
    ];
    let matched = golden
        .iter()
        .filter(|g| fixed.iter().any(|x| digits_agree(x, g) >= 32))
        .count();
    ensure(matched == 2, || {
        format!("{matched} of (1 +- sqrt 5)/2 matched")
    })?;
    let zero = cycle.iter().any(|x| x.valuation().lower_bound() >= 32);
    let minus_one = cycle
        .iter()
        .any(|x| (x + &one).valuation().lower_bound() >= 32);
    ensure(zero && minus_one, || {
        "2-cycle is not {0, -1} mod 2^32".into()
    })?;
    ensure(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "fixed (1 +- sqrt 5)/2, 2-cycle {{0, -1}} mod 2^32, {:.3}s",
        elapsed.as_secs_f64()
    ))
}

fn star_bound() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for (p, f) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)] {
        let row = sweep_row(p, f, SweepKind::Star, 500, 3, 0, 64, DEFAULT_BUDGET).map_err(err)?;
        let q = p.pow(f as u32) as usize;
        ensure(row.failed == 0 && row.max_count <= q, || {
            format!(
                "p={p} f={f}: {} failures, first {:?}",
                row.failed,
                row.counterexamples.first()
            )
        })?;
        total += row.samples;
    }
    let elapsed = start.elapsed();
    ensure(elapsed.as_secs_f64() < 60.0, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{total} samples, counts <= p^f, oracle levels 1..3 agree, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

/// Product in F_4 with `t^2 = t + 1`; elements are bit pairs `b0 + b1 t`.
fn f4_mul(a: u8, b: u8) -> u8 {
    let (a0, a1, b0, b1) = (a & 1, a >> 1, b & 1, b >> 1);
    // (a0 + a1 t)(b0 + b1 t) = a0b0 + (a0b1 + a1b0) t + a1b1 (t + 1)
    let c0 = (a0 & b0) ^ (a1 & b1);
    let c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1);
    c0 | (c1 << 1)
}

fn f4_pow(x: u8, n: u32) -> u8 {
    (0..n).fold(1, |acc, _| f4_mul(acc, x))
}

/// Orbit periods of `x -> x^2 + t` on F_4, by hand.
fn f4_orbit_periods() -> Vec<usize> {
    let step = |x: u8| f4_mul(x, x) ^ 0b10;
    (0..4u8)
        .map(|x| {
            let mut y = step(x);
            let mut n = 1;
            while y != x && n < 8 {
                y = step(y);
                n += 1;
            }
            n
        })
        .collect()
}

fn star_star_exact() -> Outcome {
    let mut total = 0;
    for (p, f) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let row =
            sweep_row(p, f, SweepKind::StarStar, 40, 2, 0, 64, DEFAULT_BUDGET).map_err(err)?;
        ensure(row.failed == 0, || {
            format!("p={p} f={f}: {:?}", row.counterexamples.first())
        })?;
        total += row.samples;
    }
    let (check, assertions) = nonexample(64).map_err(err)?;
    for a in &assertions {
        ensure(a.passed, || format!("{}: {}", a.name, a.detail))?;
    }
    ensure(check.periods.contains(&4), || {
        format!("nonexample periods {:?}", check.periods)
    })?;
    let residue = f4_orbit_periods();
    ensure(residue.contains(&4), || {
        format!("residue orbit periods {residue:?}")
    })?;
    Ok(format!(
        "{total} samples exact; x^2 + omega has exact period 4 with m = 2"
    ))
}

fn census_x2_minus_1() -> Outcome {
    let k = unramified(2, 2, 64).map_err(err)?;
    let phi = parse_local_poly(&k, "x^2 - 1").map_err(err)?;
    let census = phi.exact_period_census().map_err(err)?;
    let want: BTreeMap<u64, usize> = [(1, 2), (2, 2)].into();
    ensure(census.counts == want, || {
        format!("census {:?}", census.counts)
    })?;
    ensure((census.k, census.m, census.f) == (1, 2, 2), || {
        format!("(k, m, f) = ({}, {}, {})", census.k, census.m, census.f)
    })?;
    let rational = parse_rational_poly("x^2 - 1").map_err(err)?;
    for n in [1, 2] {
        let d = rational.dynatomic(n).map_err(err)?;
        ensure(d.degree() == 2 && d.is_squarefree(), || {
            format!(
                "Phi_{n} degree {} squarefree {}",
                d.degree(),
                d.is_squarefree()
            )
        })?;
    }
    // brute force on O/pi^4
    let map = build_map(&phi, 4, DEFAULT_BUDGET).map_err(err)?;
    let mut oracle = BTreeMap::new();
    for (_, n) in map.census().periodic {
        *oracle.entry(n).or_insert(0usize) += 1;
    }
    ensure(oracle == want, || format!("oracle census {oracle:?}"))?;
    Ok("census {1: 2, 2: 2}, deg Phi_1 = deg Phi_2 = 2, squarefree".into())
}

fn mobius() -> Outcome {
    let sym = parse_symbolic_poly("x^2 + c").map_err(err)?;
    for m in 1..=6 {
        ensure(sym.verify_mobius(m).map_err(err)?, || {
            format!("symbolic c fails at m = {m}")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let int = |n: i64| BigRational::from_integer(BigInt::from(n));
    for _ in 0..20 {
        let mut coeffs = vec![int(rng.gen_range(-10..=10))];
        coeffs.extend((0..3).map(|_| int(2 * rng.gen_range(-5..=5))));
        coeffs.push(int(1));
        let phi = DynPoly::new(Poly::new(coeffs)).map_err(err)?;
        for m in 1..=4 {
            ensure(phi.verify_mobius(m).map_err(err)?, || {
                format!("{phi} fails at m = {m}")
            })?;
        }
    }
    Ok("exact for x^2 + c (m <= 6) and 20 quartics (m <= 4)".into())
}

/// Periods of `x^2 + r/s` over the unramified extension of degree `f`
/// divide `m` (`f` when `r f` is even, `2 f` otherwise) and equal `m` over
/// `Q_2`. A literal "every period equals m" fails already for `c = 0` over
/// `Q_4`, where the fixed points 0 and 1 sit beside a 2-cycle.
fn period_law() -> Outcome {
    let mut samples = 0;
    for f in 1..=3usize {
        let row = rational_c_row(f, 64).map_err(err)?;
        ensure(row.failed == 0, || {
            format!("f={f}: {:?}", row.counterexamples.first())
        })?;
        samples += row.samples;
        let k = unramified(2, f, 32).map_err(err)?;
        for s in [1i64, 3, 5] {
            for r in -20i64..=20 {
                let m = if r * f as i64 % 2 == 0 {
                    f as u64
                } else {
                    2 * f as u64
                };
                let c = PadicElement::from_rational(&k, &BigRational::new(r.into(), s.into()));
                let phi =
                    LocalPoly::new(vec![c, PadicElement::zero(&k), PadicElement::one(&k)], true)
                        .map_err(err)?;
                let map = build_map(&phi, 3, DEFAULT_BUDGET).map_err(err)?;
                for (_, n) in map.census().periodic {
                    ensure(m % n == 0 && (f > 1 || n == m), || {
                        format!("f={f} c={r}/{s}: oracle period {n}, m = {m}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{samples} maps: periods divide m in {{f, 2f}}, equal m over Q_2"
    ))
}

fn classification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = BTreeSet::new();
    for d in [-5i64, -3, -1, 2, 3, 5, 13, 17, 33] {
        let k = QuadField::new(d).map_err(err)?;
        let allowed: &[usize] = if d.rem_euclid(8) == 5 {
            &[0, 2, 4]
        } else {
            &[0, 2]
        };
        for _ in 0..100 {
            let (a, b) = (rng.gen_range(-50..=50), rng.gen_range(-50..=50));
            let c = Ring::add(
                &k.from_int(a),
                &Ring::mul(&k.from_int(b), &k.integral_generator()),
            );
            let report = classify_quadratic(&k, &c).map_err(err)?;
            ensure(allowed.contains(&report.count) && report.count != 3, || {
                format!("delta {d} c {c}: {}", report.count)
            })?;
            ensure(report.passed(), || {
                format!(
                    "delta {d} c {c}: {:?}",
                    report.checks.iter().find(|c| !c.passed)
                )
            })?;
            seen.insert(report.count);
        }
    }
    let cert = three_cycle_obstruction();
    ensure(cert.verified(), || "obstruction certificate fails".into())?;
    // the numerator reduces to t^6 + t^2 + 1 mod 2
    let by_hand: Vec<u8> = (0..4u8).map(|x| f4_pow(x, 6) ^ f4_pow(x, 2) ^ 1).collect();
    ensure(
        by_hand.iter().all(|&v| v != 0) && cert.residue_values.iter().all(|(_, v)| v != "0"),
        || format!("residue values {:?}", cert.residue_values),
    )?;
    Ok(format!(
        "900 values of c, counts seen {seen:?}, obstruction verified"
    ))
}

fn negative_precondition() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_perdyn"))
        .args([
            "--format", "json", "classify", "--delta", "33", "--c", "-71/48",
        ])
        .output()
        .map_err(err)?;
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(err)?;
    ensure(out.status.code() == Some(2), || {
        format!("exit {:?}", out.status.code())
    })?;
    ensure(body["error"] == "NotIntegralAt2", || {
        format!("error {}", body["error"])
    })?;
    Ok(format!(
        "exit 2, {}",
        body["message"].as_str().unwrap_or_default()
    ))
}

fn portraits(k: &QuadField, allowed: &[&str], seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = BTreeSet::new();
    for _ in 0..50 {
        let (a, b) = (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
        let c: QuadElement = Ring::add(
            &k.from_int(a),
            &Ring::mul(&k.from_int(b), &k.integral_generator()),
        );
        let p = compute_portrait(k, &c, DEFAULT_DEPTH_CAP).map_err(err)?;
        ensure(allowed.contains(&p.label.as_str()), || {
            format!(
                "c = {c}: label {}\n{}",
                p.label,
                p.to_dot(&format!("c = {c}"))
            )
        })?;
        labels.insert(p.label);
    }
    Ok(labels.len())
}

fn portrait_membership() -> Outcome {
    let gaussian = [
        "0", "3(2)", "4(1,1)", "4(2)", "5(1,1)", "5(2)", "6(1,1)", "6(2)",
    ];
    let eisenstein = [
        "0", "3(2)", "4(1,1)", "4(2)", "5(1,1)", "6(1,1)", "6(2)", "7(2,1,1)", "8(2)", "8(2,1,1)",
    ];
    let g = portraits(&QuadField::new(-1).map_err(err)?, &gaussian, 9)?;
    let e = portraits(&QuadField::new(-3).map_err(err)?, &eisenstein, 10)?;
    Ok(format!(
        "50 + 50 portraits in the listed sets ({g} and {e} distinct labels)"
    ))
}

/// Nodes (label, periodic), cluster memberships and edges of a DOT file,
/// keyed by node label so numbering does not matter.
type DotShape = (
    BTreeSet<(String, bool)>,
    BTreeSet<(String, String)>,
    BTreeSet<(String, String)>,
);

fn dot_shape(dot: &str) -> DotShape {
    let mut names = BTreeMap::new();
    let mut nodes = BTreeSet::new();
    let mut clusters = BTreeSet::new();
    let mut edges = Vec::new();
    let mut cluster = Vec::new();
    for line in dot.lines().map(str::trim) {
        if line.starts_with("digraph") {
            continue;
        } else if line.starts_with("subgraph") {
            cluster.push(String::new());
        } else if line == "}" {
            cluster.pop();
        } else if let Some(rest) = line.strip_prefix("label=\"") {
            if let Some(c) = cluster.last_mut() {
                *c = rest.trim_end_matches("\";").to_string();
            }
        } else if let Some((id, rest)) = line.split_once(" [label=\"") {
            let label = rest.split('"').next().unwrap_or_default().to_string();
            nodes.insert((label.clone(), rest.contains("doublecircle")));
            if let Some(c) = cluster.last() {
                clusters.insert((c.clone(), label.clone()));
            }
            names.insert(id.to_string(), label);
        } else if let Some((a, b)) = line.trim_end_matches(';').split_once(" -> ") {
            edges.push((a.to_string(), b.to_string()));
        }
    }
    let edges = edges
        .into_iter()
        .map(|(a, b)| (names[&a].clone(), names[&b].clone()))
        .collect();
    (nodes, clusters, edges)
}

fn oracle_stability() -> Outcome {
    let q2 = unramified(2, 1, 48).map_err(err)?;
    let q4 = unramified(2, 2, 48).map_err(err)?;
    let q8 = unramified(2, 3, 48).map_err(err)?;
    let q3 = unramified(3, 1, 48).map_err(err)?;
    let q9 = unramified(3, 2, 48).map_err(err)?;
    let q5 = unramified(5, 1, 48).map_err(err)?;
    let r2: FieldRef =
        make_field(2, 1, 2, Some(vec![vec![-2], vec![0], vec![1]]), 48).map_err(err)?;
    let cases: [(&FieldRef, &str); 11] = [
        (&q4, "x^2 - 1"),
        (&q2, "x^2 + 1"),
        (&q2, "x^2 - 1"),
        (&q4, "x^2 + t"),
        (&q8, "x^2 + t"),
        (&q2, "x^4 + 2*x + 1"),
        (&q3, "x^3 + 3*x + 2"),
        (&q9, "x^3 + 3*x + t"),
        (&q5, "x^5 + 5*x^2 + 3"),
        (&q3, "2*x^6 + x^3 + 3*x + 1"),
        (&r2, "x^2 + pi*x + 1 + pi"),
    ];
    for (k, text) in cases {
        let phi = parse_local_poly(k, text).map_err(err)?;
        let count = phi.periodic_points().map_err(err)?.len();
        let counts = oracle_count(&phi, 4, DEFAULT_BUDGET).map_err(err)?;
        ensure(counts.iter().all(|&c| c == count), || {
            format!("{text}: oracle {counts:?}, Hensel {count}")
        })?;
    }
    let phi = parse_local_poly(&q4, "x^2 - 1").map_err(err)?;
    let map = build_map(&phi, 2, DEFAULT_BUDGET).map_err(err)?;
    let dot = to_dot(&map, "x -> x^2 - 1 on O/pi^2");
    let golden = include_str!("golden/x2_minus_1_q4_level2.dot");
    let (got, want) = (dot_shape(&dot), dot_shape(golden));
    ensure(
        want.0.len() == 16 && want.1.len() == 16 && want.2.len() == 16,
        || "golden file parsed badly".into(),
    )?;
    ensure(got == want, || format!("DOT differs from golden:\n{dot}"))?;
    Ok(format!(
        "{} maps constant over levels 1..4; DOT matches golden nesting",
        cases.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("x^2 - 1 over Q_4", x2_minus_1_over_q4),
        ("bound for (star) maps", star_bound),
        (
            "exactness for (star star) maps and the nonexample",
            star_star_exact,
        ),
        ("census of x^2 - 1", census_x2_minus_1),
        ("Mobius identity", mobius),
        ("period law for rational c", period_law),
        ("quadratic field classification", classification),
        ("non-integral c rejected", negative_precondition),
        ("portrait membership", portrait_membership),
        ("oracle stability and DOT golden", oracle_stability),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
