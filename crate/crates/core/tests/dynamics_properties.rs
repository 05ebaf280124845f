use num_bigint::BigInt;
use num_rational::BigRational;
use perdyn::dynamics::{dynatomic_degree, residue_period, DynPoly, LocalPoly};
use perdyn::oracle::{build_map, oracle_count, DEFAULT_BUDGET};
use perdyn::padic::{make_field, FieldRef, PadicElement};
use perdyn::poly::Poly;
use proptest::prelude::*;

const N: i64 = 32;

fn field(which: usize) -> FieldRef {
    match which {
        0 => make_field(2, 1, 1, None, N),
        1 => make_field(2, 2, 1, None, N),
        2 => make_field(2, 3, 1, None, N),
        3 => make_field(3, 1, 1, None, N),
        4 => make_field(3, 2, 1, None, N),
        5 => make_field(5, 1, 1, None, N),
        _ => make_field(2, 1, 2, Some(vec![vec![-2], vec![0], vec![1]]), N),
    }
    .unwrap()
}

const FIELDS: usize = 7;

fn element(k: &FieldRef, digits: &[u64]) -> PadicElement {
    let r = k.residue_field();
    let ds: Vec<_> = digits.iter().map(|&i| r.from_index(i % r.size())).collect();
    PadicElement::from_digits(k, &ds, N)
}

/// Degree `p * mult`, unit leading coefficient, `pi | a_i` for `p` not dividing `i`.
fn star_poly(k: &FieldRef, mult: usize, raw: &[Vec<u64>]) -> LocalPoly {
    let p = k.p() as usize;
    let d = p * mult;
    let pi = PadicElement::uniformizer(k);
    let one = PadicElement::one(k);
    let coeffs = (0..=d)
        .map(|i| {
            let a = element(k, &raw[i % raw.len()]);
            if i == d {
                // force a unit: 1 + pi * a
                &one + &(&pi * &a)
            } else if i % p != 0 {
                &pi * &a
            } else {
                a
            }
        })
        .collect();
    LocalPoly::new(coeffs, false).unwrap()
}

fn raw_coeffs() -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(prop::collection::vec(0u64..1000, 1..6), 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn periodic_points_are_separated_and_bounded(w in 0..FIELDS, mult in 1usize..3, raw in raw_coeffs()) {
        let k = field(w);
        let phi = star_poly(&k, mult, &raw);
        let points = phi.periodic_points().unwrap();
        let q = k.residue_size() as usize;
        prop_assert!(points.len() <= q);
        let r = k.residue_field();
        let mut seen: Vec<u64> = points.iter().map(|pt| r.index(&pt.residue)).collect();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(seen.len(), points.len());
        let table = phi.residue_table().unwrap();
        for pt in &points {
            prop_assert_eq!(phi.exact_period(&pt.approx, Some(q as u64)), Some(pt.period));
            prop_assert_eq!(residue_period(&table, r.index(&pt.residue) as usize), Some(pt.period));
        }
        // every periodic residue carries a point
        let periodic_residues = (0..q).filter(|&i| residue_period(&table, i).is_some()).count();
        prop_assert_eq!(periodic_residues, points.len());
    }

    #[test]
    fn finite_levels_agree_with_lifted_points(w in 0..6usize, raw in raw_coeffs()) {
        let k = field(w);
        let phi = star_poly(&k, 1, &raw);
        let count = phi.periodic_points().unwrap().len();
        let levels = if k.residue_size() > 4 { 2 } else { 3 };
        let counts = oracle_count(&phi, levels, DEFAULT_BUDGET).unwrap();
        prop_assert!(counts.iter().all(|&c| c == count), "{:?} vs {}", counts, count);
    }

    /// Middle coefficients vanish mod pi, so mod pi the iterate is
    /// `x^(d^n) + n a_0` when `a_0` is fixed by `x -> x^d`.
    #[test]
    fn iterates_mod_pi(w in 0..FIELDS, k_exp in 1u32..3, a0 in 0u64..1000, mids in raw_coeffs(), x in 0u64..1000) {
        let field = field(w);
        let p = field.p();
        let k_exp = if p == 2 { k_exp } else { 1 };
        let d = p.pow(k_exp) as usize;
        let r = field.residue_field();
        let pi = PadicElement::uniformizer(&field);
        let mut coeffs: Vec<PadicElement> = (0..=d).map(|i| &pi * &element(&field, &mids[i % mids.len()])).collect();
        coeffs[d] = PadicElement::one(&field);
        // a_0 in F_p when f does not divide k
        let a0_idx = if (k_exp as usize).is_multiple_of(field.f()) { a0 % r.size() } else { a0 % p };
        let a0_res = r.from_index(a0_idx);
        coeffs[0] = PadicElement::from_residue(&field, &a0_res);
        let phi = LocalPoly::new(coeffs, true).unwrap();
        prop_assert!(phi.check_star_star().unwrap());
        let table = phi.residue_table().unwrap();
        let x_res = r.from_index(x % r.size());
        let mut idx = r.index(&x_res) as usize;
        let mut shifted = r.zero();
        for n in 1..=3u32 {
            idx = table[idx] as usize;
            shifted = r.add(&shifted, &a0_res);
            let expected = r.add(&r.pow(&x_res, (d as u64).pow(n)), &shifted);
            prop_assert_eq!(r.from_index(idx as u64), expected);
        }
    }

    #[test]
    fn mobius_identity_on_integer_quartics(c in prop::collection::vec(-9i64..10, 4)) {
        let mut coeffs: Vec<BigRational> = c.iter().map(|&a| BigRational::from_integer(BigInt::from(a))).collect();
        coeffs.push(BigRational::from_integer(BigInt::from(1)));
        let phi = DynPoly::new(Poly::new(coeffs)).unwrap();
        for m in 1..=3 {
            prop_assert!(phi.verify_mobius(m).unwrap());
            let phi_m = phi.dynatomic(m).unwrap();
            prop_assert_eq!(phi_m.degree() as i128, dynatomic_degree(4, m));
        }
    }
}

#[test]
fn x2_minus_1_over_q4() {
    let k = make_field(2, 2, 1, None, 64).unwrap();
    let phi = perdyn::dynamics::parse_local_poly(&k, "x^2 - 1").unwrap();
    let points = phi.periodic_points().unwrap();
    let mut periods: Vec<u64> = points.iter().map(|p| p.period).collect();
    periods.sort_unstable();
    assert_eq!(periods, [1, 1, 2, 2]);
    let census = phi.exact_period_census().unwrap();
    assert_eq!(census.counts.get(&1), Some(&2));
    assert_eq!(census.counts.get(&2), Some(&2));
    assert!(census.count_exact);
    let map = build_map(&phi, 2, DEFAULT_BUDGET).unwrap();
    assert_eq!(map.census().count(), 4);
}
