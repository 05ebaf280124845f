//! Finite extensions `F/Q_p` built as an unramified layer of degree `f`
//! topped by one Eisenstein layer of degree `e`.
//!
//! Integral elements are stored as `e*f` integer coordinates in the basis
//! `t^i * pi^j` (`0 <= i < f`, `0 <= j < e`), each reduced modulo
//! `p^store` where `store = ceil(N/e) + 1`. The extra power of `p` keeps
//! every stored value correct modulo `pi^N` through divisions by `pi`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::residue::{fp_poly, smallest_irreducible, ResidueElement, ResidueField};
use crate::error::{Error, Result};

/// Default working precision in `pi`-adic digits.
pub const DEFAULT_PRECISION: i64 = 64;

pub type FieldRef = Arc<FieldDescriptor>;

/// Serializable description of a field: `{p, f, e, unram_poly, eisenstein_poly, N}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub f: usize,
    pub e: usize,
    /// Little-endian integer coefficients, monic of degree `f`.
    pub unram_poly: Vec<i64>,
    /// Little-endian coefficients; each is an element of the unramified ring
    /// given by its coordinates in `1, t, ..., t^{f-1}`. `None` when `e = 1`.
    pub eisenstein_poly: Option<Vec<Vec<i64>>>,
    #[serde(rename = "N")]
    pub n: i64,
}

/// Integral element representative: `e*f` coordinates, index `j*f + i` for `t^i pi^j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Rep(pub(crate) Vec<BigInt>);

#[derive(Debug)]
pub struct FieldDescriptor {
    spec: FieldSpec,
    residue: ResidueField,
    unram: Vec<BigInt>,
    /// Eisenstein coefficients `g_0..g_{e-1}` as unramified-ring elements.
    eisen: Vec<Vec<BigInt>>,
    store: u32,
    modulus: BigInt,
    /// `H = (g_0 + g_1 pi + ... + g_{e-1} pi^{e-1}) / p`, a unit with `pi^e = -p H`.
    h: Rep,
    h_inv: Rep,
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|q| q * q <= p)
            .all(|q| !p.is_multiple_of(q))
}

fn vp(x: &BigInt, p: &BigInt) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

/// Build a field descriptor.
///
/// `unram_poly` defaults to the lexicographically smallest monic irreducible
/// polynomial of degree `f` over `F_p`; `eisenstein_poly` must be supplied
/// exactly when `e > 1`.
pub fn make_field(
    p: u64,
    f: usize,
    e: usize,
    eisenstein_poly: Option<Vec<Vec<i64>>>,
    n: i64,
) -> Result<FieldRef> {
    let unram = smallest_irreducible(p.max(2), f.max(1));
    FieldDescriptor::from_spec(FieldSpec {
        p,
        f,
        e,
        unram_poly: unram.iter().map(|&c| c as i64).collect(),
        eisenstein_poly,
        n,
    })
}

/// `Q_p` at precision `n`.
pub fn qp(p: u64, n: i64) -> Result<FieldRef> {
    make_field(p, 1, 1, None, n)
}

/// The unramified extension of degree `f`.
pub fn unramified(p: u64, f: usize, n: i64) -> Result<FieldRef> {
    make_field(p, f, 1, None, n)
}

impl FieldDescriptor {
    pub fn from_spec(spec: FieldSpec) -> Result<FieldRef> {
        let FieldSpec { p, f, e, n, .. } = spec;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 || e == 0 || n < 1 {
            return Err(Error::InvalidInput(format!(
                "field parameters must be positive (f={f}, e={e}, N={n})"
            )));
        }
        if spec.unram_poly.len() != f + 1 || spec.unram_poly[f] != 1 {
            return Err(Error::NotIrreducible(format!(
                "unramified polynomial must be monic of degree {f}"
            )));
        }
        let reduced: Vec<u64> = spec
            .unram_poly
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        if !fp_poly::is_irreducible(&reduced, p) {
            return Err(Error::NotIrreducible(format!(
                "{:?} mod {p}",
                spec.unram_poly
            )));
        }
        let residue = ResidueField::new(p, reduced);
        let store = (n as u64).div_ceil(e as u64) as u32 + 1;
        let pb = BigInt::from(p);
        let modulus = pb.pow(store);
        let unram: Vec<BigInt> = spec.unram_poly.iter().map(|&c| BigInt::from(c)).collect();

        let eisen: Vec<Vec<BigInt>> = match (&spec.eisenstein_poly, e) {
            (None, 1) => vec![unram_coords(&[-(p as i64)], f)?],
            (Some(_), 1) => {
                return Err(Error::InvalidInput(
                    "an Eisenstein polynomial is only meaningful for e > 1".into(),
                ))
            }
            (Some(g), _) => {
                if g.len() != e + 1 {
                    return Err(Error::NotEisenstein(format!("expected degree {e}")));
                }
                let lead = unram_coords(&g[e], f)?;
                if lead != unram_coords(&[1], f)? {
                    return Err(Error::NotEisenstein("polynomial must be monic".into()));
                }
                let lower = g[..e]
                    .iter()
                    .map(|c| unram_coords(c, f))
                    .collect::<Result<Vec<_>>>()?;
                for c in &lower {
                    if c.iter().any(|x| !x.is_multiple_of(&pb)) {
                        return Err(Error::NotEisenstein(
                            "lower coefficients must be divisible by p".into(),
                        ));
                    }
                }
                let p2 = &pb * &pb;
                if lower[0].iter().all(|x| x.is_multiple_of(&p2)) {
                    return Err(Error::NotEisenstein(
                        "constant term must have valuation exactly 1".into(),
                    ));
                }
                lower
            }
            (None, _) => {
                return Err(Error::NotEisenstein(format!(
                    "e = {e} requires an Eisenstein polynomial"
                )))
            }
        };
        let mut field = FieldDescriptor {
            spec,
            residue,
            unram,
            eisen,
            store,
            modulus,
            h: Rep(Vec::new()),
            h_inv: Rep(Vec::new()),
        };
        // pi^e = -(g_0 + ... + g_{e-1} pi^{e-1}) = -p * H(pi) with H a unit.
        let mut h = field.rep_zero();
        for (j, g) in field.eisen.iter().enumerate() {
            for (i, c) in g.iter().enumerate() {
                h.0[j * f + i] = (c / &pb).mod_floor(&field.modulus);
            }
        }
        field.h_inv = field.rep_inv_unit(&h);
        field.h = h;
        Ok(Arc::new(field))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.spec).expect("field spec serializes")
    }

    pub fn from_json(s: &str) -> Result<FieldRef> {
        let spec: FieldSpec =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("field descriptor: {e}")))?;
        FieldDescriptor::from_spec(spec)
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn f(&self) -> usize {
        self.spec.f
    }

    pub fn e(&self) -> usize {
        self.spec.e
    }

    pub fn precision(&self) -> i64 {
        self.spec.n
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.residue
    }

    /// `p^f`, the size of the residue field.
    pub fn residue_size(&self) -> u64 {
        self.residue.size()
    }

    /// Same field at a different working precision.
    pub fn with_precision(&self, n: i64) -> Result<FieldRef> {
        FieldDescriptor::from_spec(FieldSpec {
            n,
            ..self.spec.clone()
        })
    }

    // ---- integral representatives ----------------------------------------

    fn dim(&self) -> usize {
        self.spec.e * self.spec.f
    }

    pub(crate) fn rep_zero(&self) -> Rep {
        Rep(vec![BigInt::zero(); self.dim()])
    }

    pub(crate) fn rep_from_int(&self, n: &BigInt) -> Rep {
        let mut r = self.rep_zero();
        r.0[0] = n.mod_floor(&self.modulus);
        r
    }

    pub(crate) fn rep_lift(&self, d: &ResidueElement) -> Rep {
        let mut r = self.rep_zero();
        for (i, &c) in d.coeffs().iter().enumerate() {
            r.0[i] = BigInt::from(c);
        }
        r
    }

    pub(crate) fn rep_add(&self, a: &Rep, b: &Rep) -> Rep {
        Rep(a
            .0
            .iter()
            .zip(&b.0)
            .map(|(x, y)| (x + y).mod_floor(&self.modulus))
            .collect())
    }

    pub(crate) fn rep_sub(&self, a: &Rep, b: &Rep) -> Rep {
        Rep(a
            .0
            .iter()
            .zip(&b.0)
            .map(|(x, y)| (x - y).mod_floor(&self.modulus))
            .collect())
    }

    pub(crate) fn rep_neg(&self, a: &Rep) -> Rep {
        Rep(a.0.iter().map(|x| (-x).mod_floor(&self.modulus)).collect())
    }

    /// Product in the unramified ring, unreduced modulo `p^store`.
    fn unram_mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let f = self.spec.f;
        if f == 1 {
            return vec![&a[0] * &b[0]];
        }
        let mut prod = vec![BigInt::zero(); 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..f {
                prod[k - f + i] -= &c * &self.unram[i];
            }
        }
        prod.truncate(f);
        prod
    }

    pub(crate) fn rep_mul(&self, a: &Rep, b: &Rep) -> Rep {
        let (e, f) = (self.spec.e, self.spec.f);
        if e == 1 {
            let prod = self.unram_mul(&a.0, &b.0);
            return Rep(prod
                .into_iter()
                .map(|x| x.mod_floor(&self.modulus))
                .collect());
        }
        let mut acc: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); f]; 2 * e - 1];
        for i in 0..e {
            let ai = &a.0[i * f..(i + 1) * f];
            if ai.iter().all(Zero::is_zero) {
                continue;
            }
            for j in 0..e {
                let bj = &b.0[j * f..(j + 1) * f];
                if bj.iter().all(Zero::is_zero) {
                    continue;
                }
                let prod = self.unram_mul(ai, bj);
                for (slot, v) in acc[i + j].iter_mut().zip(prod) {
                    *slot += v;
                }
            }
        }
        // pi^e = -(g_0 + ... + g_{e-1} pi^{e-1})
        for k in (e..2 * e - 1).rev() {
            let c: Vec<BigInt> = acc[k].iter().map(|x| x.mod_floor(&self.modulus)).collect();
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            for (i, g) in self.eisen.iter().enumerate() {
                let term = self.unram_mul(&c, g);
                for (slot, v) in acc[k - e + i].iter_mut().zip(term) {
                    *slot -= v;
                }
            }
        }
        let mut out = Vec::with_capacity(e * f);
        for row in acc.into_iter().take(e) {
            out.extend(row.into_iter().map(|x| x.mod_floor(&self.modulus)));
        }
        Rep(out)
    }

    pub(crate) fn rep_pi(&self) -> Rep {
        let mut r = self.rep_zero();
        if self.spec.e == 1 {
            r.0[0] = BigInt::from(self.spec.p);
        } else {
            r.0[self.spec.f] = BigInt::one();
        }
        r
    }

    pub(crate) fn rep_pow(&self, a: &Rep, mut k: u64) -> Rep {
        let mut base = a.clone();
        let mut acc = self.rep_from_int(&BigInt::one());
        while k > 0 {
            if k & 1 == 1 {
                acc = self.rep_mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.rep_mul(&base, &base);
            }
        }
        acc
    }

    pub(crate) fn rep_mul_pi_pow(&self, a: &Rep, k: u64) -> Rep {
        if k == 0 {
            return a.clone();
        }
        if self.spec.e == 1 {
            let s = BigInt::from(self.spec.p).pow(k as u32);
            return Rep(a
                .0
                .iter()
                .map(|x| (x * &s).mod_floor(&self.modulus))
                .collect());
        }
        self.rep_mul(a, &self.rep_pow(&self.rep_pi(), k))
    }

    /// `a / pi^k`, assuming `v(a) >= k`.
    ///
    /// With `q = ceil(k/e)`: `a / pi^k = a * pi^(eq-k) * (-H)^(-q) / p^q`,
    /// since `pi^e = -p H`.
    pub(crate) fn rep_div_pi_pow(&self, a: &Rep, k: u64) -> Rep {
        if k == 0 {
            return a.clone();
        }
        let e = self.spec.e as u64;
        let q = k.div_ceil(e);
        let mut y = if e == 1 {
            a.clone()
        } else {
            let neg_h_inv = self.rep_neg(&self.h_inv);
            let t = self.rep_mul(
                &self.rep_pow(&neg_h_inv, q),
                &self.rep_pow(&self.rep_pi(), e * q - k),
            );
            self.rep_mul(a, &t)
        };
        let pq = BigInt::from(self.spec.p).pow(q as u32);
        for x in y.0.iter_mut() {
            debug_assert!(x.is_multiple_of(&pq), "division by pi^{k} is not exact");
            *x = (&*x / &pq).mod_floor(&self.modulus);
        }
        y
    }

    /// `pi`-adic valuation of a representative, or `None` if it is zero mod `p^store`.
    pub(crate) fn rep_valuation(&self, a: &Rep) -> Option<u64> {
        let (e, f) = (self.spec.e, self.spec.f);
        let p = BigInt::from(self.spec.p);
        let mut best: Option<u64> = None;
        for j in 0..e {
            let vj = a.0[j * f..(j + 1) * f]
                .iter()
                .filter_map(|x| vp(x, &p))
                .min();
            if let Some(v) = vj {
                let cand = e as u64 * v as u64 + j as u64;
                best = Some(best.map_or(cand, |b: u64| b.min(cand)));
            }
        }
        best
    }

    pub(crate) fn rep_residue(&self, a: &Rep) -> ResidueElement {
        let p = BigInt::from(self.spec.p);
        let coeffs: Vec<u64> = a.0[..self.spec.f]
            .iter()
            .map(|x| x.mod_floor(&p).to_u64().expect("small"))
            .collect();
        self.residue.from_coeffs(&coeffs)
    }

    /// Inverse of a unit by Newton iteration `y <- y (2 - a y)`.
    pub(crate) fn rep_inv_unit(&self, a: &Rep) -> Rep {
        let r = self.rep_residue(a);
        let r_inv = self.residue.inv(&r).expect("rep_inv_unit needs a unit");
        let mut y = self.rep_lift(&r_inv);
        let two = self.rep_from_int(&BigInt::from(2));
        let target = self.spec.e as u64 * self.store as u64;
        let mut correct = 1u64;
        while correct < target {
            let ay = self.rep_mul(a, &y);
            y = self.rep_mul(&y, &self.rep_sub(&two, &ay));
            correct *= 2;
        }
        y
    }

    pub(crate) fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Coordinates of a representative reduced to the symmetric range, for display.
    pub(crate) fn rep_coords(&self, a: &Rep) -> Vec<BigInt> {
        let half = &self.modulus / 2;
        a.0.iter()
            .map(|x| {
                if x > &half {
                    x - &self.modulus
                } else {
                    x.clone()
                }
            })
            .collect()
    }

    pub(crate) fn h_inv(&self) -> &Rep {
        &self.h_inv
    }
}

fn unram_coords(c: &[i64], f: usize) -> Result<Vec<BigInt>> {
    if c.len() > f && c[f..].iter().any(|&x| x != 0) {
        return Err(Error::NotEisenstein(format!(
            "coefficient {c:?} has more than {f} unramified coordinates"
        )));
    }
    let mut out = vec![BigInt::zero(); f];
    for (i, &x) in c.iter().enumerate().take(f) {
        out[i] = BigInt::from(x);
    }
    Ok(out)
}
