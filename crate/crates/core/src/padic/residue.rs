//! The residue field `F_{p^f}` of an unramified layer, plus the small amount
//! of `F_p[x]` arithmetic needed to pick and validate its defining polynomial.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Polynomials over `F_p` as little-endian coefficient vectors.
pub(crate) mod fp_poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1 % p;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let c = r[r.len() - 1] * lead_inv % p;
            for (j, &mj) in m.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * mj % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    /// `x^(p^k) mod m`.
    pub fn frobenius_power(k: usize, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[0, 1], m, p);
        for _ in 0..k {
            // raise to the p-th power by repeated squaring
            let mut base = acc.clone();
            let mut e = p;
            let mut out = vec![1u64];
            while e > 0 {
                if e & 1 == 1 {
                    out = mulmod(&out, &base, m, p);
                }
                base = mulmod(&base, &base, m, p);
                e >>= 1;
            }
            acc = out;
        }
        acc
    }

    /// Rabin's irreducibility test for a polynomial of degree `f >= 1`.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let mut m = m.to_vec();
        trim(&mut m);
        let f = match m.len().checked_sub(1) {
            Some(0) | None => return false,
            Some(f) => f,
        };
        if f == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        if sub(&frobenius_power(f, &m, p), &rem(&x, &m, p), p) != Vec::<u64>::new() {
            return false;
        }
        for q in prime_factors(f as u64) {
            let h = sub(&frobenius_power(f / q as usize, &m, p), &x, p);
            if gcd(&m, &h, p).len() != 1 {
                return false;
            }
        }
        true
    }

    pub fn prime_factors(mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut q = 2;
        while q * q <= n {
            if n.is_multiple_of(q) {
                out.push(q);
                while n.is_multiple_of(q) {
                    n /= q;
                }
            }
            q += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree `f` over
/// `F_p`, comparing coefficients from `x^{f-1}` down to the constant term.
pub fn smallest_irreducible(p: u64, f: usize) -> Vec<u64> {
    let total = p.pow(f as u32);
    for code in 0..total {
        // code's base-p digits, most significant first, are a_{f-1}..a_0
        let mut coeffs = vec![0u64; f + 1];
        coeffs[f] = 1;
        let mut c = code;
        for a in coeffs.iter_mut().take(f) {
            *a = c % p;
            c /= p;
        }
        if fp_poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

/// Element of `F_{p^f}` in the power basis `1, t, ..., t^{f-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ResidueElement {
    coeffs: Vec<u64>,
}

impl ResidueElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            parts.push(match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{c}*t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{c}*t^{i}"),
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// The finite field `F_p[t]/(modulus)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResidueField {
    p: u64,
    f: usize,
    modulus: Vec<u64>,
}

impl ResidueField {
    /// `modulus` must be monic of degree `f` and irreducible mod `p`.
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        let f = modulus.len() - 1;
        ResidueField { p, f, modulus }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> ResidueElement {
        ResidueElement {
            coeffs: vec![0; self.f],
        }
    }

    pub fn one(&self) -> ResidueElement {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> ResidueElement {
        let mut e = self.zero();
        e.coeffs[0] = n % self.p;
        e
    }

    /// The class of `t`, a root of the defining polynomial.
    pub fn generator(&self) -> ResidueElement {
        self.reduce(&[0, 1])
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> ResidueElement {
        self.reduce(coeffs)
    }

    fn reduce(&self, a: &[u64]) -> ResidueElement {
        let a: Vec<u64> = a.iter().map(|c| c % self.p).collect();
        let mut r = fp_poly::rem(&a, &self.modulus, self.p);
        r.resize(self.f, 0);
        ResidueElement { coeffs: r }
    }

    pub fn add(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        ResidueElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &ResidueElement) -> ResidueElement {
        ResidueElement {
            coeffs: a.coeffs.iter().map(|x| (self.p - x) % self.p).collect(),
        }
    }

    pub fn sub(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        self.reduce(&fp_poly::mul(&a.coeffs, &b.coeffs, self.p))
    }

    pub fn pow(&self, a: &ResidueElement, mut e: u64) -> ResidueElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &ResidueElement) -> Option<ResidueElement> {
        (!a.is_zero()).then(|| self.pow(a, self.size() - 2))
    }

    /// Integer code `sum c_i p^i`, a bijection onto `0..p^f`.
    pub fn index(&self, a: &ResidueElement) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn from_index(&self, mut idx: u64) -> ResidueElement {
        let mut coeffs = vec![0; self.f];
        for c in coeffs.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        ResidueElement { coeffs }
    }

    pub fn elements(&self) -> impl Iterator<Item = ResidueElement> + '_ {
        (0..self.size()).map(|i| self.from_index(i))
    }

    /// Evaluate a polynomial (little-endian coefficients) by Horner's rule.
    pub fn eval(&self, coeffs: &[ResidueElement], x: &ResidueElement) -> ResidueElement {
        coeffs
            .iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    /// A square root; every element has one when `p = 2`.
    pub fn sqrt(&self, a: &ResidueElement) -> Option<ResidueElement> {
        self.elements().find(|x| self.mul(x, x) == *a)
    }
}
