//! Text form of local-field elements: `d0 + d1*pi + d2*pi^2 + ... (mod pi^N)`.

use std::fmt;

use num_bigint::BigInt;

use super::element::PadicElement;
use super::field::FieldRef;
use super::hensel::sqrt;
use crate::error::{Error, Result};
use crate::expr::{self, ExprTarget};

fn pi_power(k: i64) -> String {
    match k {
        1 => "pi".to_string(),
        _ => format!("pi^{k}"),
    }
}

impl fmt::Display for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if !self.is_zero() {
            for (j, d) in self.digits().iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let k = self.shift() + j as i64;
                let ds = d.to_string();
                terms.push(if k == 0 {
                    ds
                } else if ds == "1" {
                    pi_power(k)
                } else if ds.contains('+') {
                    format!("({ds})*{}", pi_power(k))
                } else {
                    format!("{ds}*{}", pi_power(k))
                });
            }
        }
        if terms.is_empty() {
            terms.push("0".to_string());
        }
        write!(f, "{} (mod pi^{})", terms.join(" + "), self.precision())
    }
}

pub(crate) struct ElementTarget<'a> {
    pub(crate) field: &'a FieldRef,
}

impl ExprTarget for ElementTarget<'_> {
    type Value = PadicElement;

    fn int(&self, n: &BigInt) -> Result<PadicElement> {
        Ok(PadicElement::from_bigint(self.field, n))
    }

    fn var(&self, name: &str) -> Result<PadicElement> {
        match name {
            "pi" => Ok(PadicElement::uniformizer(self.field)),
            "t" => Ok(PadicElement::generator(self.field)),
            "i" => self.sqrt(&BigInt::from(-1)),
            _ => Err(Error::Parse(format!("unknown name {name:?} in element"))),
        }
    }

    fn sqrt(&self, d: &BigInt) -> Result<PadicElement> {
        sqrt(&PadicElement::from_bigint(self.field, d))?
            .ok_or_else(|| Error::Parse(format!("sqrt({d}) does not exist in this field")))
    }

    fn add(&self, a: &PadicElement, b: &PadicElement) -> Result<PadicElement> {
        a.checked_add(b)
    }

    fn sub(&self, a: &PadicElement, b: &PadicElement) -> Result<PadicElement> {
        a.checked_sub(b)
    }

    fn mul(&self, a: &PadicElement, b: &PadicElement) -> Result<PadicElement> {
        a.checked_mul(b)
    }

    fn div(&self, a: &PadicElement, b: &PadicElement) -> Result<PadicElement> {
        a.checked_div(b)
    }

    fn neg(&self, a: &PadicElement) -> Result<PadicElement> {
        Ok(-a)
    }
}

/// Parses an element; a trailing `(mod pi^k)` sets the absolute precision.
pub fn parse_element(field: &FieldRef, s: &str) -> Result<PadicElement> {
    let s = s.trim();
    let (body, prec) = match s.rfind("(mod") {
        Some(pos) if s.ends_with(')') => {
            let inner = s[pos + 4..s.len() - 1].trim();
            let k = inner
                .strip_prefix("pi^")
                .or_else(|| (inner == "pi").then_some("1"))
                .ok_or_else(|| Error::Parse(format!("bad precision suffix in {s:?}")))?;
            let k: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad precision in {s:?}")))?;
            (&s[..pos], Some(k))
        }
        _ => (s, None),
    };
    let e = expr::parse(body)?;
    let x = expr::eval(&e, &ElementTarget { field })?;
    Ok(match prec {
        Some(k) => x.truncate(k),
        None => x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::field::{make_field, qp, unramified};

    #[test]
    fn display_forms() {
        let k = qp(2, 8).unwrap();
        assert_eq!(
            PadicElement::from_int(&k, 5).to_string(),
            "1 + pi^2 (mod pi^8)"
        );
        assert_eq!(PadicElement::zero(&k).to_string(), "0 (mod pi^8)");
        let half = PadicElement::from_int(&k, 2).inv().unwrap();
        assert_eq!(half.to_string(), "pi^-1 (mod pi^6)");
        let k4 = unramified(2, 2, 4).unwrap();
        let x = parse_element(&k4, "t + (1+t)*pi").unwrap();
        assert_eq!(x.to_string(), "t + (1+t)*pi (mod pi^4)");
    }

    #[test]
    fn parse_print_roundtrip() {
        let k = unramified(3, 2, 6).unwrap();
        for s in [
            "2*t + pi^2 (mod pi^6)",
            "(1+2*t)*pi^3 (mod pi^5)",
            "0 (mod pi^3)",
            "2 (mod pi^1)",
        ] {
            assert_eq!(parse_element(&k, s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn parse_rationals_and_roots() {
        let k = unramified(2, 2, 16).unwrap();
        let alpha = parse_element(&k, "(1 + sqrt(5))/2").unwrap();
        let beta = parse_element(&k, "(1 - sqrt(5))/2").unwrap();
        assert_eq!(&alpha * &beta, PadicElement::from_int(&k, -1));
        let q2 = qp(2, 16).unwrap();
        assert!(parse_element(&q2, "sqrt(5)").is_err());
        assert!(parse_element(&q2, "1/3").unwrap().is_unit());
        let r = make_field(2, 1, 2, Some(vec![vec![-2], vec![0], vec![1]]), 16).unwrap();
        assert_eq!(
            parse_element(&r, "pi^2").unwrap(),
            PadicElement::from_int(&r, 2)
        );
    }
}
