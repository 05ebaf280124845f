//! Exhaustive dynamics on the finite rings `O_F / pi^M`.
//!
//! Elements of `O_F / pi^M` are digit vectors `(d_0, ..., d_{M-1})` over the
//! residue field, enumerated lexicographically with `d_0` most significant,
//! so reducing to level `M - 1` is integer division by `q = p^f`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::dynamics::LocalPoly;
use crate::error::{Error, Result};
use crate::padic::{FieldRef, PadicElement, ResidueElement};

/// Default cap on table sizes.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Full function table of a polynomial map on `O_F / pi^M`.
#[derive(Clone, Debug)]
pub struct FiniteRingMap {
    field: FieldRef,
    level: u32,
    table: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicCensus {
    /// `(index, exact period)` for every periodic element, sorted by index.
    pub periodic: Vec<(u64, u64)>,
    /// Steps until each element enters a cycle.
    pub tails: Vec<u64>,
    /// Cycles, each starting at its smallest index; sorted.
    pub cycles: Vec<Vec<u64>>,
}

impl PeriodicCensus {
    pub fn count(&self) -> usize {
        self.periodic.len()
    }
}

impl FiniteRingMap {
    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn size(&self) -> u64 {
        self.table.len() as u64
    }

    /// Digits of the element with the given index.
    pub fn digits(&self, mut index: u64) -> Vec<ResidueElement> {
        let k = self.field.residue_field();
        let q = k.size();
        let mut out = vec![k.zero(); self.level as usize];
        for slot in out.iter_mut().rev() {
            *slot = k.from_index(index % q);
            index /= q;
        }
        out
    }

    pub fn element(&self, index: u64) -> PadicElement {
        PadicElement::from_digits(&self.field, &self.digits(index), self.level as i64)
    }

    /// Text label such as `1 + t*pi`.
    pub fn label(&self, index: u64) -> String {
        let text = self.element(index).to_string();
        text.split(" (mod").next().unwrap_or_default().to_string()
    }

    pub fn census(&self) -> PeriodicCensus {
        periodic_census(self)
    }
}

fn index_of(field: &FieldRef, x: &PadicElement, level: u32) -> Result<u64> {
    let k = field.residue_field();
    let q = k.size();
    let digits = x.integral_digits(level as usize)?;
    Ok(digits.iter().fold(0u64, |acc, d| acc * q + k.index(d)))
}

/// Evaluates the map on every element of `O_F / pi^M`.
pub fn build_map(phi: &LocalPoly, level: u32, budget: u64) -> Result<FiniteRingMap> {
    if level == 0 {
        return Err(Error::InvalidInput("oracle level must be >= 1".into()));
    }
    let big = phi.field();
    let q = big.residue_size() as u128;
    let needed = q.checked_pow(level).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    if (level as i64) > big.precision() {
        return Err(Error::PrecisionTooLowToDecide(format!(
            "level {level} exceeds the field precision {}",
            big.precision()
        )));
    }
    let field = big.with_precision(level as i64)?;
    let coeffs = phi
        .coeffs()
        .iter()
        .map(|c| {
            if !c.is_zero() && !c.is_integral() {
                return Err(Error::NotIntegral(c.shift()));
            }
            let digits = c.integral_digits(level as usize)?;
            Ok(PadicElement::from_digits(&field, &digits, level as i64))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut map = FiniteRingMap {
        field: field.clone(),
        level,
        table: Vec::with_capacity(needed as usize),
    };
    for idx in 0..needed as u64 {
        let x = map.element(idx);
        let mut y = PadicElement::zero(&field);
        for c in coeffs.iter().rev() {
            y = &(&y * &x) + c;
        }
        map.table.push(index_of(&field, &y, level)?);
    }
    Ok(map)
}

/// Periodic elements, exact periods and tail lengths of a finite map.
pub fn periodic_census(map: &FiniteRingMap) -> PeriodicCensus {
    let table = &map.table;
    let n = table.len();
    const NEW: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;
    let mut state = vec![NEW; n];
    let mut tail = vec![0u64; n];
    let mut period = vec![0u64; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if state[start] != NEW {
            continue;
        }
        let mut path = Vec::new();
        let mut x = start;
        while state[x] == NEW {
            state[x] = ON_PATH;
            path.push(x);
            x = table[x] as usize;
        }
        let mut cut = path.len();
        if state[x] == ON_PATH {
            let pos = path.iter().position(|&y| y == x).expect("on path");
            let cycle: Vec<usize> = path[pos..].to_vec();
            for &y in &cycle {
                period[y] = cycle.len() as u64;
                tail[y] = 0;
                state[y] = DONE;
            }
            let min_pos = (0..cycle.len())
                .min_by_key(|&i| cycle[i])
                .expect("nonempty");
            let mut rotated: Vec<u64> = cycle[min_pos..].iter().map(|&y| y as u64).collect();
            rotated.extend(cycle[..min_pos].iter().map(|&y| y as u64));
            cycles.push(rotated);
            cut = pos;
        }
        for &y in path[..cut].iter().rev() {
            tail[y] = tail[table[y] as usize] + 1;
            state[y] = DONE;
        }
    }
    cycles.sort();
    let periodic = (0..n)
        .filter(|&i| period[i] > 0)
        .map(|i| (i as u64, period[i]))
        .collect();
    PeriodicCensus {
        periodic,
        tails: tail,
        cycles,
    }
}

/// Number of periodic elements at each level `1..=max_level`.
pub fn oracle_count(phi: &LocalPoly, max_level: u32, budget: u64) -> Result<Vec<usize>> {
    (1..=max_level)
        .map(|m| Ok(build_map(phi, m, budget)?.census().count()))
        .collect()
}

/// Graphviz rendering with nested clusters for residue-digit prefixes:
/// elements sharing `d_0` sit in one cluster, inside it those sharing
/// `(d_0, d_1)`, and so on.
pub fn to_dot(map: &FiniteRingMap, title: &str) -> String {
    let census = map.census();
    let q = map.field.residue_size();
    let mut out = String::new();
    writeln!(out, "digraph \"{title}\" {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle, fontsize=10];").unwrap();
    fn cluster(
        map: &FiniteRingMap,
        out: &mut String,
        prefix: u64,
        depth: u32,
        q: u64,
        indent: usize,
        periodic: &[bool],
    ) {
        let pad = " ".repeat(indent);
        let level = map.level;
        if depth == level {
            let style = if periodic[prefix as usize] {
                ", shape=doublecircle"
            } else {
                ""
            };
            writeln!(
                out,
                "{pad}n{prefix} [label=\"{}\"{style}];",
                map.label(prefix)
            )
            .unwrap();
            return;
        }
        let open = depth > 0;
        let inner = if open { indent + 2 } else { indent };
        if open {
            writeln!(out, "{pad}subgraph cluster_{depth}_{prefix} {{").unwrap();
            let label = map
                .digits(prefix * q.pow(level - depth))
                .iter()
                .take(depth as usize)
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",");
            writeln!(out, "{pad}  label=\"{label}\";").unwrap();
        }
        for d in 0..q {
            cluster(map, out, prefix * q + d, depth + 1, q, inner, periodic);
        }
        if open {
            writeln!(out, "{pad}}}").unwrap();
        }
    }
    let mut periodic = vec![false; map.table.len()];
    for &(i, _) in &census.periodic {
        periodic[i as usize] = true;
    }
    cluster(map, &mut out, 0, 0, q, 2, &periodic);
    for (i, &j) in map.table.iter().enumerate() {
        writeln!(out, "  n{i} -> n{j};").unwrap();
    }
    out.push_str("}\n");
    out
}
