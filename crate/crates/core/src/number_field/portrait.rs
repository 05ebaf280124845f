//! Preperiodic portraits of `x^2 + c` over quadratic fields.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::classify::classify_quadratic;
use super::is_square;
use super::quad::{QuadElement, QuadField};
use crate::error::{Error, Result};
use crate::poly::Ring;

/// Default number of backward steps from the cycles.
pub const DEFAULT_DEPTH_CAP: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct Portrait {
    /// Size and cycle lengths, e.g. `5(1,1)`; `0` when there are no points.
    pub label: String,
    /// SHA-256 of a canonical form of the functional graph.
    pub graph_hash: String,
    pub vertices: Vec<QuadElement>,
    /// `(i, j)` when vertex `i` maps to vertex `j`.
    pub edges: Vec<(usize, usize)>,
    pub cycle_lengths: Vec<usize>,
}

impl Portrait {
    /// Builds a portrait from a closed vertex set and its image indices.
    fn from_map(vertices: Vec<QuadElement>, image: Vec<usize>) -> Self {
        let n = vertices.len();
        let mut on_cycle = vec![false; n];
        let mut cycle_lengths = Vec::new();
        let mut seen = vec![false; n];
        for start in 0..n {
            // walking n steps from any vertex lands on a cycle
            let mut x = start;
            for _ in 0..n {
                x = image[x];
            }
            if seen[x] {
                continue;
            }
            let mut len = 0;
            let mut y = x;
            loop {
                seen[y] = true;
                on_cycle[y] = true;
                len += 1;
                y = image[y];
                if y == x {
                    break;
                }
            }
            cycle_lengths.push(len);
        }
        cycle_lengths.sort_unstable_by(|a, b| b.cmp(a));
        let label = if n == 0 {
            "0".to_string()
        } else {
            let lens: Vec<String> = cycle_lengths.iter().map(|l| l.to_string()).collect();
            format!("{n}({})", lens.join(","))
        };
        let form = canonical_form(&image, &on_cycle);
        let graph_hash = hex::encode(Sha256::digest(form.as_bytes()));
        let edges = image.iter().enumerate().map(|(i, &j)| (i, j)).collect();
        Portrait {
            label,
            graph_hash,
            vertices,
            edges,
            cycle_lengths,
        }
    }

    pub fn to_dot(&self, title: &str) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"{title}\" {{").unwrap();
        writeln!(out, "  node [shape=circle, fontsize=10];").unwrap();
        let mut periodic = vec![false; self.vertices.len()];
        for (i, _) in &self.edges {
            let mut x = *i;
            for _ in 0..self.vertices.len() {
                x = self.edges[x].1;
            }
            periodic[x] = true;
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let style = if periodic[i] {
                ", shape=doublecircle"
            } else {
                ""
            };
            writeln!(out, "  v{i} [label=\"{v}\"{style}];").unwrap();
        }
        for (i, j) in &self.edges {
            writeln!(out, "  v{i} -> v{j};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Canonical text of a functional graph: each cycle is read as the
/// lexicographically least rotation of the encodings of the trees hanging
/// off its vertices, and the cycles are sorted.
fn canonical_form(image: &[usize], on_cycle: &[bool]) -> String {
    let n = image.len();
    let mut children = vec![Vec::new(); n];
    for (x, &y) in image.iter().enumerate() {
        if !on_cycle[x] {
            children[y].push(x);
        }
    }
    fn tree(x: usize, children: &[Vec<usize>]) -> String {
        let mut subs: Vec<String> = children[x].iter().map(|&c| tree(c, children)).collect();
        subs.sort();
        format!("({})", subs.concat())
    }
    let mut cycles = Vec::new();
    let mut done = vec![false; n];
    for start in 0..n {
        if !on_cycle[start] || done[start] {
            continue;
        }
        let mut seq = Vec::new();
        let mut x = start;
        while !done[x] {
            done[x] = true;
            seq.push(tree(x, &children));
            x = image[x];
        }
        let best = (0..seq.len())
            .map(|r| {
                let mut rot = seq[r..].to_vec();
                rot.extend_from_slice(&seq[..r]);
                rot.join(",")
            })
            .min()
            .unwrap_or_default();
        cycles.push(format!("[{best}]"));
    }
    cycles.sort();
    cycles.concat()
}

/// All `K`-rational preperiodic points of `x^2 + c`, found by walking
/// preimages `+-sqrt(y - c)` back from the periodic points.
pub fn compute_portrait(k: &QuadField, c: &QuadElement, depth_cap: usize) -> Result<Portrait> {
    let report = classify_quadratic(k, c)?;
    let mut vertices: Vec<QuadElement> = report
        .periodic_points
        .iter()
        .map(|p| p.value.clone())
        .collect();
    let mut queue: VecDeque<(usize, usize)> = (0..vertices.len()).map(|i| (i, 0)).collect();
    while let Some((i, depth)) = queue.pop_front() {
        let Some(w) = is_square(k, &Ring::sub(&vertices[i], c)) else {
            continue;
        };
        for pre in [w.clone(), Ring::neg(&w)] {
            if vertices.contains(&pre) {
                continue;
            }
            if depth + 1 > depth_cap {
                return Err(Error::DepthCapReached(depth_cap));
            }
            vertices.push(pre);
            queue.push_back((vertices.len() - 1, depth + 1));
        }
    }
    let image = vertices
        .iter()
        .map(|x| {
            let y = Ring::add(&Ring::mul(x, x), c);
            vertices
                .iter()
                .position(|v| *v == y)
                .expect("preimage walk is closed under the map")
        })
        .collect();
    Ok(Portrait::from_map(vertices, image))
}
