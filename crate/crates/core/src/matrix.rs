//! The defining data of a self-similar graph groupoid: a pair of square
//! integer matrices `A >= 0` and `B` of the same size.
//!
//! `A` is the adjacency matrix of the graph `E_A` (vertices `0..n`, `A[i][j]`
//! parallel edges `i -> j`), and `B` drives the self-similar action.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::path::Edge;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixPair {
    n: usize,
    a: Vec<i64>,
    b: Vec<i64>,
}

impl MatrixPair {
    /// Builds and validates a pair from row vectors.
    pub fn new(a: Vec<Vec<i64>>, b: Vec<Vec<i64>>) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::InvalidPair("N must be positive".into()));
        }
        if b.len() != n {
            return Err(Error::InvalidPair(format!(
                "A has {} rows but B has {}",
                n,
                b.len()
            )));
        }
        for (name, m) in [("A", &a), ("B", &b)] {
            if let Some(row) = m.iter().position(|r| r.len() != n) {
                return Err(Error::InvalidPair(format!(
                    "row {} of {} has {} entries, expected {}",
                    row + 1,
                    name,
                    m[row].len(),
                    n
                )));
            }
        }
        let a: Vec<i64> = a.into_iter().flatten().collect();
        let b: Vec<i64> = b.into_iter().flatten().collect();
        for i in 0..n {
            let row = &a[i * n..(i + 1) * n];
            if let Some(j) = row.iter().position(|&x| x < 0) {
                return Err(Error::InvalidPair(format!(
                    "A[{},{}] = {} is negative",
                    i + 1,
                    j + 1,
                    row[j]
                )));
            }
            if let Some(j) = row.iter().position(|&x| x > u32::MAX as i64) {
                return Err(Error::InvalidPair(format!("A[{},{}] is too large", i + 1, j + 1)));
            }
            if row.iter().all(|&x| x == 0) {
                return Err(Error::InvalidPair(format!("row {} of A is zero", i + 1)));
            }
            for j in 0..n {
                if row[j] == 0 && b[i * n + j] != 0 {
                    return Err(Error::InvalidPair(format!(
                        "B[{},{}] = {} is nonzero where A is zero",
                        i + 1,
                        j + 1,
                        b[i * n + j]
                    )));
                }
            }
        }
        Ok(MatrixPair { n, a, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn b(&self, i: usize, j: usize) -> i64 {
        self.b[i * self.n + j]
    }

    pub fn a_rows(&self) -> Vec<Vec<i64>> {
        self.a.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn b_rows(&self) -> Vec<Vec<i64>> {
        self.b.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    /// Number of edges leaving `v`.
    pub fn out_degree(&self, v: usize) -> u64 {
        (0..self.n).map(|j| self.a(v, j) as u64).sum()
    }

    /// Largest entry of `A`.
    pub fn max_a(&self) -> i64 {
        self.a.iter().copied().max().unwrap_or(0)
    }

    /// Edges leaving `v` in the fixed enumeration order `(range, index)`.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |j| {
            (0..self.a(v, j) as u32).map(move |k| Edge::new(v as u32, j as u32, k))
        })
    }

    /// Edges entering `v`, ordered by `(source, index)`.
    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.a(i, v) as u32).map(move |k| Edge::new(i as u32, v as u32, k))
        })
    }

    pub fn is_edge(&self, e: Edge) -> bool {
        let (i, j) = (e.src as usize, e.dst as usize);
        i < self.n && j < self.n && (e.index as i64) < self.a(i, j)
    }

    /// Number of paths of length `len` ending at each vertex, i.e. `(A^T)^len 1`.
    pub fn paths_ending_at(&self, len: usize) -> Vec<u128> {
        let mut counts = vec![1u128; self.n];
        for _ in 0..len {
            let mut next = vec![0u128; self.n];
            for i in 0..self.n {
                for (j, slot) in next.iter_mut().enumerate() {
                    *slot = slot.saturating_add(counts[i].saturating_mul(self.a(i, j) as u128));
                }
            }
            counts = next;
        }
        counts
    }
}

fn parse_rows(body: &str, key: &str) -> Result<Vec<Vec<i64>>> {
    body.split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>().map_err(|_| {
                        Error::Parse(format!("{key}: `{tok}` is not an integer"))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// Reads the text format
///
/// ```text
/// # comment
/// N: 2
/// A: 2 3; 3 2
/// B: 1 2; 2 1
/// ```
///
/// Blank lines and lines starting with `#` are skipped.
impl FromStr for MatrixPair {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut n = None;
        let mut a = None;
        let mut b = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, body) = line.split_once(':').ok_or_else(|| {
                Error::Parse(format!("line {}: expected `KEY: value`", lineno + 1))
            })?;
            let slot_taken = |seen: bool| {
                if seen {
                    Err(Error::Parse(format!(
                        "line {}: duplicate key `{}`",
                        lineno + 1,
                        key.trim()
                    )))
                } else {
                    Ok(())
                }
            };
            match key.trim() {
                "N" => {
                    slot_taken(n.is_some())?;
                    let v: i64 = body.trim().parse().map_err(|_| {
                        Error::Parse(format!("line {}: N must be an integer", lineno + 1))
                    })?;
                    n = Some(v);
                }
                "A" => {
                    slot_taken(a.is_some())?;
                    a = Some(parse_rows(body, "A")?);
                }
                "B" => {
                    slot_taken(b.is_some())?;
                    b = Some(parse_rows(body, "B")?);
                }
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown key `{}`",
                        lineno + 1,
                        other
                    )))
                }
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing `N:` line".into()))?;
        let a = a.ok_or_else(|| Error::Parse("missing `A:` line".into()))?;
        let b = b.ok_or_else(|| Error::Parse("missing `B:` line".into()))?;
        if n <= 0 {
            return Err(Error::InvalidPair(format!("N = {n} is not positive")));
        }
        if a.len() as i64 != n {
            return Err(Error::InvalidPair(format!("N = {n} but A has {} rows", a.len())));
        }
        MatrixPair::new(a, b)
    }
}

impl fmt::Display for MatrixPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = |m: &[i64]| {
            m.chunks(self.n)
                .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join("; ")
        };
        writeln!(f, "N: {}", self.n)?;
        writeln!(f, "A: {}", rows(&self.a))?;
        writeln!(f, "B: {}", rows(&self.b))
    }
}
