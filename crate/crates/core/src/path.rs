//! Finite paths in `E_A` and eventually periodic infinite paths.
//!
//! Vertices are stored 0-based and printed 1-based. Edge indices are printed
//! as stored, so the edge `e_{1,1,0}` of a one-vertex graph reads `1.1.0`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::MatrixPair;

/// The edge `e_{src,dst,index}`, the `index`-th of the `A[src][dst]` parallel
/// edges from `src` to `dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: u32,
    pub dst: u32,
    pub index: u32,
}

impl Edge {
    pub const fn new(src: u32, dst: u32, index: u32) -> Self {
        Edge { src, dst, index }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.src + 1, self.dst + 1, self.index)
    }
}

impl FromStr for Edge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("`{s}` is not an edge `i.j.n`"));
        let mut it = s.trim().split('.');
        let mut field = || -> Result<u32> {
            it.next().ok_or_else(bad)?.parse::<u32>().map_err(|_| bad())
        };
        let (i, j, n) = (field()?, field()?, field()?);
        if it.next().is_some() || i == 0 || j == 0 {
            return Err(bad());
        }
        Ok(Edge::new(i - 1, j - 1, n))
    }
}

/// A finite path: a base vertex and a (possibly empty) edge sequence leaving it.
///
/// The derived order compares the base vertex first and then the edges
/// lexicographically, so every path sorts directly before its extensions and
/// those extensions form a contiguous run.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    base: u32,
    edges: Vec<Edge>,
}

impl Path {
    pub fn empty(v: usize) -> Self {
        Path { base: v as u32, edges: Vec::new() }
    }

    /// Builds a path, checking that consecutive edges are composable.
    pub fn from_edges(base: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut at = base as u32;
        for e in &edges {
            if e.src != at {
                return Err(Error::InvalidPath(format!(
                    "edge {e} does not start at vertex {}",
                    at + 1
                )));
            }
            at = e.dst;
        }
        Ok(Path { base: base as u32, edges })
    }

    /// Builds a path from a nonempty composable edge sequence.
    pub fn from_nonempty(edges: Vec<Edge>) -> Result<Self> {
        let base = edges
            .first()
            .ok_or_else(|| Error::InvalidPath("empty edge list".into()))?
            .src as usize;
        Self::from_edges(base, edges)
    }

    pub(crate) fn from_raw(base: u32, edges: Vec<Edge>) -> Self {
        debug_assert!(Path::from_edges(base as usize, edges.clone()).is_ok());
        Path { base, edges }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn source(&self) -> usize {
        self.base as usize
    }

    pub fn range(&self) -> usize {
        self.edges.last().map_or(self.base, |e| e.dst) as usize
    }

    /// `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.base == other.base && other.edges.starts_with(&self.edges)
    }

    /// One path extends the other.
    pub fn comparable(&self, other: &Path) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// The prefix `self|_k`.
    pub fn prefix(&self, k: usize) -> Path {
        Path { base: self.base, edges: self.edges[..k].to_vec() }
    }

    /// The tail after the first `k` edges, based at the vertex reached.
    pub fn suffix(&self, k: usize) -> Path {
        let base = if k == 0 { self.base } else { self.edges[k - 1].dst };
        Path { base, edges: self.edges[k..].to_vec() }
    }

    /// If `p` is a prefix of `self`, the remaining tail.
    pub fn strip_prefix(&self, p: &Path) -> Option<Path> {
        p.is_prefix_of(self).then(|| self.suffix(p.len()))
    }

    pub fn push(&mut self, e: Edge) {
        assert_eq!(e.src as usize, self.range(), "edge {e} does not continue the path");
        self.edges.push(e);
    }

    /// Concatenation `self · other`; requires `r(self) = s(other)`.
    pub fn concat(&self, other: &Path) -> Path {
        assert_eq!(self.range(), other.source(), "paths are not composable");
        let mut edges = Vec::with_capacity(self.len() + other.len());
        edges.extend_from_slice(&self.edges);
        edges.extend_from_slice(&other.edges);
        Path { base: self.base, edges }
    }

    /// Checks every edge against `A`.
    pub fn validate(&self, pair: &MatrixPair) -> Result<()> {
        if self.source() >= pair.n() {
            return Err(Error::InvalidPath(format!(
                "vertex {} does not exist",
                self.source() + 1
            )));
        }
        match self.edges.iter().find(|e| !pair.is_edge(**e)) {
            Some(e) => Err(Error::InvalidPath(format!("{e} is not an edge of E_A"))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            return write!(f, "v:{}", self.base + 1);
        }
        for (k, e) in self.edges.iter().enumerate() {
            if k > 0 {
                f.write_str("-")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for Path {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(v) = s.strip_prefix("v:") {
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("`{s}` is not a vertex `v:<k>`")))?;
            if v == 0 {
                return Err(Error::Parse("vertices are numbered from 1".into()));
            }
            return Ok(Path::empty(v - 1));
        }
        let edges = s.split('-').map(str::parse).collect::<Result<Vec<Edge>>>()?;
        Path::from_nonempty(edges)
    }
}

/// All paths of length `len` leaving `v`, in increasing order.
pub fn paths_from(pair: &MatrixPair, v: usize, len: usize) -> Vec<Path> {
    let mut out = vec![Path::empty(v)];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|p| {
                pair.out_edges(p.range()).map(move |e| {
                    let mut q = p.clone();
                    q.edges.push(e);
                    q
                })
            })
            .collect();
    }
    out
}

/// All paths of length `len`, in increasing order.
pub fn all_paths(pair: &MatrixPair, len: usize) -> Vec<Path> {
    (0..pair.n()).flat_map(|v| paths_from(pair, v, len)).collect()
}

/// The eventually periodic point `prefix · cycle · cycle · …` of `E_A^∞`.
///
/// Stored canonically: the cycle is primitive and the prefix is as short as
/// possible, so structural equality is equality of infinite edge sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InfPath {
    prefix: Path,
    cycle: Vec<Edge>,
}

impl InfPath {
    pub fn new(prefix: Path, cycle: Path) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidPath("the periodic part of a point must be nonempty".into()));
        }
        if cycle.source() != prefix.range() || cycle.range() != cycle.source() {
            return Err(Error::InvalidPath(format!(
                "`{cycle}` is not a cycle at the end of `{prefix}`"
            )));
        }
        Ok(Self::canonical(prefix, cycle.edges))
    }

    fn canonical(mut prefix: Path, mut cycle: Vec<Edge>) -> Self {
        let p = cycle.len();
        if let Some(d) = (1..p).find(|&d| p.is_multiple_of(d) && (d..p).all(|k| cycle[k] == cycle[k - d])) {
            cycle.truncate(d);
        }
        while let Some(&last) = prefix.edges.last() {
            if last != *cycle.last().unwrap() {
                break;
            }
            prefix.edges.pop();
            cycle.rotate_right(1);
        }
        InfPath { prefix, cycle }
    }

    /// Assembles `prefix · cycle^∞` from a raw edge sequence split at `start`,
    /// where `edges[start..]` is the period.
    pub(crate) fn from_lasso(base: u32, mut edges: Vec<Edge>, start: usize) -> Self {
        let cycle = edges.split_off(start);
        Self::canonical(Path::from_raw(base, edges), cycle)
    }

    pub fn prefix(&self) -> &Path {
        &self.prefix
    }

    pub fn cycle(&self) -> Path {
        Path::from_raw(self.prefix.range() as u32, self.cycle.clone())
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn source(&self) -> usize {
        self.prefix.source()
    }

    /// The `k`-th edge, counting from 0.
    pub fn edge(&self, k: usize) -> Edge {
        let p = self.prefix.len();
        if k < p {
            self.prefix.edges[k]
        } else {
            self.cycle[(k - p) % self.cycle.len()]
        }
    }

    /// The finite prefix `x|_k`.
    pub fn take(&self, k: usize) -> Path {
        Path { base: self.prefix.base, edges: (0..k).map(|i| self.edge(i)).collect() }
    }

    /// The shifted point `σ^k(x)`.
    pub fn drop(&self, k: usize) -> InfPath {
        let p = self.prefix.len();
        if k <= p {
            return InfPath { prefix: self.prefix.suffix(k), cycle: self.cycle.clone() };
        }
        let mut cycle = self.cycle.clone();
        let shift = (k - p) % cycle.len();
        cycle.rotate_left(shift);
        let base = cycle[0].src;
        InfPath { prefix: Path::empty(base as usize), cycle }
    }

    /// `x ∈ Z(μ)`.
    pub fn starts_with(&self, mu: &Path) -> bool {
        mu.source() == self.source() && mu.edges.iter().enumerate().all(|(k, e)| self.edge(k) == *e)
    }

    /// The point `μ · x`; requires `r(μ) = s(x)`.
    pub fn prepend(&self, mu: &Path) -> InfPath {
        Self::canonical(mu.concat(&self.prefix), self.cycle.clone())
    }

    pub fn validate(&self, pair: &MatrixPair) -> Result<()> {
        self.prefix.validate(pair)?;
        self.cycle().validate(pair)
    }
}

impl fmt::Display for InfPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.prefix, self.cycle())
    }
}

impl FromStr for InfPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("`{s}` is not a point `<prefix>|<cycle>`")))?;
        let cycle: Path = tail.parse()?;
        let prefix: Path = if head.trim().is_empty() {
            Path::empty(cycle.source())
        } else {
            head.parse()?
        };
        InfPath::new(prefix, cycle)
    }
}
