//! Arrows `[μ, m, ν; x]` of the groupoid and the triples `(μ, m, ν)` that name
//! its basic compact open bisections `Z(μ, m, ν)`.
//!
//! The only relation ever used is the basic one,
//! `(μ, m, ν; x) ~ (μ κ_m(e), φ(m, e), ν e; x)` for `e` the next edge of `x`
//! after `ν`. Composition, inversion and equality are all reduced to it.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::action::{act_edge, act_inf, act_path};
use crate::error::{Error, Result};
use crate::graph::{is_pseudo_free, Truth};
use crate::matrix::MatrixPair;
use crate::path::{paths_from, InfPath, Path};

/// `(μ, m, ν)` with `r(μ) = r(ν)`; as a set, `Z(μ, m, ν)` has source `Z(ν)`
/// and range `Z(μ)` and acts by `ν y ↦ μ κ_m(y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub range: Path,
    pub shift: BigInt,
    pub source: Path,
}

impl Triple {
    pub fn new(range: Path, shift: impl Into<BigInt>, source: Path) -> Result<Self> {
        if range.range() != source.range() {
            return Err(Error::InvalidTriple(format!(
                "`{range}` ends at {} but `{source}` ends at {}",
                range.range() + 1,
                source.range() + 1
            )));
        }
        Ok(Triple { range, shift: shift.into(), source })
    }

    /// `Z(v, 0, v)`, the unit space over `Z(v)`.
    pub fn vertex(v: usize) -> Self {
        Triple { range: Path::empty(v), shift: BigInt::zero(), source: Path::empty(v) }
    }

    /// `Z(μ, 0, μ)`.
    pub fn unit_on(mu: Path) -> Self {
        Triple { range: mu.clone(), shift: BigInt::zero(), source: mu }
    }

    /// The degree `c = |μ| - |ν|`.
    pub fn degree(&self) -> i64 {
        self.range.len() as i64 - self.source.len() as i64
    }

    /// `Z(μ, m, ν)^{-1} = Z(ν, -m, μ)`.
    pub fn inverse(&self) -> Triple {
        Triple { range: self.source.clone(), shift: -&self.shift, source: self.range.clone() }
    }

    /// Literally the identity on its source: `μ = ν` and `m = 0`.
    pub fn is_trivial(&self) -> bool {
        self.range == self.source && self.shift.is_zero()
    }

    /// One step of the basic relation past the edge-path `eta` leaving `r(ν)`.
    pub fn extend_by(&self, pair: &MatrixPair, eta: &Path) -> Triple {
        let (img, q) = act_path(pair, &self.shift, eta);
        Triple { range: self.range.concat(&img), shift: q, source: self.source.concat(eta) }
    }

    pub fn validate(&self, pair: &MatrixPair) -> Result<()> {
        self.range.validate(pair)?;
        self.source.validate(pair)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}; {})", self.range, self.shift, self.source)
    }
}

impl FromStr for Triple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("`{s}` is not a triple `(mu; m; nu)`")))?;
        let parts: Vec<&str> = inner.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("`{s}` needs exactly three `;`-separated fields")));
        }
        let m: BigInt = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("`{}` is not an integer", parts[1].trim())))?;
        Triple::new(parts[0].parse()?, m, parts[2].parse()?)
    }
}

/// `{(μ κ_m(η), φ(m, η), ν η) : η ∈ r(ν) E_A^depth}`, a partition of `Z(μ, m, ν)`.
pub fn extend_triple(pair: &MatrixPair, t: &Triple, depth: usize) -> Vec<Triple> {
    if depth == 0 {
        return vec![t.clone()];
    }
    paths_from(pair, t.source.range(), depth).iter().map(|eta| t.extend_by(pair, eta)).collect()
}

/// The germ `[μ, m, ν; x]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    triple: Triple,
    point: InfPath,
}

impl Arrow {
    pub fn new(triple: Triple, point: InfPath) -> Result<Self> {
        if !point.starts_with(&triple.source) {
            return Err(Error::IncompatibleArrow);
        }
        Ok(Arrow { triple, point })
    }

    pub fn unit(x: InfPath) -> Self {
        Arrow { triple: Triple::vertex(x.source()), point: x }
    }

    pub fn triple(&self) -> &Triple {
        &self.triple
    }

    pub fn source(&self) -> &InfPath {
        &self.point
    }

    pub fn degree(&self) -> i64 {
        self.triple.degree()
    }

    /// The representative whose source path is `x|_len`; `len >= |ν|`.
    pub fn extended_to(&self, pair: &MatrixPair, len: usize) -> Arrow {
        let k = self.triple.source.len();
        debug_assert!(len >= k);
        let eta = self.point.take(len).suffix(k);
        Arrow { triple: self.triple.extend_by(pair, &eta), point: self.point.clone() }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.triple;
        write!(f, "[{}; {}; {}; {}]", t.range, t.shift, t.source, self.point)
    }
}

/// How equality of germs is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `A` and `B` share their zero pattern: a germ is determined by its
    /// aligned triple, so every equality test is definite.
    PseudoFree,
    /// General pairs: bounded search over cocycle states, three-valued.
    Bounded,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pseudo-free" => Ok(Mode::PseudoFree),
            "bounded" => Ok(Mode::Bounded),
            _ => Err(Error::Parse(format!("unknown mode `{s}`"))),
        }
    }
}

/// Default cap on the number of search states in bounded mode.
pub const DEFAULT_STATE_BOUND: usize = 100_000;

/// A pair together with the equality regime used for its groupoid.
#[derive(Debug, Clone)]
pub struct Groupoid {
    pair: MatrixPair,
    mode: Mode,
    bound: usize,
}

impl Groupoid {
    /// Picks pseudo-free mode whenever the pair allows it.
    pub fn new(pair: MatrixPair) -> Self {
        let mode = if is_pseudo_free(&pair) { Mode::PseudoFree } else { Mode::Bounded };
        Groupoid { pair, mode, bound: DEFAULT_STATE_BOUND }
    }

    /// Forces a mode; pseudo-free mode on a pair that is not is an error.
    pub fn with_mode(pair: MatrixPair, mode: Mode) -> Result<Self> {
        if mode == Mode::PseudoFree && !is_pseudo_free(&pair) {
            return Err(Error::NotPseudoFree);
        }
        Ok(Groupoid { pair, mode, bound: DEFAULT_STATE_BOUND })
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    pub fn pair(&self) -> &MatrixPair {
        &self.pair
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// `r([μ, m, ν; ν y]) = μ κ_m(y)`.
    pub fn range(&self, g: &Arrow) -> Result<InfPath> {
        let t = &g.triple;
        let y = g.point.drop(t.source.len());
        Ok(act_inf(&self.pair, &t.shift, &y, None)?.prepend(&t.range))
    }

    /// Decides `a₁ = a₂` as elements of the groupoid.
    ///
    /// After aligning source lengths the two triples share `ν`; they agree iff
    /// their ranges agree and the running cocycles along the common tail meet.
    pub fn arrow_eq(&self, a1: &Arrow, a2: &Arrow) -> Truth {
        if a1.point != a2.point || a1.degree() != a2.degree() {
            return Truth::No;
        }
        let len = a1.triple.source.len().max(a2.triple.source.len());
        let (g, h) = (a1.extended_to(&self.pair, len), a2.extended_to(&self.pair, len));
        if g.triple.range != h.triple.range {
            return Truth::No;
        }
        if g.triple.shift == h.triple.shift {
            return Truth::Yes;
        }
        if self.mode == Mode::PseudoFree {
            return Truth::No;
        }
        let x = &a1.point;
        let plen = x.prefix().len();
        let (mut a, mut b) = (g.triple.shift, h.triple.shift);
        let mut seen: HashSet<(usize, BigInt, BigInt)> = HashSet::new();
        for k in len.. {
            if k - len >= self.bound {
                return Truth::Unknown;
            }
            let e = x.edge(k);
            let (f1, a2) = act_edge(&self.pair, &a, e);
            let (f2, b2) = act_edge(&self.pair, &b, e);
            if f1 != f2 {
                return Truth::No;
            }
            if a2 == b2 {
                return Truth::Yes;
            }
            (a, b) = (a2, b2);
            if k + 1 >= plen {
                let pos = (k + 1 - plen) % x.period();
                if !seen.insert((pos, a.clone(), b.clone())) {
                    return Truth::No;
                }
            }
        }
        unreachable!()
    }

    /// `g · h`, defined when `s(g) = r(h)`.
    pub fn compose(&self, g: &Arrow, h: &Arrow) -> Result<Arrow> {
        let rh = self.range(h)?;
        if g.point != rh {
            return Err(Error::NotComposable(format!("s(g) = {} but r(h) = {}", g.point, rh)));
        }
        // Extend h until its range path is at least as long as g's source path,
        // then extend g along its source to the same length.
        let (hm, gs) = (h.triple.range.len(), g.triple.source.len());
        let h = if hm < gs { h.extended_to(&self.pair, h.triple.source.len() + gs - hm) } else { h.clone() };
        let g = g.extended_to(&self.pair, h.triple.range.len());
        debug_assert_eq!(g.triple.source, h.triple.range);
        Ok(Arrow {
            triple: Triple {
                range: g.triple.range,
                shift: g.triple.shift + h.triple.shift,
                source: h.triple.source,
            },
            point: h.point,
        })
    }

    /// `[μ, m, ν; x]^{-1} = [ν, -m, μ; μ κ_m(y)]`.
    pub fn inverse(&self, g: &Arrow) -> Result<Arrow> {
        Ok(Arrow { triple: g.triple.inverse(), point: self.range(g)? })
    }

    /// Whether `Z(μ, m, ν)` is contained in the unit space, i.e. every germ is
    /// a unit.
    ///
    /// A unit needs degree 0 and `μ = ν`. In pseudo-free mode that leaves
    /// exactly `m = 0`. In bounded mode the states `(vertex, m)` reachable from
    /// `(r(ν), m)` are explored: every branch must fix its edge and reach `m = 0`.
    pub fn triple_is_unit(&self, t: &Triple) -> Truth {
        if t.range != t.source {
            return Truth::No;
        }
        if t.shift.is_zero() {
            return Truth::Yes;
        }
        if self.mode == Mode::PseudoFree {
            return Truth::No;
        }
        // Depth-first over states with nonzero m; a cycle means some point keeps
        // a nonzero cocycle forever and its germ is not a unit.
        let mut done: HashSet<(usize, BigInt)> = HashSet::new();
        let mut on_stack: HashSet<(usize, BigInt)> = HashSet::new();
        let mut stack: Vec<((usize, BigInt), Vec<(usize, BigInt)>, usize)> = Vec::new();
        let root = (t.source.range(), t.shift.clone());
        let children = |s: &(usize, BigInt)| -> Option<Vec<(usize, BigInt)>> {
            let mut out = Vec::new();
            for e in self.pair.out_edges(s.0) {
                let (f, q) = act_edge(&self.pair, &s.1, e);
                if f != e {
                    return None;
                }
                if !q.is_zero() {
                    out.push((e.dst as usize, q));
                }
            }
            Some(out)
        };
        match children(&root) {
            None => return Truth::No,
            Some(c) => {
                on_stack.insert(root.clone());
                stack.push((root, c, 0));
            }
        }
        let mut visited = 1usize;
        while let Some((state, kids, next)) = stack.last_mut() {
            if *next == kids.len() {
                let s = state.clone();
                on_stack.remove(&s);
                done.insert(s);
                stack.pop();
                continue;
            }
            let child = kids[*next].clone();
            *next += 1;
            if on_stack.contains(&child) {
                return Truth::No;
            }
            if done.contains(&child) {
                continue;
            }
            visited += 1;
            if visited > self.bound {
                return Truth::Unknown;
            }
            match children(&child) {
                None => return Truth::No,
                Some(c) => {
                    on_stack.insert(child.clone());
                    stack.push((child, c, 0));
                }
            }
        }
        Truth::Yes
    }
}

/// Largest absolute middle entry, used to size searches.
pub fn max_shift(ts: &[Triple]) -> BigInt {
    ts.iter().map(|t| t.shift.abs()).max().unwrap_or_default()
}
