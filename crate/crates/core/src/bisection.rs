//! Finite disjoint unions of basic bisections `Z(μ, m, ν)`.
//!
//! A [`Bisection`] is a list of triples whose sources `{ν_i}` and ranges
//! `{μ_i}` are prefix-free families. It is full when both families are
//! complete prefix codes, i.e. their cylinders partition `E_A^∞`; full
//! bisections are the elements of the topological full group.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::action::{act_inf, act_path};
use crate::error::{Error, Result};
use crate::groupoid::{extend_triple, Triple};
use crate::matrix::MatrixPair;
use crate::path::{InfPath, Path};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Bisection {
    pieces: Vec<Triple>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BisectionCheck {
    pub is_bisection: bool,
    pub is_full: bool,
}

/// A family of paths sorted so that every path directly precedes its
/// extensions.
#[derive(Debug, Clone)]
pub struct PrefixCode {
    paths: Vec<Path>,
}

impl PrefixCode {
    pub fn new(mut paths: Vec<Path>) -> Self {
        paths.sort();
        PrefixCode { paths }
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    /// No member is a prefix of another (duplicates included).
    pub fn is_prefix_free(&self) -> bool {
        self.paths.windows(2).all(|w| !w[0].is_prefix_of(&w[1]))
    }

    /// Some member is a prefix of `p`.
    pub fn has_prefix_of(&self, p: &Path) -> bool {
        (0..=p.len()).any(|k| self.paths.binary_search(&p.prefix(k)).is_ok())
    }

    /// Members extending `p` (including `p` itself).
    pub fn extensions<'a>(&'a self, p: &'a Path) -> impl Iterator<Item = &'a Path> + 'a {
        let start = self.paths.partition_point(|q| q < p);
        self.paths[start..].iter().take_while(move |q| p.is_prefix_of(q))
    }

    fn has_proper_extension(&self, p: &Path) -> bool {
        self.extensions(p).any(|q| q.len() > p.len())
    }

    /// `Z(p)` is covered by the cylinders of the family.
    pub fn covers(&self, pair: &MatrixPair, p: &Path) -> bool {
        if self.has_prefix_of(p) {
            return true;
        }
        if !self.has_proper_extension(p) {
            return false;
        }
        pair.out_edges(p.range()).all(|e| {
            let mut q = p.clone();
            q.push(e);
            self.covers(pair, &q)
        })
    }

    /// The cylinders partition `E_A^∞`. Assumes prefix-freeness.
    pub fn is_complete(&self, pair: &MatrixPair) -> bool {
        (0..pair.n()).all(|v| self.covers(pair, &Path::empty(v)))
    }

    /// The coarsest prefix code whose cylinders partition the complement of
    /// the family's union.
    pub fn complement(&self, pair: &MatrixPair) -> Vec<Path> {
        fn walk(code: &PrefixCode, pair: &MatrixPair, p: Path, out: &mut Vec<Path>) {
            if code.has_prefix_of(&p) {
                return;
            }
            if !code.has_proper_extension(&p) {
                out.push(p);
                return;
            }
            for e in pair.out_edges(p.range()) {
                let mut q = p.clone();
                q.push(e);
                walk(code, pair, q, out);
            }
        }
        let mut out = Vec::new();
        for v in 0..pair.n() {
            walk(self, pair, Path::empty(v), &mut out);
        }
        out
    }
}

impl Bisection {
    /// Wraps pieces without checking disjointness; see [`Bisection::check`].
    pub fn from_pieces(pieces: Vec<Triple>) -> Self {
        Bisection { pieces }
    }

    /// Builds a bisection, rejecting overlapping sources or ranges.
    pub fn new(pair: &MatrixPair, pieces: Vec<Triple>) -> Result<Self> {
        for t in &pieces {
            t.validate(pair)?;
        }
        let b = Bisection { pieces };
        if !b.check(pair).is_bisection {
            return Err(Error::NotBisection("sources or ranges overlap".into()));
        }
        Ok(b)
    }

    /// Builds a full bisection.
    pub fn new_full(pair: &MatrixPair, pieces: Vec<Triple>) -> Result<Self> {
        let b = Self::new(pair, pieces)?;
        if !b.check(pair).is_full {
            return Err(Error::NotFull);
        }
        Ok(b)
    }

    /// The identity `⊔_v Z(v, 0, v)`.
    pub fn identity(pair: &MatrixPair) -> Self {
        Bisection { pieces: (0..pair.n()).map(Triple::vertex).collect() }
    }

    pub fn pieces(&self) -> &[Triple] {
        &self.pieces
    }

    pub fn into_pieces(self) -> Vec<Triple> {
        self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn sources(&self) -> PrefixCode {
        PrefixCode::new(self.pieces.iter().map(|t| t.source.clone()).collect())
    }

    pub fn ranges(&self) -> PrefixCode {
        PrefixCode::new(self.pieces.iter().map(|t| t.range.clone()).collect())
    }

    pub fn check(&self, pair: &MatrixPair) -> BisectionCheck {
        let (s, r) = (self.sources(), self.ranges());
        let is_bisection = s.is_prefix_free() && r.is_prefix_free();
        BisectionCheck {
            is_bisection,
            is_full: is_bisection && s.is_complete(pair) && r.is_complete(pair),
        }
    }

    /// Pieces in increasing source order.
    pub fn sorted(mut self) -> Self {
        self.pieces.sort_by(|a, b| a.source.cmp(&b.source));
        self
    }

    /// Every piece replaced by its extension to `depth` more edges.
    pub fn refine(&self, pair: &MatrixPair, depth: usize) -> Self {
        Bisection {
            pieces: self.pieces.iter().flat_map(|t| extend_triple(pair, t, depth)).collect(),
        }
    }

    /// Every piece extended until its source has at least `len` edges.
    pub fn refine_to(&self, pair: &MatrixPair, len: usize) -> Self {
        Bisection {
            pieces: self
                .pieces
                .iter()
                .flat_map(|t| extend_triple(pair, t, len.saturating_sub(t.source.len())))
                .collect(),
        }
    }

    /// `U^{-1} = ⊔ Z(ν_i, -m_i, μ_i)`.
    pub fn inverse(&self) -> Self {
        Bisection { pieces: self.pieces.iter().map(Triple::inverse).collect() }
    }

    /// The product `U · V` (apply `V` first).
    ///
    /// For `u = (μ₁, m₁, ν₁)` and `v = (μ₂, m₂, ν₂)` with comparable `ν₁`, `μ₂`:
    /// if `μ₂ = ν₁τ` the composite is `(μ₁ κ_{m₁}(τ), φ(m₁, τ) + m₂, ν₂)`;
    /// if `ν₁ = μ₂τ` with `τ` nonempty, put `η = κ_{-m₂}(τ)` and the composite
    /// is `(μ₁, m₁ + φ(m₂, η), ν₂η)`. Every range cylinder of `V` must be
    /// covered by sources of `U`.
    pub fn product(pair: &MatrixPair, u: &Bisection, v: &Bisection) -> Result<Bisection> {
        let by_source: HashMap<&Path, usize> =
            u.pieces.iter().enumerate().map(|(k, t)| (&t.source, k)).collect();
        let sources = u.sources();
        let mut out = Vec::new();
        for t2 in &v.pieces {
            let mu2 = &t2.range;
            if !sources.covers(pair, mu2) {
                return Err(Error::NotComposable(format!(
                    "range cylinder {mu2} is not inside the source of the left factor"
                )));
            }
            // a source of U that is a prefix of μ₂
            if let Some(k) = (0..=mu2.len()).find_map(|k| by_source.get(&mu2.prefix(k)).copied()) {
                let t1 = &u.pieces[k];
                let tau = mu2.suffix(t1.source.len());
                let (img, q) = act_path(pair, &t1.shift, &tau);
                out.push(Triple {
                    range: t1.range.concat(&img),
                    shift: q + &t2.shift,
                    source: t2.source.clone(),
                });
                continue;
            }
            // otherwise μ₂ is split among longer sources of U
            let neg = -&t2.shift;
            for nu1 in sources.extensions(mu2) {
                let t1 = &u.pieces[by_source[nu1]];
                let tau = nu1.suffix(mu2.len());
                let (eta, _) = act_path(pair, &neg, &tau);
                let (_, q) = act_path(pair, &t2.shift, &eta);
                out.push(Triple {
                    range: t1.range.clone(),
                    shift: &t1.shift + q,
                    source: t2.source.concat(&eta),
                });
            }
        }
        Ok(Bisection { pieces: out }.sorted())
    }

    /// `π_U(x)` for `x` in the source of `U`.
    pub fn apply(&self, pair: &MatrixPair, x: &InfPath) -> Result<InfPath> {
        let t = self
            .pieces
            .iter()
            .find(|t| x.starts_with(&t.source))
            .ok_or(Error::OutsideSource)?;
        let y = x.drop(t.source.len());
        Ok(act_inf(pair, &t.shift, &y, None)?.prepend(&t.range))
    }

    /// `V ⊔ V^{-1} ⊔ id` on the rest of the unit space; requires the sources
    /// and ranges of `V` to be mutually disjoint. Always a full involution.
    pub fn hat(pair: &MatrixPair, v: &Bisection) -> Result<Bisection> {
        if !v.check(pair).is_bisection {
            return Err(Error::NotBisection("sources or ranges overlap".into()));
        }
        let support = PrefixCode::new(
            v.pieces.iter().flat_map(|t| [t.source.clone(), t.range.clone()]).collect(),
        );
        if !support.is_prefix_free() {
            return Err(Error::OverlappingSupport);
        }
        let mut pieces = v.pieces.clone();
        pieces.extend(v.pieces.iter().map(Triple::inverse));
        pieces.extend(support.complement(pair).into_iter().map(Triple::unit_on));
        Ok(Bisection { pieces }.sorted())
    }

    /// The transposition swapping `Z(p)` and `Z(q)` by `p y ↔ q y`;
    /// requires `r(p) = r(q)` and disjoint cylinders.
    pub fn transposition(pair: &MatrixPair, p: &Path, q: &Path) -> Result<Bisection> {
        let t = Triple::new(p.clone(), BigInt::zero(), q.clone())?;
        Self::hat(pair, &Bisection::from_pieces(vec![t]))
    }

    /// `U_{γ,m} = Z(γ, m, γ) ⊔ id` on the complement of `Z(γ)`.
    pub fn torsion(pair: &MatrixPair, gamma: &Path, m: impl Into<BigInt>) -> Bisection {
        let code = PrefixCode::new(vec![gamma.clone()]);
        let mut pieces = vec![Triple { range: gamma.clone(), shift: m.into(), source: gamma.clone() }];
        pieces.extend(code.complement(pair).into_iter().map(Triple::unit_on));
        Bisection { pieces }.sorted()
    }

    /// Checks the pieces against the pair.
    pub fn validate(&self, pair: &MatrixPair) -> Result<()> {
        self.pieces.iter().try_for_each(|t| t.validate(pair))
    }
}

impl fmt::Display for Bisection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("empty");
        }
        for (k, t) in self.pieces.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for Bisection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "empty" {
            return Ok(Bisection::default());
        }
        let pieces = s.split('+').map(str::parse).collect::<Result<Vec<Triple>>>()?;
        Ok(Bisection { pieces })
    }
}

/// Applies one bisection to many points with a hashed source lookup.
pub struct Evaluator<'a> {
    pair: &'a MatrixPair,
    bis: &'a Bisection,
    by_source: HashMap<Path, usize>,
    max_len: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(pair: &'a MatrixPair, bis: &'a Bisection) -> Self {
        let by_source = bis.pieces.iter().enumerate().map(|(k, t)| (t.source.clone(), k)).collect();
        let max_len = bis.pieces.iter().map(|t| t.source.len()).max().unwrap_or(0);
        Evaluator { pair, bis, by_source, max_len }
    }

    pub fn apply(&self, x: &InfPath) -> Result<InfPath> {
        let head = x.take(self.max_len);
        let k = (0..=self.max_len)
            .find_map(|k| self.by_source.get(&head.prefix(k)).copied())
            .ok_or(Error::OutsideSource)?;
        let t = &self.bis.pieces[k];
        let y = x.drop(t.source.len());
        Ok(act_inf(self.pair, &t.shift, &y, None)?.prepend(&t.range))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::act_inf;

    fn e1() -> MatrixPair {
        "N: 1\nA: 2\nB: 1".parse().unwrap()
    }

    /// Expands words over `a`, `b` into E1 paths.
    fn w(word: &str) -> String {
        if word == "e" {
            return "v:1".into();
        }
        word.chars()
            .map(|c| if c == 'a' { "1.1.0" } else { "1.1.1" })
            .collect::<Vec<_>>()
            .join("-")
    }

    fn tr(mu: &str, m: i64, nu: &str) -> Triple {
        format!("({}; {m}; {})", w(mu), w(nu)).parse().unwrap()
    }

    fn code(words: &[&str]) -> PrefixCode {
        PrefixCode::new(words.iter().map(|s| w(s).parse().unwrap()).collect())
    }

    fn odometer() -> Bisection {
        Bisection::from_pieces(vec![tr("b", 0, "a"), tr("a", 1, "b")])
    }

    #[test]
    fn completeness_of_codes() {
        let p = e1();
        assert!(code(&["a", "b"]).is_complete(&p));
        assert!(code(&["a", "ba", "bb"]).is_complete(&p));
        let partial = code(&["a", "ba"]);
        assert!(partial.is_prefix_free() && !partial.is_complete(&p));
        assert!(!code(&["a", "ab"]).is_prefix_free());
        assert_eq!(partial.complement(&p), vec![w("bb").parse::<Path>().unwrap()]);
    }

    #[test]
    fn check_reports() {
        let p = e1();
        let full = Bisection::from_pieces(vec![tr("a", 0, "a"), tr("ba", 0, "ba"), tr("bb", 0, "bb")]);
        assert_eq!(full.check(&p), BisectionCheck { is_bisection: true, is_full: true });
        let part = Bisection::from_pieces(vec![tr("a", 0, "a"), tr("ba", 0, "ba")]);
        assert_eq!(part.check(&p), BisectionCheck { is_bisection: true, is_full: false });
        let bad = Bisection::from_pieces(vec![tr("a", 0, "a"), tr("b", 0, "aa")]);
        assert!(!bad.check(&p).is_bisection);
        assert!(odometer().check(&p).is_full);
    }

    #[test]
    fn inverse_of_odometer() {
        let inv = odometer().inverse();
        assert_eq!(inv.pieces(), &[tr("a", 0, "b"), tr("b", -1, "a")]);
        assert_eq!(inv.inverse(), odometer());
    }

    #[test]
    fn odometer_on_points() {
        let p = e1();
        let b_inf: InfPath = "v:1|1.1.1".parse().unwrap();
        let a_inf: InfPath = "v:1|1.1.0".parse().unwrap();
        assert_eq!(odometer().apply(&p, &b_inf).unwrap(), a_inf);
        assert_eq!(odometer().apply(&p, &a_inf).unwrap(), "1.1.1|1.1.0".parse().unwrap());
        let id = Bisection::identity(&p);
        assert_eq!(id.apply(&p, &b_inf).unwrap(), b_inf);
        let part = Bisection::from_pieces(vec![tr("a", 0, "a")]);
        assert_eq!(part.apply(&p, &b_inf), Err(Error::OutsideSource));
    }

    #[test]
    fn odometer_squared_adds_two() {
        let p = e1();
        let sq = Bisection::product(&p, &odometer(), &odometer()).unwrap();
        assert!(sq.check(&p).is_full);
        for x in ["v:1|1.1.0", "v:1|1.1.1", "1.1.1|1.1.0", "v:1|1.1.0-1.1.1", "1.1.1-1.1.1|1.1.0-1.1.1-1.1.1"] {
            let x: InfPath = x.parse().unwrap();
            let want = act_inf(&p, &BigInt::from(2), &x, None).unwrap();
            assert_eq!(sq.apply(&p, &x).unwrap(), want, "at {x}");
            assert_eq!(Evaluator::new(&p, &sq).apply(&x).unwrap(), want);
        }
    }

    #[test]
    fn product_with_inverse_is_literally_trivial() {
        let p = e1();
        let u = odometer();
        let uu = Bisection::product(&p, &u, &u.inverse()).unwrap();
        assert!(uu.pieces().iter().all(Triple::is_trivial), "{uu}");
        let refined = u.refine(&p, 2);
        let back = Bisection::product(&p, &refined, &u.inverse()).unwrap();
        assert!(back.pieces().iter().all(Triple::is_trivial), "{back}");
    }

    #[test]
    fn product_requires_coverage() {
        let p = e1();
        let part = Bisection::from_pieces(vec![tr("a", 0, "a")]);
        assert!(matches!(Bisection::product(&p, &part, &odometer()), Err(Error::NotComposable(_))));
    }

    #[test]
    fn hat_completions() {
        let p = e1();
        let h = Bisection::hat(&p, &Bisection::from_pieces(vec![tr("a", 0, "b")])).unwrap();
        assert_eq!(h.pieces(), &[tr("b", 0, "a"), tr("a", 0, "b")]);
        let h = Bisection::hat(&p, &Bisection::from_pieces(vec![tr("aa", 0, "ab")])).unwrap();
        assert_eq!(h.pieces(), &[tr("ab", 0, "aa"), tr("aa", 0, "ab"), tr("b", 0, "b")]);
        assert!(h.check(&p).is_full);
        let sq = Bisection::product(&p, &h, &h).unwrap();
        assert!(sq.pieces().iter().all(Triple::is_trivial));
        let overlap = Bisection::from_pieces(vec![tr("a", 0, "ab")]);
        assert_eq!(Bisection::hat(&p, &overlap), Err(Error::OverlappingSupport));
    }

    #[test]
    fn torsion_generator() {
        let p = e1();
        let u = Bisection::torsion(&p, &w("a").parse().unwrap(), 1);
        assert_eq!(u.pieces(), &[tr("a", 1, "a"), tr("b", 0, "b")]);
    }

    #[test]
    fn text_round_trip() {
        let u = odometer();
        assert_eq!(u.to_string().parse::<Bisection>().unwrap(), u);
        assert_eq!(Bisection::default().to_string().parse::<Bisection>().unwrap(), Bisection::default());
    }
}
