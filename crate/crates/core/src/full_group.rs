//! The topological full group: equality of elements, the splitting
//! `U = U_𝓗 · U_A`, factorizations of index-zero elements into
//! transpositions, and rewriting over torsion generators and an SFT part.
//!
//! Words are products read left to right, so the rightmost token acts first.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::bisection::{Bisection, PrefixCode};
use crate::error::{Error, Result};
use crate::graph::{is_contracting, is_irreducible, Truth};
use crate::groupoid::{extend_triple, Groupoid, Mode, Triple};
use crate::homology::{self, LimitClass, Tag};
use crate::matrix::MatrixPair;
use crate::path::{all_paths, Path};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    /// `π_{V̂}` for a bisection `V` with disjoint source and range.
    Transposition(Bisection),
    /// `π_{U_{γ,m}}` where `U_{γ,m} = Z(γ, m, γ) ⊔ id`.
    TorsionGen { gamma: Path, m: BigInt },
    /// `τ · g · τ` with `τ = π_{bŷ}`.
    Conjugate { token: Box<Token>, by: Bisection },
    /// An element of the SFT subgroup, kept as a bisection with zero shifts.
    SftResidual(Bisection),
}

impl Token {
    /// The full bisection this token stands for.
    pub fn evaluate(&self, pair: &MatrixPair) -> Result<Bisection> {
        match self {
            Token::Transposition(v) => Bisection::hat(pair, v),
            Token::TorsionGen { gamma, m } => Ok(Bisection::torsion(pair, gamma, m.clone())),
            Token::Conjugate { token, by } => {
                let tau = Bisection::hat(pair, by)?;
                let inner = token.evaluate(pair)?;
                Bisection::product(pair, &Bisection::product(pair, &tau, &inner)?, &tau)
            }
            Token::SftResidual(u) => Ok(u.clone()),
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Transposition(v) => write!(f, "T {v}"),
            Token::TorsionGen { gamma, m } => write!(f, "G {gamma} {m}"),
            Token::Conjugate { token, by } => write!(f, "C {by} | {token}"),
            Token::SftResidual(u) => write!(f, "SFT {u}"),
        }
    }
}

impl FromStr for Token {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        match head {
            "T" => Ok(Token::Transposition(rest.parse()?)),
            "SFT" => Ok(Token::SftResidual(rest.parse()?)),
            "G" => {
                let mut it = rest.split_whitespace();
                let (Some(g), Some(m), None) = (it.next(), it.next(), it.next()) else {
                    return Err(Error::Parse(format!("`{s}` is not `G <gamma> <m>`")));
                };
                let m = m.parse().map_err(|_| Error::Parse(format!("`{m}` is not an integer")))?;
                Ok(Token::TorsionGen { gamma: g.parse()?, m })
            }
            "C" => {
                let (by, inner) = rest
                    .split_once('|')
                    .ok_or_else(|| Error::Parse(format!("`{s}` is not `C <tau> | <token>`")))?;
                Ok(Token::Conjugate { token: Box::new(inner.parse()?), by: by.parse()? })
            }
            _ => Err(Error::Parse(format!("unknown token `{head}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GenWord {
    pub tokens: Vec<Token>,
}

impl GenWord {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The product of the tokens as one full bisection.
    pub fn evaluate(&self, pair: &MatrixPair) -> Result<Bisection> {
        let mut acc = Bisection::identity(pair);
        for t in &self.tokens {
            acc = Bisection::product(pair, &acc, &t.evaluate(pair)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tokens {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for GenWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(GenWord { tokens })
    }
}

/// `π_U = π_V`, decided on germs: every piece of `U · V^{-1}` must be a unit.
pub fn fg_equals(g: &Groupoid, u: &Bisection, v: &Bisection) -> Result<Truth> {
    let w = Bisection::product(g.pair(), u, &v.inverse())?;
    Ok(w.pieces().iter().fold(Truth::Yes, |acc, t| acc & g.triple_is_unit(t)))
}

/// `U = U_𝓗 · U_A` with `U_𝓗 = ⊔ Z(μ_i, m_i, μ_i)` and `U_A = ⊔ Z(μ_i, 0, ν_i)`.
pub fn decompose_ha(u: &Bisection) -> (Bisection, Bisection) {
    let h = u.pieces().iter().map(|t| Triple { source: t.range.clone(), ..t.clone() }).collect();
    let a = u.pieces().iter().map(|t| Triple { shift: BigInt::zero(), ..t.clone() }).collect();
    (Bisection::from_pieces(h), Bisection::from_pieces(a))
}

/// `⊔ Z(μ_i, m_i, μ_i)` over disjoint `μ_i`, completed by the identity.
pub fn diagonal(pair: &MatrixPair, parts: Vec<(Path, BigInt)>) -> Bisection {
    let code = PrefixCode::new(parts.iter().map(|(p, _)| p.clone()).collect());
    let mut pieces: Vec<Triple> =
        parts.into_iter().map(|(p, m)| Triple { range: p.clone(), shift: m, source: p }).collect();
    pieces.extend(code.complement(pair).into_iter().map(Triple::unit_on));
    Bisection::from_pieces(pieces).sorted()
}

fn require_pseudo_free(g: &Groupoid) -> Result<()> {
    if g.mode() != Mode::PseudoFree {
        return Err(Error::NotPseudoFree);
    }
    Ok(())
}

/// Per-vertex torsion sums `Σ_{r(μ_i) = v} m_i` of degree-zero pieces that
/// all have length `n`.
fn vertex_sums(pair: &MatrixPair, pieces: &[Triple]) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); pair.n()];
    for t in pieces {
        v[t.range.range()] += &t.shift;
    }
    v
}

/// The permutation part of a degree-zero bisection whose pieces all have
/// length `n`, as transpositions `(p₁ p_k)…(p₁ p₂)` per cycle.
fn permutation_word(pair: &MatrixPair, pieces: &[Triple]) -> Result<Vec<Token>> {
    let sigma: HashMap<&Path, &Path> = pieces.iter().map(|t| (&t.source, &t.range)).collect();
    let mut starts: Vec<&Path> = sigma.keys().copied().collect();
    starts.sort();
    let mut seen: HashSet<&Path> = HashSet::new();
    let mut out = Vec::new();
    for p1 in starts {
        if seen.contains(p1) {
            continue;
        }
        let mut cycle = vec![p1];
        seen.insert(p1);
        let mut cur = sigma[p1];
        while cur != p1 {
            seen.insert(cur);
            cycle.push(cur);
            cur = sigma[cur];
        }
        for q in cycle[1..].iter().rev() {
            let t = Triple::new(p1.clone(), BigInt::zero(), (*q).clone())?;
            out.push(Token::Transposition(Bisection::from_pieces(vec![t])));
        }
    }
    let _ = pair;
    Ok(out)
}

/// Factors `U ⊆ 𝓗` with vanishing torsion class into transpositions.
///
/// Pieces are brought to a common length `n`; if the per-vertex sums do not
/// vanish there but the class is zero in the limit, `n` is raised (at most
/// `N` more levels suffice). Per vertex `v` the sums are collected on the
/// least path `μ_{i_v}` by the pairs `V̂_l · Ŵ_l`, and the remaining
/// permutation of `E_A^n` is split into transpositions.
pub fn kernel_factor(g: &Groupoid, u: &Bisection) -> Result<GenWord> {
    require_pseudo_free(g)?;
    let pair = g.pair();
    if u.pieces().iter().any(|t| t.degree() != 0) {
        return Err(Error::NotInKernelGroupoid);
    }
    let class = homology::ihn_class(pair, u)?;
    if !class.is_zero(pair) {
        return Err(Error::NonzeroIndex(format!("torsion class {class} is not zero")));
    }
    let n0 = u.pieces().iter().map(|t| t.source.len()).max().unwrap_or(0);
    let mut level = n0;
    let mut pieces = u.refine_to(pair, n0).into_pieces();
    while vertex_sums(pair, &pieces).iter().any(|x| !x.is_zero()) {
        pieces = pieces.iter().flat_map(|t| extend_triple(pair, t, 1)).collect();
        level += 1;
        debug_assert!(level <= n0 + pair.n());
    }

    let mut tokens = Vec::new();
    let mut by_vertex: BTreeMap<usize, Vec<&Triple>> = BTreeMap::new();
    for t in &pieces {
        by_vertex.entry(t.range.range()).or_default().push(t);
    }
    for group in by_vertex.values_mut() {
        group.sort_by(|a, b| a.range.cmp(&b.range));
        let lead = &group[0].range;
        for t in group[1..].iter().rev() {
            if t.shift.is_zero() {
                continue;
            }
            let v = Triple { range: lead.clone(), shift: t.shift.clone(), source: t.range.clone() };
            let w = Triple { range: lead.clone(), shift: BigInt::zero(), source: t.range.clone() };
            tokens.push(Token::Transposition(Bisection::from_pieces(vec![w])));
            tokens.push(Token::Transposition(Bisection::from_pieces(vec![v])));
        }
    }
    tokens.extend(permutation_word(pair, &pieces)?);
    Ok(GenWord { tokens })
}

/// A full bisection in 𝓗 whose torsion class is `target`: one `U_{μ_v, v_v}`
/// per nonzero coordinate, `μ_v` the least path of length `level` ending at `v`.
pub fn realize_h1(pair: &MatrixPair, target: &LimitClass) -> Result<Bisection> {
    if target.tag != Tag::B {
        return Err(Error::TagMismatch);
    }
    let paths = all_paths(pair, target.level);
    let mut parts = Vec::new();
    for (v, c) in target.v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mu = paths.iter().find(|p| p.range() == v).ok_or(Error::NoPathToVertex(v))?;
        parts.push((mu.clone(), c.clone()));
    }
    Ok(diagonal(pair, parts))
}

/// For each vertex in `need`, a path `μ_v` of length `n` ending at `v` and an
/// edge `e_v` into `s(μ_v)` such that all `μ_v` and `e_v μ_v` are mutually
/// disjoint. Non-loop edges are tried first.
fn choose_lifts(pair: &MatrixPair, need: &[usize], n: usize) -> Option<Vec<(Path, Path)>> {
    let paths = all_paths(pair, n);
    let options: Vec<Vec<(Path, Path)>> = need
        .iter()
        .map(|&v| {
            let mut opts = Vec::new();
            for mu in paths.iter().filter(|p| p.range() == v) {
                let mut edges: Vec<_> = pair.in_edges(mu.source()).collect();
                edges.sort_by_key(|e| e.src == e.dst);
                for e in edges {
                    let emu = Path::from_edges(e.src as usize, vec![e]).ok()?.concat(mu);
                    if !mu.comparable(&emu) {
                        opts.push((mu.clone(), emu));
                    }
                }
            }
            Some(opts)
        })
        .collect::<Option<_>>()?;

    fn search(options: &[Vec<(Path, Path)>], k: usize, chosen: &mut Vec<(Path, Path)>) -> bool {
        if k == options.len() {
            return true;
        }
        for (mu, emu) in &options[k] {
            let clash = chosen.iter().any(|(a, b)| {
                [a, b].iter().any(|p| p.comparable(mu) || p.comparable(emu))
            });
            if clash {
                continue;
            }
            chosen.push((mu.clone(), emu.clone()));
            if search(options, k + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    search(&options, 0, &mut chosen).then_some(chosen)
}

/// Factors `U ⊆ 𝓗` with `I(π_U) = 0` in the full groupoid into
/// transpositions.
///
/// The torsion class is written as `ρ¹([f])`; with `μ_v`, `e_v` as in
/// [`choose_lifts`], `R = ⊔ Z(μ_v, f_v, e_v μ_v)` and
/// `T = ⊔ Z(e_v μ_v, 0, μ_v)` give `γ = π_{R̂} π_{T̂}` in 𝓗 with torsion class
/// `ρ¹([f])`. Then `U γ^{-1}` has zero class and goes to [`kernel_factor`].
pub fn h_to_g_factor(g: &Groupoid, u: &Bisection, max_level: usize) -> Result<GenWord> {
    require_pseudo_free(g)?;
    let pair = g.pair();
    if u.pieces().iter().any(|t| t.degree() != 0) {
        return Err(Error::NotInKernelGroupoid);
    }
    let idx = homology::index(pair, u)?;
    if !idx.is_zero() {
        return Err(Error::NonzeroIndex(idx.to_string()));
    }
    let target = homology::ihn_class(pair, u)?;
    if target.is_zero(pair) {
        return kernel_factor(g, u);
    }
    let f = homology::rho1_solve(pair, &target, max_level)?.ok_or(Error::SolveFailed(max_level))?;
    let need: Vec<usize> = (0..pair.n()).collect();
    let mut found = None;
    for n in f.level.max(1)..=f.level.max(1) + 2 * pair.n() + 4 {
        let lifted = f.raise(pair, n);
        let need: Vec<usize> = need.iter().copied().filter(|&v| !lifted.v[v].is_zero()).collect();
        if let Some(lifts) = choose_lifts(pair, &need, n) {
            found = Some((lifted, need, lifts));
            break;
        }
    }
    let (lifted, need, lifts) = found.ok_or(Error::SolveFailed(max_level))?;
    let mut r = Vec::new();
    let mut t = Vec::new();
    for (&v, (mu, emu)) in need.iter().zip(&lifts) {
        r.push(Triple { range: mu.clone(), shift: lifted.v[v].clone(), source: emu.clone() });
        t.push(Triple { range: emu.clone(), shift: BigInt::zero(), source: mu.clone() });
    }
    let (r, t) = (Bisection::from_pieces(r), Bisection::from_pieces(t));
    let gamma = Bisection::product(pair, &Bisection::hat(pair, &r)?, &Bisection::hat(pair, &t)?)?;
    let rest = Bisection::product(pair, u, &gamma.inverse())?;
    let mut word = kernel_factor(g, &rest)?;
    word.tokens.push(Token::Transposition(r));
    word.tokens.push(Token::Transposition(t));
    Ok(word)
}

/// Least `n >= 1` with at least two paths of length `n` ending at every vertex.
pub fn rewrite_level(pair: &MatrixPair) -> Result<usize> {
    (1..=64)
        .find(|&n| pair.paths_ending_at(n).iter().all(|&c| c >= 2))
        .ok_or(Error::DegenerateGraph)
}

/// Rewrites `π_U` over the torsion generators `U_{γ,m}` (`|γ| = n`,
/// `|m| <= R`), transpositions `τ_{μ,γ}` and one SFT element.
///
/// Pieces are split until `|μ_i|, |ν_i| >= n` and `|m_i| <= R`, which
/// contraction guarantees. Each nonzero `Z(μ_i, m_i, μ_i)` of `U_𝓗` is emitted
/// directly when `|μ_i| = n` and otherwise as `τ U_{γ,m_i} τ` with `γ` the
/// least path of length `n` ending at `r(μ_i)` other than `μ_i|_n`.
pub fn rewrite_generators(g: &Groupoid, u: &Bisection) -> Result<GenWord> {
    let pair = g.pair();
    if !is_contracting(pair) {
        return Err(Error::NotContracting);
    }
    if !is_irreducible(pair) {
        return Err(Error::NotIrreducible);
    }
    let n = rewrite_level(pair)?;
    let radius = BigInt::from(crate::action::nucleus_radius(pair));
    let mut pieces = Vec::new();
    let mut stack: Vec<Triple> = u.pieces().iter().rev().cloned().collect();
    while let Some(t) = stack.pop() {
        if t.range.len() >= n && t.source.len() >= n && t.shift.abs() <= radius {
            pieces.push(t);
        } else {
            stack.extend(extend_triple(pair, &t, 1).into_iter().rev());
        }
    }
    let (h, a) = decompose_ha(&Bisection::from_pieces(pieces));
    let paths = all_paths(pair, n);
    let mut tokens = Vec::new();
    for t in h.pieces() {
        if t.shift.is_zero() {
            continue;
        }
        let mu = &t.range;
        if mu.len() == n {
            tokens.push(Token::TorsionGen { gamma: mu.clone(), m: t.shift.clone() });
            continue;
        }
        let head = mu.prefix(n);
        let gamma = paths
            .iter()
            .find(|p| p.range() == mu.range() && **p != head)
            .ok_or(Error::DegenerateGraph)?;
        let by = Bisection::from_pieces(vec![Triple::new(mu.clone(), BigInt::zero(), gamma.clone())?]);
        tokens.push(Token::Conjugate {
            token: Box::new(Token::TorsionGen { gamma: gamma.clone(), m: t.shift.clone() }),
            by,
        });
    }
    tokens.push(Token::SftResidual(a));
    Ok(GenWord { tokens })
}
