//! Homology of the groupoid and the index map.
//!
//! `H₀ ≅ coker(I - A)`, `H₁ ≅ ker(I - A) ⊕ coker(I - B)` and, for pseudo-free
//! pairs, `H₂ ≅ ker(I - B)`. The index of a full bisection is computed in
//! those coordinates: the kernel part from `Ψ` and the cokernel part from the
//! torsion sums of its kernel-groupoid factor.

pub mod limit;
pub mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::bisection::Bisection;
use crate::error::{Error, Result};
use crate::graph::is_pseudo_free;
use crate::matrix::MatrixPair;

pub use limit::{connect, connect_pow, phi, phi_inv, phi_pow, rho, LimitClass, Tag};
pub use snf::{smith, IntMatrix, Smith};

/// A finitely generated abelian group `Z^r ⊕ Z/d₁ ⊕ … ⊕ Z/d_k`, `d_i | d_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbGroup {
    pub fn trivial() -> Self {
        AbGroup { free_rank: 0, torsion: Vec::new() }
    }

    /// `coker M = Z^rows / M Z^cols`.
    pub fn coker(m: &IntMatrix) -> Self {
        let s = smith(m);
        AbGroup {
            free_rank: m.rows() - s.rank,
            torsion: s.invariant_factors().into_iter().filter(|d| !d.is_one()).collect(),
        }
    }

    /// `ker M`, always free.
    pub fn ker(m: &IntMatrix) -> Self {
        AbGroup { free_rank: m.cols() - smith(m).rank, torsion: Vec::new() }
    }

    /// Direct sum, renormalized into invariant factors.
    pub fn sum(&self, other: &AbGroup) -> AbGroup {
        let t: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        let k = t.len();
        let mut d = IntMatrix::zeros(k, k);
        for (i, x) in t.into_iter().enumerate() {
            d[(i, i)] = x;
        }
        AbGroup {
            free_rank: self.free_rank + other.free_rank,
            torsion: smith(&d).invariant_factors().into_iter().filter(|d| !d.is_one()).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// `Some(order)` for finite groups.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// `|G ⊗ Z/2| = 2^(r + #{i : d_i even})`.
    pub fn mod2_order(&self) -> BigInt {
        let even = self.torsion.iter().filter(|d| d.is_even()).count();
        BigInt::one() << (self.free_rank + even)
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" (+) "))
        }
    }
}

fn i_minus(pair: &MatrixPair, tag: Tag, transpose: bool) -> IntMatrix {
    let n = pair.n();
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let (r, c) = if transpose { (j, i) } else { (i, j) };
            let x = match tag {
                Tag::A => pair.a(r, c),
                Tag::B => pair.b(r, c),
            };
            m[(i, j)] -= x;
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub h0: AbGroup,
    pub h1: AbGroup,
    /// Present only for pseudo-free pairs.
    pub h2: Option<AbGroup>,
}

impl Homology {
    /// `(H₀ ⊕ H₂, H₁)`, the two groups paired with K-theory.
    pub fn hk_sums(&self) -> Option<(AbGroup, AbGroup)> {
        Some((self.h0.sum(self.h2.as_ref()?), self.h1.clone()))
    }
}

pub fn homology_groups(pair: &MatrixPair) -> Homology {
    let ia = i_minus(pair, Tag::A, false);
    let ib = i_minus(pair, Tag::B, false);
    Homology {
        h0: AbGroup::coker(&ia),
        h1: AbGroup::ker(&ia).sum(&AbGroup::coker(&ib)),
        h2: is_pseudo_free(pair).then(|| AbGroup::ker(&ib)),
    }
}

/// For `c ∈ ker ρ⁰ ⊂ Z_A`, the vector `u = (Aᵀ)^N v ∈ ker(I - Aᵀ)`, which does
/// not depend on the level chosen for `c`.
pub fn ker_coords(pair: &MatrixPair, c: &LimitClass) -> Result<Vec<BigInt>> {
    if c.tag != Tag::A {
        return Err(Error::TagMismatch);
    }
    let u = connect_pow(pair, Tag::A, &c.v, pair.n());
    let au = connect(pair, Tag::A, &u);
    if au != u {
        return Err(Error::NotInKernel);
    }
    Ok(u)
}

/// A canonical representative of `v` modulo `(I - Mᵀ) Z^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CokerElem {
    pub rep: Vec<BigInt>,
    pub is_zero: bool,
}

/// Reduces `v` modulo the image of `I - Mᵀ`: with `D = P (I - Mᵀ) Q`, the
/// coordinates `y = P v` are taken mod `d_i` where `d_i ≠ 0` and kept where
/// `d_i = 0`; the representative is `P^{-1} y`.
pub fn coker_reduce(pair: &MatrixPair, tag: Tag, v: &[BigInt]) -> CokerElem {
    let s = smith(&i_minus(pair, tag, true));
    let mut y = s.p.mul_vec(v);
    for (i, yi) in y.iter_mut().enumerate().take(s.rank) {
        *yi = yi.mod_floor(&s.d[(i, i)]);
    }
    let is_zero = y.iter().all(Zero::is_zero);
    CokerElem { rep: s.p_inv.mul_vec(&y), is_zero }
}

/// `ρ¹([f]) = target`: for levels `L = max(t, 1), …, max_level` solves
/// `(Bᵀ - I) w = (Bᵀ)^{L-t} v` and returns `[f] = (L - 1, w)`.
pub fn rho1_solve(pair: &MatrixPair, target: &LimitClass, max_level: usize) -> Result<Option<LimitClass>> {
    if target.tag != Tag::B {
        return Err(Error::TagMismatch);
    }
    let m = i_minus(pair, Tag::B, true);
    let neg: IntMatrix = IntMatrix::zeros(pair.n(), pair.n()).sub(&m);
    let s = smith(&neg);
    let start = target.level.max(1);
    let mut rhs = connect_pow(pair, Tag::B, &target.v, start - target.level);
    for level in start..=max_level {
        if let Some(w) = s.solve(&rhs) {
            return Ok(Some(LimitClass::new(Tag::B, level - 1, w)));
        }
        rhs = connect(pair, Tag::B, &rhs);
    }
    Ok(None)
}

/// `Ψ(U) = Σ_i φ^{(|μ_i| - |ν_i|)}(|ν_i|, 1_{r(ν_i)}) ∈ Z_A`.
pub fn psi(pair: &MatrixPair, u: &Bisection) -> LimitClass {
    let n = pair.n();
    let mut acc = LimitClass::zero(Tag::A, n);
    for t in u.pieces() {
        let k = t.degree();
        if k == 0 {
            continue;
        }
        let base = LimitClass::basis(Tag::A, n, t.source.len(), t.source.range(), 1);
        acc = acc.add(pair, &phi_pow(pair, k, &base)).expect("same tag");
    }
    acc
}

/// `I_𝓗(π_U) = Σ_i m_i [1_{Z(μ_i, 1, μ_i)}] ∈ Z_B` for `U` in the kernel
/// groupoid (every piece of degree 0).
pub fn ihn_class(pair: &MatrixPair, u: &Bisection) -> Result<LimitClass> {
    let n = pair.n();
    let mut acc = LimitClass::zero(Tag::B, n);
    for t in u.pieces() {
        if t.degree() != 0 {
            return Err(Error::NotInKernelGroupoid);
        }
        if t.shift.is_zero() {
            continue;
        }
        let c = LimitClass::basis(Tag::B, n, t.range.len(), t.range.range(), t.shift.clone());
        acc = acc.add(pair, &c)?;
    }
    Ok(acc)
}

/// `I(π_U)` in `ker(I - Aᵀ) ⊕ coker(I - Bᵀ)` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexValue {
    pub ker: Vec<BigInt>,
    pub coker: Vec<BigInt>,
    pub coker_zero: bool,
}

impl IndexValue {
    pub fn is_zero(&self) -> bool {
        self.coker_zero && self.ker.iter().all(Zero::is_zero)
    }

    pub fn add(&self, pair: &MatrixPair, other: &IndexValue) -> IndexValue {
        let sum: Vec<BigInt> = self.coker.iter().zip(&other.coker).map(|(a, b)| a + b).collect();
        let c = coker_reduce(pair, Tag::B, &sum);
        IndexValue {
            ker: self.ker.iter().zip(&other.ker).map(|(a, b)| a + b).collect(),
            coker: c.rep,
            coker_zero: c.is_zero,
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        write!(f, "ker=[{}] coker=[{}]", show(&self.ker), show(&self.coker))
    }
}

/// The index of a full bisection. Writing `U = U_𝓗 · U_A` with
/// `U_𝓗 = ⊔ Z(μ_i, m_i, μ_i)`, the kernel part is read from `Ψ(U)` and the
/// cokernel part from `I_𝓗(U_𝓗)`.
pub fn index(pair: &MatrixPair, u: &Bisection) -> Result<IndexValue> {
    let ker = ker_coords(pair, &psi(pair, u))?;
    let h = Bisection::from_pieces(
        u.pieces()
            .iter()
            .map(|t| crate::groupoid::Triple {
                range: t.range.clone(),
                shift: t.shift.clone(),
                source: t.range.clone(),
            })
            .collect(),
    );
    let class = ihn_class(pair, &h)?;
    let c = coker_reduce(pair, Tag::B, &class.v);
    Ok(IndexValue { ker, coker: c.rep, coker_zero: c.is_zero })
}
