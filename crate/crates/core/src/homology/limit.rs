//! Elements of the inductive limits `Z_A` and `Z_B`.
//!
//! A class `(level n, v)` is the image of `v ∈ Z^N` from the `n`-th copy.
//! The connecting map is `v ↦ Mᵀ v`: splitting `Z(μ)` into the cylinders
//! `Z(μe)` sends `1_{r(μ)}` to the `r(μ)`-row of `M` read as a vector.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::MatrixPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    A,
    B,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::A => "A",
            Tag::B => "B",
        })
    }
}

/// `Mᵀ v` for `M` the matrix named by `tag`.
pub fn connect(pair: &MatrixPair, tag: Tag, v: &[BigInt]) -> Vec<BigInt> {
    let n = pair.n();
    let entry = |i: usize, j: usize| match tag {
        Tag::A => pair.a(i, j),
        Tag::B => pair.b(i, j),
    };
    (0..n)
        .map(|j| {
            (0..n)
                .filter(|&i| entry(i, j) != 0 && !v[i].is_zero())
                .map(|i| &v[i] * entry(i, j))
                .sum()
        })
        .collect()
}

/// `(Mᵀ)^k v`.
pub fn connect_pow(pair: &MatrixPair, tag: Tag, v: &[BigInt], k: usize) -> Vec<BigInt> {
    let mut out = v.to_vec();
    for _ in 0..k {
        out = connect(pair, tag, &out);
    }
    out
}

/// An element of `Z_A` or `Z_B`.
///
/// Structural equality compares representatives; use
/// [`LimitClass::class_eq`] for equality in the limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitClass {
    pub tag: Tag,
    pub level: usize,
    pub v: Vec<BigInt>,
}

impl LimitClass {
    pub fn new(tag: Tag, level: usize, v: Vec<BigInt>) -> Self {
        LimitClass { tag, level, v }
    }

    pub fn zero(tag: Tag, n: usize) -> Self {
        LimitClass { tag, level: 0, v: vec![BigInt::zero(); n] }
    }

    /// `coeff · 1_vertex` at `level`.
    pub fn basis(tag: Tag, n: usize, level: usize, vertex: usize, coeff: impl Into<BigInt>) -> Self {
        let mut v = vec![BigInt::zero(); n];
        v[vertex] = coeff.into();
        LimitClass { tag, level, v }
    }

    pub fn from_i64(tag: Tag, level: usize, v: &[i64]) -> Self {
        LimitClass { tag, level, v: v.iter().map(|&x| BigInt::from(x)).collect() }
    }

    /// The same class represented at `level >= self.level`.
    pub fn raise(&self, pair: &MatrixPair, level: usize) -> LimitClass {
        assert!(level >= self.level, "cannot lower a class");
        LimitClass {
            tag: self.tag,
            level,
            v: connect_pow(pair, self.tag, &self.v, level - self.level),
        }
    }

    fn check_tag(&self, other: &LimitClass) -> Result<()> {
        if self.tag != other.tag {
            return Err(Error::TagMismatch);
        }
        Ok(())
    }

    pub fn add(&self, pair: &MatrixPair, other: &LimitClass) -> Result<LimitClass> {
        self.check_tag(other)?;
        let level = self.level.max(other.level);
        let (a, b) = (self.raise(pair, level), other.raise(pair, level));
        Ok(LimitClass { tag: self.tag, level, v: a.v.iter().zip(&b.v).map(|(x, y)| x + y).collect() })
    }

    pub fn neg(&self) -> LimitClass {
        LimitClass { tag: self.tag, level: self.level, v: self.v.iter().map(|x| -x).collect() }
    }

    /// Zero in the limit: kernels of powers of an `N × N` matrix stabilize
    /// after `N` steps, so `(Mᵀ)^N v = 0` decides it.
    pub fn is_zero(&self, pair: &MatrixPair) -> bool {
        connect_pow(pair, self.tag, &self.v, pair.n()).iter().all(Zero::is_zero)
    }

    pub fn class_eq(&self, pair: &MatrixPair, other: &LimitClass) -> Result<bool> {
        Ok(self.add(pair, &other.neg())?.is_zero(pair))
    }
}

impl fmt::Display for LimitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.v.iter().map(ToString::to_string).collect();
        write!(f, "[{}; {}; {}]", self.tag, self.level, v.join(" "))
    }
}

/// `φ(n, v) = (n + 1, v)`.
pub fn phi(c: &LimitClass) -> LimitClass {
    LimitClass { tag: c.tag, level: c.level + 1, v: c.v.clone() }
}

/// `φ^{-1}(n, v) = (n, Mᵀ v)`.
pub fn phi_inv(pair: &MatrixPair, c: &LimitClass) -> LimitClass {
    LimitClass { tag: c.tag, level: c.level, v: connect(pair, c.tag, &c.v) }
}

/// `φ^{(k)}`: `-(id + φ + … + φ^{k-1})` for `k > 0`, zero for `k = 0`, and
/// `φ^{-1} + … + φ^{k}` for `k < 0`.
pub fn phi_pow(pair: &MatrixPair, k: i64, c: &LimitClass) -> LimitClass {
    let n = c.v.len();
    let mut acc = LimitClass::zero(c.tag, n);
    if k > 0 {
        // φ^j(c) = (level + j, v); sum at the top level
        let top = c.level + k as usize - 1;
        acc.level = top;
        for j in 0..k as usize {
            let lifted = connect_pow(pair, c.tag, &c.v, top - c.level - j);
            for (a, x) in acc.v.iter_mut().zip(lifted) {
                *a -= x;
            }
        }
    } else if k < 0 {
        acc.level = c.level;
        let mut cur = c.v.clone();
        for _ in 0..k.unsigned_abs() {
            cur = connect(pair, c.tag, &cur);
            for (a, x) in acc.v.iter_mut().zip(&cur) {
                *a += x;
            }
        }
    }
    acc
}

/// `ρ^i(c) = c - φ(c) = (n + 1, Mᵀ v - v)`; `ρ⁰` lives on `Z_A`, `ρ¹` on `Z_B`.
pub fn rho(pair: &MatrixPair, i: u8, c: &LimitClass) -> Result<LimitClass> {
    let want = if i == 0 { Tag::A } else { Tag::B };
    if c.tag != want {
        return Err(Error::TagMismatch);
    }
    let up = connect(pair, c.tag, &c.v);
    Ok(LimitClass { tag: c.tag, level: c.level + 1, v: up.iter().zip(&c.v).map(|(a, b)| a - b).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> MatrixPair {
        "N: 1\nA: 2\nB: 1".parse().unwrap()
    }

    #[test]
    fn class_equalities() {
        let p = e1();
        let a0 = LimitClass::from_i64(Tag::A, 0, &[1]);
        assert!(a0.class_eq(&p, &LimitClass::from_i64(Tag::A, 1, &[2])).unwrap());
        assert!(!a0.class_eq(&p, &LimitClass::from_i64(Tag::A, 1, &[1])).unwrap());
        let b0 = LimitClass::from_i64(Tag::B, 0, &[1]);
        assert!(b0.class_eq(&p, &LimitClass::from_i64(Tag::B, 5, &[1])).unwrap());
        assert!(b0.add(&p, &b0.neg()).unwrap().is_zero(&p));
        assert_eq!(a0.add(&p, &b0), Err(Error::TagMismatch));
    }

    #[test]
    fn nilpotent_connecting_map_kills_classes() {
        // Bᵀ = [[0,0],[1,0]] is nilpotent, so Z_B = 0
        let p: MatrixPair = "N: 2\nA: 1 1; 1 1\nB: 0 1; 0 0".parse().unwrap();
        assert!(LimitClass::from_i64(Tag::B, 0, &[3, -7]).is_zero(&p));
        assert!(!LimitClass::from_i64(Tag::A, 0, &[1, 0]).is_zero(&p));
    }

    #[test]
    fn phi_maps() {
        let p = e1();
        let c = LimitClass::from_i64(Tag::A, 0, &[1]);
        assert!(phi_pow(&p, 0, &c).is_zero(&p));
        assert_eq!(phi(&c), LimitClass::from_i64(Tag::A, 1, &[1]));
        // φ(c) is half of c
        let twice = phi(&c).add(&p, &phi(&c)).unwrap();
        assert!(twice.class_eq(&p, &c).unwrap());
        assert!(phi_inv(&p, &phi(&c)).class_eq(&p, &c).unwrap());
        // φ^{(2)}(c) = -(c + φ(c)) = -(3/2) c
        let k2 = phi_pow(&p, 2, &c);
        assert!(k2.class_eq(&p, &LimitClass::from_i64(Tag::A, 1, &[-3])).unwrap());
        // φ^{(-2)}(c) = φ^{-1}(c) + φ^{-2}(c) = 2c + 4c
        let km2 = phi_pow(&p, -2, &c);
        assert!(km2.class_eq(&p, &LimitClass::from_i64(Tag::A, 0, &[6])).unwrap());
    }

    #[test]
    fn rho_maps() {
        let p = e1();
        let r0 = rho(&p, 0, &LimitClass::from_i64(Tag::A, 0, &[1])).unwrap();
        assert_eq!(r0, LimitClass::from_i64(Tag::A, 1, &[1]));
        assert!(!r0.is_zero(&p));
        let r1 = rho(&p, 1, &LimitClass::from_i64(Tag::B, 3, &[5])).unwrap();
        assert!(r1.is_zero(&p));
        assert!(rho(&p, 1, &LimitClass::zero(Tag::B, 1)).unwrap().is_zero(&p));
        assert_eq!(rho(&p, 0, &LimitClass::zero(Tag::B, 1)), Err(Error::TagMismatch));
    }
}
