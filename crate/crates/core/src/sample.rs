//! Seeded random instances for property sweeps and benchmarks.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::bisection::{Bisection, PrefixCode};
use crate::groupoid::{extend_triple, Triple};
use crate::homology::{connect, LimitClass, Tag};
use crate::matrix::MatrixPair;
use crate::path::{all_paths, Path};

/// A valid pair with `n <= max_n`, `0 <= A_ij <= max_entry` and
/// `|B_ij| <= max_entry`, `B` supported inside `A`. Every row of `A` is
/// nonzero. With `contracting`, `|B_ij| < A_ij` on the support of `A`.
pub fn random_pair<R: Rng>(rng: &mut R, max_n: usize, max_entry: i64, contracting: bool) -> MatrixPair {
    let n = rng.gen_range(1..=max_n);
    let mut a = vec![vec![0i64; n]; n];
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(0.6) {
                a[i][j] = rng.gen_range(1..=max_entry);
            }
        }
        if a[i].iter().all(|&x| x == 0) {
            a[i][rng.gen_range(0..n)] = rng.gen_range(1..=max_entry);
        }
        for j in 0..n {
            if a[i][j] > 0 {
                let cap = if contracting { a[i][j] - 1 } else { max_entry };
                b[i][j] = rng.gen_range(-cap..=cap);
            }
        }
    }
    MatrixPair::new(a, b).expect("sampled pair is valid")
}

/// A full bisection built from the identity by splitting pieces (up to
/// length `max_depth`) and swapping the ranges of pieces ending at the same
/// vertex, with shifts drawn from `[-max_shift, max_shift]`.
pub fn random_full_bisection<R: Rng>(
    rng: &mut R,
    pair: &MatrixPair,
    max_depth: usize,
    max_shift: i64,
) -> Bisection {
    let mut pieces: Vec<Triple> = (0..pair.n()).map(Triple::vertex).collect();
    let rounds = rng.gen_range(0..=2 * max_depth + 2);
    for _ in 0..rounds {
        let splittable: Vec<usize> = (0..pieces.len())
            .filter(|&i| pieces[i].range.len().max(pieces[i].source.len()) < max_depth)
            .collect();
        if splittable.is_empty() || pieces.len() > 48 {
            break;
        }
        let k = *splittable.choose(rng).expect("nonempty");
        let t = pieces.swap_remove(k);
        pieces.extend(extend_triple(pair, &t, 1));
        shuffle_ranges(rng, &mut pieces);
    }
    shuffle_ranges(rng, &mut pieces);
    for t in &mut pieces {
        t.shift = BigInt::from(rng.gen_range(-max_shift..=max_shift));
    }
    Bisection::from_pieces(pieces).sorted()
}

/// Permutes ranges among pieces whose ranges end at the same vertex.
fn shuffle_ranges<R: Rng>(rng: &mut R, pieces: &mut [Triple]) {
    let n = pieces.iter().map(|t| t.range.range()).max().map_or(0, |v| v + 1);
    for v in 0..n {
        let idx: Vec<usize> = (0..pieces.len()).filter(|&i| pieces[i].range.range() == v).collect();
        let mut ranges: Vec<Path> = idx.iter().map(|&i| pieces[i].range.clone()).collect();
        ranges.shuffle(rng);
        for (&i, r) in idx.iter().zip(ranges) {
            pieces[i].range = r;
        }
    }
}

/// A bisection `V` with `s(V) ∩ r(V) = ∅`: up to `max_pieces` pieces
/// `Z(μ, m, ν)` with `μ ≠ ν` of length `1..=max_depth`, all `μ`, `ν` mutually
/// disjoint. At least one piece whenever the pair admits one.
pub fn random_disjoint<R: Rng>(
    rng: &mut R,
    pair: &MatrixPair,
    max_depth: usize,
    max_pieces: usize,
    max_shift: i64,
) -> Bisection {
    let mut used: Vec<Path> = Vec::new();
    let mut pieces = Vec::new();
    let want = rng.gen_range(1..=max_pieces.max(1));
    for _ in 0..8 * want {
        if pieces.len() >= want {
            break;
        }
        let len = rng.gen_range(1..=max_depth);
        let paths = all_paths(pair, len);
        let Some(mu) = paths.choose(rng) else { continue };
        let len2 = rng.gen_range(1..=max_depth);
        let others: Vec<Path> = all_paths(pair, len2)
            .into_iter()
            .filter(|p| p.range() == mu.range() && !p.comparable(mu))
            .collect();
        let Some(nu) = others.choose(rng) else { continue };
        if used.iter().any(|u| u.comparable(mu) || u.comparable(nu)) {
            continue;
        }
        used.push(mu.clone());
        used.push(nu.clone());
        let m = rng.gen_range(-max_shift..=max_shift);
        pieces.push(Triple::new(mu.clone(), m, nu.clone()).expect("same range vertex"));
    }
    Bisection::from_pieces(pieces)
}

/// A full bisection in `𝓗_{A,B,n}`: a range-preserving permutation of
/// `E_A^n` with shifts whose sum over each range vertex is zero.
pub fn random_kernel_element<R: Rng>(rng: &mut R, pair: &MatrixPair, n: usize, max_shift: i64) -> Bisection {
    let paths = all_paths(pair, n);
    let mut pieces: Vec<Triple> = paths.iter().cloned().map(Triple::unit_on).collect();
    shuffle_ranges(rng, &mut pieces);
    for v in 0..pair.n() {
        let idx: Vec<usize> = (0..pieces.len()).filter(|&i| pieces[i].range.range() == v).collect();
        if idx.len() < 2 {
            continue;
        }
        let mut total = 0i64;
        for &i in &idx[1..] {
            let m = rng.gen_range(-max_shift..=max_shift);
            pieces[i].shift = BigInt::from(m);
            total += m;
        }
        pieces[idx[0]].shift = BigInt::from(-total);
    }
    Bisection::from_pieces(pieces)
}

/// `U_{μ,k} · U_{ν,-k}` for disjoint `μ`, `ν` of length `len` with a common
/// range vertex, or `None` if no such pair exists.
pub fn cancelling_torsion<R: Rng>(rng: &mut R, pair: &MatrixPair, len: usize, k: i64) -> Option<Bisection> {
    let paths = all_paths(pair, len);
    let mu = paths.choose(rng)?;
    let nus: Vec<&Path> = paths.iter().filter(|p| p.range() == mu.range() && *p != mu).collect();
    let nu = nus.choose(rng)?;
    let pieces = vec![
        Triple { range: mu.clone(), shift: BigInt::from(k), source: mu.clone() },
        Triple { range: (*nu).clone(), shift: BigInt::from(-k), source: (*nu).clone() },
    ];
    let code = PrefixCode::new(vec![mu.clone(), (*nu).clone()]);
    let mut all = pieces;
    all.extend(code.complement(pair).into_iter().map(Triple::unit_on));
    Some(Bisection::from_pieces(all).sorted())
}

/// A diagonal element of `𝓗_{A,B}` whose torsion class is `ρ¹` of a random
/// class: shifts `(Bᵀ - I) w` placed on one path of length `len` per vertex.
/// Its index vanishes while its torsion class need not.
pub fn rho1_image_element<R: Rng>(rng: &mut R, pair: &MatrixPair, len: usize, max_w: i64) -> Bisection {
    let w: Vec<BigInt> = (0..pair.n()).map(|_| BigInt::from(rng.gen_range(-max_w..=max_w))).collect();
    let bw = connect(pair, Tag::B, &w);
    let target = LimitClass::new(Tag::B, len, bw.iter().zip(&w).map(|(a, b)| a - b).collect());
    let paths = all_paths(pair, len);
    let parts = target
        .v
        .iter()
        .enumerate()
        .filter_map(|(v, c)| {
            let candidates: Vec<&Path> = paths.iter().filter(|p| p.range() == v).collect();
            candidates.choose(rng).map(|p| ((*p).clone(), c.clone()))
        })
        .collect();
    crate::full_group::diagonal(pair, parts)
}
