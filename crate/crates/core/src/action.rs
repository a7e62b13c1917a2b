//! The self-similar action `κ` of `Z` on `E_A` and its cocycle `φ`.
//!
//! On an edge `e = e_{i,j,n}` the pair `(κ_m(e), φ(m, e))` is read off the
//! division `m·B_ij + n = q·A_ij + r`, `0 <= r < A_ij`: the image is
//! `e_{i,j,r}` and the cocycle is `q`. Paths are acted on edge by edge with
//! the running cocycle as the group element for the next edge.
//!
//! Group elements are arbitrary precision. The hot loops run on machine
//! integers and only fall back to [`BigInt`] when a cocycle leaves `i64`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::MatrixPair;
use crate::path::{Edge, InfPath, Path};

/// `(κ_m(e), φ(m, e))` for machine-size `m`. Returns `None` on overflow.
#[inline]
pub fn act_edge_small(pair: &MatrixPair, m: i64, e: Edge) -> Option<(Edge, i64)> {
    let a = pair.a(e.src as usize, e.dst as usize);
    let b = pair.b(e.src as usize, e.dst as usize);
    if let Some(t) = m.checked_mul(b).and_then(|x| x.checked_add(e.index as i64)) {
        return Some((Edge { index: t.rem_euclid(a) as u32, ..e }, t.div_euclid(a)));
    }
    let (a, b) = (a as i128, b as i128);
    let t = m as i128 * b + e.index as i128;
    let q = t.div_euclid(a);
    let r = t.rem_euclid(a);
    Some((Edge { index: r as u32, ..e }, i64::try_from(q).ok()?))
}

/// `(κ_m(e), φ(m, e))`.
pub fn act_edge(pair: &MatrixPair, m: &BigInt, e: Edge) -> (Edge, BigInt) {
    if let Some(small) = m.to_i64() {
        if let Some((f, q)) = act_edge_small(pair, small, e) {
            return (f, BigInt::from(q));
        }
    }
    let a = BigInt::from(pair.a(e.src as usize, e.dst as usize));
    let t = m * pair.b(e.src as usize, e.dst as usize) + e.index;
    let (q, r) = t.div_mod_floor(&a);
    (Edge { index: r.to_u32().expect("remainder below A_ij"), ..e }, q)
}

/// Acts on an edge sequence in place and returns the final cocycle, or `None`
/// if an intermediate cocycle overflows (the slice is then partly rewritten).
#[inline]
pub fn act_edges_small(pair: &MatrixPair, mut m: i64, edges: &mut [Edge]) -> Option<i64> {
    for e in edges {
        if m == 0 {
            break;
        }
        let (f, q) = act_edge_small(pair, m, *e)?;
        *e = f;
        m = q;
    }
    Some(m)
}

/// `(κ_m(μ), φ(m, μ))` for machine-size `m`, or `None` on overflow.
pub fn act_path_small(pair: &MatrixPair, m: i64, mu: &Path) -> Option<(Path, i64)> {
    let mut edges = mu.edges().to_vec();
    let q = act_edges_small(pair, m, &mut edges)?;
    Some((Path::from_raw(mu.source() as u32, edges), q))
}

/// `(κ_m(μ), φ(m, μ))`.
pub fn act_path(pair: &MatrixPair, m: &BigInt, mu: &Path) -> (Path, BigInt) {
    let mut edges = mu.edges().to_vec();
    let mut k = 0;
    if let Some(mut small) = m.to_i64() {
        while k < edges.len() && small != 0 {
            match act_edge_small(pair, small, edges[k]) {
                Some((f, q)) => {
                    edges[k] = f;
                    small = q;
                    k += 1;
                }
                None => break,
            }
        }
        if k == edges.len() || small == 0 {
            return (Path::from_raw(mu.source() as u32, edges), BigInt::from(small));
        }
        let (f, q) = act_edge(pair, &BigInt::from(small), edges[k]);
        edges[k] = f;
        k += 1;
        return finish_big(pair, q, mu.source(), edges, k);
    }
    finish_big(pair, m.clone(), mu.source(), edges, k)
}

fn finish_big(
    pair: &MatrixPair,
    mut m: BigInt,
    base: usize,
    mut edges: Vec<Edge>,
    from: usize,
) -> (Path, BigInt) {
    for e in &mut edges[from..] {
        if m.is_zero() {
            break;
        }
        let (f, q) = act_edge(pair, &m, *e);
        *e = f;
        m = q;
    }
    (Path::from_raw(base as u32, edges), m)
}

/// `R = 2·max A_ij`, the radius of the nucleus of a contracting pair.
pub fn nucleus_radius(pair: &MatrixPair) -> i64 {
    2 * pair.max_a()
}

/// Default number of steps `act_inf` may simulate before giving up:
/// `|m| + (prefix + period)·(2R + 1) + 64`.
pub fn default_inf_bound(pair: &MatrixPair, m: &BigInt, x: &InfPath) -> usize {
    let r = nucleus_radius(pair) as usize;
    let m = m.abs().to_usize().unwrap_or(usize::MAX / 4);
    m.saturating_add((x.prefix().len() + x.period()).saturating_mul(2 * r + 1))
        .saturating_add(64)
}

/// `κ_m(x)` for an eventually periodic point.
///
/// The image is again eventually periodic as soon as the pair
/// (position in the cycle of `x`, running cocycle) repeats, which happens
/// within the default bound for contracting pairs. `bound` caps the number of
/// edges processed; `None` uses [`default_inf_bound`].
pub fn act_inf(pair: &MatrixPair, m: &BigInt, x: &InfPath, bound: Option<usize>) -> Result<InfPath> {
    let bound = bound.unwrap_or_else(|| default_inf_bound(pair, m, x));
    let (head, mut cur) = act_path(pair, m, x.prefix());
    let mut out = head.edges().to_vec();
    let cycle = x.cycle();
    let period = cycle.len();
    // cocycle at the start of each pass through the cycle -> output length then
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut steps = out.len();
    loop {
        if cur.is_zero() {
            // κ_0 is the identity on the remaining tail.
            out.extend_from_slice(cycle.edges());
            let start = out.len() - period;
            return Ok(InfPath::from_lasso(x.source() as u32, out, start));
        }
        if let Some(&start) = seen.get(&cur) {
            return Ok(InfPath::from_lasso(x.source() as u32, out, start));
        }
        if steps >= bound {
            return Err(Error::BoundExceeded(bound));
        }
        seen.insert(cur.clone(), out.len());
        let (img, next) = act_path(pair, &cur, &cycle);
        out.extend_from_slice(img.edges());
        steps += period;
        cur = next;
    }
}

/// `(|m|, R)`: for every path `μ` with `|μ| >= |m|` the cocycle `φ(m, μ)` lies
/// in `[-R, R]`. Only meaningful for contracting pairs.
pub fn restriction_interval(pair: &MatrixPair, m: &BigInt) -> Result<(BigInt, i64)> {
    if !crate::graph::is_contracting(pair) {
        return Err(Error::NotContracting);
    }
    Ok((m.abs(), nucleus_radius(pair)))
}
