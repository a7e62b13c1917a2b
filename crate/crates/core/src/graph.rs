//! Matrix-level properties of a pair: graph structure of `E_A`, the shape of
//! the action, and the conditions entering the AH criteria.
//!
//! Exact characterizations of Hausdorffness and effectiveness quantify over
//! infinitely many paths. Those two fields are [`Truth`] valued and only
//! answer `Yes` or `No` on a checked certificate.

use std::fmt;
use std::ops::BitAnd;

use crate::matrix::MatrixPair;

/// Three-valued answer of a semi-decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Truth {
    Yes,
    No,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::Yes
        } else {
            Truth::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Truth::Yes
    }
}

/// Kleene conjunction: `No` dominates, then `Unknown`.
impl BitAnd for Truth {
    type Output = Truth;

    fn bitand(self, rhs: Truth) -> Truth {
        match (self, rhs) {
            (Truth::No, _) | (_, Truth::No) => Truth::No,
            (Truth::Yes, Truth::Yes) => Truth::Yes,
            _ => Truth::Unknown,
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::Yes => "yes",
            Truth::No => "no",
            Truth::Unknown => "unknown",
        })
    }
}

/// Default bound on prefix + period of effectiveness witnesses.
pub const DEFAULT_WITNESS_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralReport {
    pub essential: bool,
    pub irreducible: bool,
    pub condition_l: bool,
    pub cofinal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionReport {
    pub pseudo_free: bool,
    /// 0-based vertices whose `B` row vanishes on the support of `A`.
    pub b_sinks: Vec<usize>,
    /// 0-based vertices emitting an infinite path that avoids every B-sink.
    pub b_regular: Vec<usize>,
    pub r_b: usize,
    pub contracting: bool,
    /// Nucleus radius `2·max A_ij`, present for contracting pairs.
    pub r: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AhReport {
    pub hausdorff: Truth,
    pub effective: Truth,
    pub minimal: Truth,
    pub purely_infinite: Truth,
    pub ah_criteria: Truth,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub structural: StructuralReport,
    pub action: ActionReport,
    pub ah: AhReport,
}

impl PropertyReport {
    pub fn compute(pair: &MatrixPair, depth: usize) -> Self {
        let structural = structural_report(pair);
        let action = action_report(pair);
        let ah = ah_from_parts(pair, &structural, &action, depth);
        PropertyReport { structural, action, ah }
    }
}

/// Vertices reachable from `v` (including `v`) along edges with `keep(i, j)`.
fn reach(pair: &MatrixPair, v: usize, keep: &dyn Fn(usize, usize) -> bool) -> Vec<bool> {
    let n = pair.n();
    let mut seen = vec![false; n];
    let mut stack = vec![v];
    seen[v] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && keep(i, j) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen
}

/// Reachability matrix over the edges selected by `keep`.
fn closure(pair: &MatrixPair, keep: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<bool>> {
    (0..pair.n()).map(|v| reach(pair, v, keep)).collect()
}

/// `v` lies on a cycle of the subgraph selected by `keep`.
fn on_cycle(pair: &MatrixPair, reach: &[Vec<bool>], keep: &dyn Fn(usize, usize) -> bool, v: usize) -> bool {
    (0..pair.n()).any(|u| keep(u, v) && reach[v][u])
}

pub fn is_essential(pair: &MatrixPair) -> bool {
    let n = pair.n();
    (0..n).all(|j| (0..n).any(|i| pair.a(i, j) > 0)) && (0..n).all(|i| pair.out_degree(i) > 0)
}

pub fn is_irreducible(pair: &MatrixPair) -> bool {
    let keep = |i: usize, j: usize| pair.a(i, j) > 0;
    closure(pair, &keep).iter().all(|row| row.iter().all(|&b| b))
}

pub fn is_pseudo_free(pair: &MatrixPair) -> bool {
    let n = pair.n();
    (0..n).all(|i| (0..n).all(|j| (pair.a(i, j) == 0) == (pair.b(i, j) == 0)))
}

pub fn is_contracting(pair: &MatrixPair) -> bool {
    let n = pair.n();
    (0..n).all(|i| (0..n).all(|j| pair.a(i, j) == 0 || pair.b(i, j).abs() < pair.a(i, j)))
}

pub fn structural_report(pair: &MatrixPair) -> StructuralReport {
    let n = pair.n();
    let keep = |i: usize, j: usize| pair.a(i, j) > 0;
    let reach = closure(pair, &keep);
    let irreducible = reach.iter().all(|row| row.iter().all(|&b| b));

    // A cycle without exit runs through vertices emitting exactly one edge.
    let single = |i: usize, j: usize| pair.out_degree(i) == 1 && pair.a(i, j) == 1;
    let single_reach = closure(pair, &single);
    let condition_l = !(0..n).any(|v| on_cycle(pair, &single_reach, &single, v));

    // Every infinite path eventually stays in a cyclic strongly connected
    // component, and each such component carries one.
    let cyclic: Vec<usize> = (0..n).filter(|&v| on_cycle(pair, &reach, &keep, v)).collect();
    let cofinal = (0..n).all(|v| cyclic.iter().all(|&c| reach[v][c]));

    StructuralReport { essential: is_essential(pair), irreducible, condition_l, cofinal }
}

pub fn action_report(pair: &MatrixPair) -> ActionReport {
    let n = pair.n();
    let b_sinks: Vec<usize> =
        (0..n).filter(|&i| (0..n).all(|j| pair.a(i, j) == 0 || pair.b(i, j) == 0)).collect();
    let is_sink = |v: usize| b_sinks.contains(&v);
    let keep = |i: usize, j: usize| pair.a(i, j) > 0 && !is_sink(i) && !is_sink(j);
    let reach = closure(pair, &keep);
    let b_regular: Vec<usize> = (0..n)
        .filter(|&v| {
            !is_sink(v) && (0..n).any(|c| reach[v][c] && on_cycle(pair, &reach, &keep, c))
        })
        .collect();
    let contracting = is_contracting(pair);
    ActionReport {
        pseudo_free: is_pseudo_free(pair),
        r_b: b_regular.len(),
        b_sinks,
        b_regular,
        contracting,
        r: contracting.then(|| 2 * pair.max_a()),
    }
}

/// Simple cycles (as vertex sequences starting at their least vertex) of the
/// subgraph selected by `keep`, of length at most `max_len`.
fn simple_cycles(
    pair: &MatrixPair,
    keep: &dyn Fn(usize, usize) -> bool,
    max_len: usize,
) -> Vec<Vec<usize>> {
    fn extend(
        pair: &MatrixPair,
        keep: &dyn Fn(usize, usize) -> bool,
        max_len: usize,
        walk: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let start = walk[0];
        let last = *walk.last().unwrap();
        for j in start..pair.n() {
            if !keep(last, j) {
                continue;
            }
            if j == start {
                out.push(walk.clone());
            } else if walk.len() < max_len && !walk.contains(&j) {
                walk.push(j);
                extend(pair, keep, max_len, walk, out);
                walk.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in 0..pair.n() {
        extend(pair, keep, max_len, &mut vec![v], &mut out);
    }
    out
}

/// `|Π B| < |Π A|` around a cycle; all entries involved are nonzero.
fn shrinks(pair: &MatrixPair, cycle: &[usize]) -> bool {
    let (mut num, mut den) = (1u128, 1u128);
    for (k, &i) in cycle.iter().enumerate() {
        let j = cycle[(k + 1) % cycle.len()];
        num = num.saturating_mul(pair.b(i, j).unsigned_abs() as u128);
        den = den.saturating_mul(pair.a(i, j) as u128);
        // Keep the ratio exact while bounding magnitudes.
        let g = num_integer::gcd(num, den);
        num /= g;
        den /= g;
    }
    num < den
}

/// Hausdorffness: pseudo-freeness suffices. Otherwise, for every vertex `i`
/// emitting an edge with `B_ij = 0`, the paths into `i` along which
/// `m·B_μ/A_μ` stays a nonzero integer must form a finite set; that holds when
/// every cycle of the `B`-nonzero subgraph that can reach `i` strictly shrinks
/// `|B/A|`. Cycles are enumerated up to `depth`; the answer is only `Yes` when
/// that enumeration was complete.
pub fn hausdorff(pair: &MatrixPair, depth: usize) -> Truth {
    if is_pseudo_free(pair) {
        return Truth::Yes;
    }
    let n = pair.n();
    let keep = |i: usize, j: usize| pair.a(i, j) > 0 && pair.b(i, j) != 0;
    let reach = closure(pair, &keep);
    let degenerate: Vec<usize> =
        (0..n).filter(|&i| (0..n).any(|j| pair.a(i, j) > 0 && pair.b(i, j) == 0)).collect();
    if depth < n {
        return Truth::Unknown;
    }
    let ok = simple_cycles(pair, &keep, n).iter().all(|c| {
        !degenerate.iter().any(|&i| reach[c[0]][i]) || shrinks(pair, c)
    });
    if ok {
        Truth::Yes
    } else {
        Truth::Unknown
    }
}

/// Effectiveness: `No` when Condition (L) fails; `Yes` when every vertex
/// reaches, along `B`-nonzero edges, a `B`-nonzero cycle with `|Π B| < |Π A|`
/// and prefix + period at most `bound`. Such an eventually periodic point has
/// `B_{x|_t} ≠ 0` and `B_{x|_t}/A_{x|_t} → 0`.
pub fn effective(pair: &MatrixPair, condition_l: bool, bound: usize) -> Truth {
    if !condition_l {
        return Truth::No;
    }
    let n = pair.n();
    let keep = |i: usize, j: usize| pair.a(i, j) > 0 && pair.b(i, j) != 0;
    let good: Vec<Vec<usize>> = simple_cycles(pair, &keep, n.min(bound))
        .into_iter()
        .filter(|c| shrinks(pair, c))
        .collect();
    // dist[v][u]: shortest B-nonzero walk length from v to u
    let dist: Vec<Vec<Option<usize>>> = (0..n)
        .map(|v| {
            let mut d = vec![None; n];
            d[v] = Some(0);
            let mut frontier = vec![v];
            let mut k = 0;
            while !frontier.is_empty() {
                k += 1;
                let mut next = Vec::new();
                for &i in &frontier {
                    for j in 0..n {
                        if keep(i, j) && d[j].is_none() {
                            d[j] = Some(k);
                            next.push(j);
                        }
                    }
                }
                frontier = next;
            }
            d
        })
        .collect();
    let witnessed = (0..n).all(|v| {
        good.iter().any(|c| c.iter().any(|&u| dist[v][u].is_some_and(|d| d + c.len() <= bound)))
    });
    if witnessed {
        Truth::Yes
    } else {
        Truth::Unknown
    }
}

fn ah_from_parts(
    pair: &MatrixPair,
    s: &StructuralReport,
    _a: &ActionReport,
    depth: usize,
) -> AhReport {
    let hausdorff = hausdorff(pair, depth.max(pair.n()));
    let effective = effective(pair, s.condition_l, DEFAULT_WITNESS_BOUND.max(depth));
    let minimal = Truth::from_bool(s.cofinal);
    let all = hausdorff & effective & minimal;
    AhReport {
        hausdorff,
        effective,
        minimal,
        // Finite N with Hausdorff, effective and minimal gives pure
        // infiniteness; nothing is claimed otherwise.
        purely_infinite: if all.is_yes() { Truth::Yes } else { Truth::Unknown },
        ah_criteria: all,
    }
}

pub fn ah_report(pair: &MatrixPair, depth: usize) -> AhReport {
    ah_from_parts(pair, &structural_report(pair), &action_report(pair), depth)
}
