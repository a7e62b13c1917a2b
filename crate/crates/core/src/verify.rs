//! Exhaustive sweeps certifying the action laws, contraction and agreement of
//! full bisections on cylinder samples.
//!
//! Every sweep takes an [`Exec`]. With the `parallel` feature the outer loop
//! is split across rayon's pool; otherwise both variants run sequentially.
//! Results never depend on the variant.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::action::{act_edge_small, act_edges_small, nucleus_radius};
use crate::bisection::{Bisection, Evaluator};
use crate::error::Result;
use crate::matrix::MatrixPair;
use crate::path::{all_paths, InfPath, Path};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

/// `items.map(f)` in order, split across threads for [`Exec::Parallel`].
pub fn map_items<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Number of checks and failures of one law; keeps the first failure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub checks: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} checks, {} failures", self.checks, self.failures)?;
        if let Some(first) = &self.first_failure {
            write!(f, " (first: {first})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LawReport {
    pub group: Tally,
    pub cocycle: Tally,
    pub concatenation: Tally,
    pub bijectivity: Tally,
    /// Every path of length `<= exhaustive_len` was checked.
    pub exhaustive_len: usize,
    /// Random paths checked at lengths above `exhaustive_len`.
    pub sampled: usize,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.group.passed() && self.cocycle.passed() && self.concatenation.passed() && self.bijectivity.passed()
    }

    fn merge(&mut self, other: LawReport) {
        self.group.merge(other.group);
        self.cocycle.merge(other.cocycle);
        self.concatenation.merge(other.concatenation);
        self.bijectivity.merge(other.bijectivity);
    }
}

/// Parameters of [`action_laws`].
#[derive(Debug, Clone, Copy)]
pub struct LawSweep {
    /// Group elements `|m| <= max_m`.
    pub max_m: i64,
    /// Paths `|μ| <= max_len`.
    pub max_len: usize,
    /// Lengths are swept exhaustively while the cumulative path count stays
    /// within the budget; longer lengths are sampled.
    pub budget: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for LawSweep {
    fn default() -> Self {
        LawSweep { max_m: 20, max_len: 6, budget: 60_000, samples: 200, seed: 0 }
    }
}

/// `(κ_m(μ), φ(m, μ))` for every path of one length and `|m| <= span`,
/// images stored as indices into the sorted path list.
struct ActionTable {
    span: i64,
    count: usize,
    image: Vec<u32>,
    cocycle: Vec<i64>,
}

impl ActionTable {
    fn build(pair: &MatrixPair, paths: &[Path], span: i64) -> Option<ActionTable> {
        let count = paths.len();
        let width = (2 * span + 1) as usize;
        let mut image = vec![0u32; width * count];
        let mut cocycle = vec![0i64; width * count];
        let mut buf = Vec::new();
        for m in -span..=span {
            let row = (m + span) as usize * count;
            for (i, p) in paths.iter().enumerate() {
                buf.clear();
                buf.extend_from_slice(p.edges());
                let c = act_edges_small(pair, m, &mut buf)?;
                let q = crate::path::Path::from_edges(p.source(), buf.clone()).ok()?;
                image[row + i] = paths.binary_search(&q).ok()? as u32;
                cocycle[row + i] = c;
            }
        }
        Some(ActionTable { span, count, image, cocycle })
    }

    #[inline]
    fn get(&self, m: i64, i: usize) -> (usize, i64) {
        let k = (m + self.span) as usize * self.count + i;
        (self.image[k] as usize, self.cocycle[k])
    }
}

fn act_small(pair: &MatrixPair, m: i64, p: &Path) -> Option<(Vec<crate::path::Edge>, i64)> {
    let mut edges = p.edges().to_vec();
    let c = act_edges_small(pair, m, &mut edges)?;
    Some((edges, c))
}

/// Concatenation law at every split `ρ = μν`, for `|m| <= max_m`.
fn concatenation_at(pair: &MatrixPair, rho: &Path, max_m: i64, t: &mut Tally) {
    let k = rho.len();
    let mut whole = rho.edges().to_vec();
    let mut split = rho.edges().to_vec();
    for m in -max_m..=max_m {
        whole.copy_from_slice(rho.edges());
        let c_whole = act_edges_small(pair, m, &mut whole);
        for s in 0..=k {
            split.copy_from_slice(rho.edges());
            let (head, tail) = split.split_at_mut(s);
            let c_split = act_edges_small(pair, m, head).and_then(|c| act_edges_small(pair, c, tail));
            let ok = c_whole.is_some() && c_whole == c_split && whole == split;
            t.record(ok, || format!("m={m}, μ={}, ν={}", rho.prefix(s), rho.suffix(s)));
        }
    }
}

/// Group law `κ_{m₁+m₂} = κ_{m₁} κ_{m₂}`, cocycle identity
/// `φ(m₁+m₂, μ) = φ(m₁, κ_{m₂} μ) + φ(m₂, μ)`, concatenation
/// `κ_m(μν) = κ_m(μ) κ_{φ(m,μ)}(ν)`, `φ(m, μν) = φ(φ(m, μ), ν)`, and
/// bijectivity of `κ_m` on paths of each length with inverse `κ_{-m}`.
pub fn action_laws(pair: &MatrixPair, sweep: &LawSweep, exec: Exec) -> LawReport {
    let mut report = LawReport::default();
    let mut total = 0usize;
    let mut exhaustive_len = 0;
    for len in 0..=sweep.max_len {
        let paths = all_paths(pair, len);
        if len > 0 && total + paths.len() > sweep.budget {
            break;
        }
        total += paths.len();
        exhaustive_len = len;
        report.merge(laws_exhaustive(pair, &paths, sweep.max_m, exec));
    }
    report.exhaustive_len = exhaustive_len;
    if exhaustive_len < sweep.max_len {
        let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(sweep.seed);
        let walks: Vec<Path> = (0..sweep.samples)
            .map(|_| {
                let len = rng.gen_range(exhaustive_len + 1..=sweep.max_len);
                random_walk(&mut rng, pair, len)
            })
            .collect();
        report.sampled = walks.len();
        let parts = map_items(exec, &walks, |p| laws_direct(pair, p, sweep.max_m));
        for part in parts {
            report.merge(part);
        }
    }
    report
}

fn laws_exhaustive(pair: &MatrixPair, paths: &[Path], max_m: i64, exec: Exec) -> LawReport {
    let mut report = LawReport::default();
    let Some(table) = ActionTable::build(pair, paths, 2 * max_m) else {
        report.group.record(false, || "cocycle overflow".into());
        return report;
    };
    let idx: Vec<usize> = (0..paths.len()).collect();
    let parts = map_items(exec, &idx, |&i| {
        let mut r = LawReport::default();
        for m2 in -max_m..=max_m {
            let (j, c2) = table.get(m2, i);
            for m1 in -max_m..=max_m {
                let (k, c1) = table.get(m1, j);
                let (k2, c12) = table.get(m1 + m2, i);
                r.group.record(k == k2, || format!("m1={m1}, m2={m2}, μ={}", paths[i]));
                r.cocycle.record(c12 == c1 + c2, || format!("m1={m1}, m2={m2}, μ={}", paths[i]));
            }
        }
        for m in -max_m..=max_m {
            let (j, _) = table.get(m, i);
            let (back, _) = table.get(-m, j);
            let same_ends = paths[j].source() == paths[i].source() && paths[j].range() == paths[i].range();
            r.bijectivity.record(back == i && same_ends, || format!("m={m}, μ={}", paths[i]));
        }
        concatenation_at(pair, &paths[i], max_m, &mut r.concatenation);
        r
    });
    for part in parts {
        report.merge(part);
    }
    // injectivity of each κ_m on the whole level
    for m in -max_m..=max_m {
        let mut seen = vec![false; paths.len()];
        let mut ok = true;
        for i in 0..paths.len() {
            let (j, _) = table.get(m, i);
            ok &= !std::mem::replace(&mut seen[j], true);
        }
        report.bijectivity.record(ok, || format!("κ_{m} not injective on length {}", paths[0].len()));
    }
    report
}

/// The same laws for one path, computed without tables.
fn laws_direct(pair: &MatrixPair, p: &Path, max_m: i64) -> LawReport {
    let mut r = LawReport::default();
    for m2 in -max_m..=max_m {
        let Some((e2, c2)) = act_small(pair, m2, p) else { continue };
        let q = Path::from_edges(p.source(), e2).expect("image is a path");
        for m1 in -max_m..=max_m {
            let lhs = act_small(pair, m1, &q);
            let rhs = act_small(pair, m1 + m2, p);
            let (Some((e1, c1)), Some((e12, c12))) = (lhs, rhs) else { continue };
            r.group.record(e1 == e12, || format!("m1={m1}, m2={m2}, μ={p}"));
            r.cocycle.record(c12 == c1 + c2, || format!("m1={m1}, m2={m2}, μ={p}"));
        }
        let back = act_small(pair, -m2, &q).map(|(e, _)| e);
        r.bijectivity.record(back.as_deref() == Some(p.edges()), || format!("m={m2}, μ={p}"));
    }
    concatenation_at(pair, p, max_m, &mut r.concatenation);
    r
}

/// A uniformly stepped random path of length `len`.
pub fn random_walk<R: Rng>(rng: &mut R, pair: &MatrixPair, len: usize) -> Path {
    let mut p = Path::empty(rng.gen_range(0..pair.n()));
    for _ in 0..len {
        let edges: Vec<_> = pair.out_edges(p.range()).collect();
        p.push(*edges.choose(rng).expect("no sinks"));
    }
    p
}

/// Edge-level contraction: `|φ(m, e)| < |m|` when `|m| >= 2 A_ij` and
/// `|φ(m, e)| <= |m|` otherwise, for every edge and `|m| <= max_m`.
pub fn edge_contraction(pair: &MatrixPair, max_m: i64, exec: Exec) -> Tally {
    let edges: Vec<_> = (0..pair.n()).flat_map(|v| pair.out_edges(v).collect::<Vec<_>>()).collect();
    let parts = map_items(exec, &edges, |&e| {
        let mut t = Tally::default();
        let a = pair.a(e.src as usize, e.dst as usize);
        for m in -max_m..=max_m {
            let (_, q) = act_edge_small(pair, m, e).expect("small");
            let ok = if m.abs() >= 2 * a { q.abs() < m.abs() } else { q.abs() <= m.abs() };
            t.record(ok, || format!("m={m}, e={e}, φ={q}"));
        }
        t
    });
    parts.into_iter().fold(Tally::default(), |mut acc, t| {
        acc.merge(t);
        acc
    })
}

/// The integer inequalities behind edge contraction: for `a >= 1`,
/// `1 - 2a <= b - a <= -1` and `(b-a)m - a < at < (b-a)m + a`,
/// `|m + t| < |m|` if `|m| >= 2a` and `|m + t| <= |m|` otherwise.
pub fn contraction_inequalities(max_a: i64, max_m: i64) -> Tally {
    let mut t = Tally::default();
    for a in 1..=max_a {
        for b in (1 - a)..=(a - 1) {
            for m in -max_m..=max_m {
                let (lo, hi) = ((b - a) * m - a, (b - a) * m + a);
                // a·t ranges over the open interval (lo, hi)
                for s in (lo + 1)..hi {
                    if s % a != 0 {
                        continue;
                    }
                    let u = s / a;
                    let ok = if m.abs() >= 2 * a { (m + u).abs() < m.abs() } else { (m + u).abs() <= m.abs() };
                    t.record(ok, || format!("a={a}, b={b}, m={m}, t={u}"));
                }
            }
        }
    }
    t
}

/// Nucleus bound `|φ(m, μ)| <= R` for all `μ` with
/// `|m| <= |μ| <= |m| + extra` and `|m| <= max_m`, `R = 2 max A`.
///
/// Exhaustive over paths: `φ(m, μ)` depends on `μ` only through the states
/// `(r(μ|_k), φ(m, μ|_k))`, so the reachable state sets at each length cover
/// every path. One check is one (start, length, state) triple.
pub fn nucleus_bound(pair: &MatrixPair, max_m: i64, extra: usize, exec: Exec) -> Tally {
    let r = nucleus_radius(pair);
    let starts: Vec<(usize, i64)> =
        (0..pair.n()).flat_map(|v| (-max_m..=max_m).map(move |m| (v, m))).collect();
    let parts = map_items(exec, &starts, |&(v, m)| {
        let mut t = Tally::default();
        let mut states: BTreeSet<(usize, i64)> = BTreeSet::from([(v, m)]);
        let from = m.unsigned_abs() as usize;
        for len in 0..=from + extra {
            if len >= from {
                for &(u, c) in &states {
                    t.record(c.abs() <= r, || format!("m={m} from vertex {}: φ={c} at length {len}, vertex {}", v + 1, u + 1));
                }
            }
            states = states
                .iter()
                .flat_map(|&(u, c)| {
                    pair.out_edges(u).map(move |e| (e.dst as usize, act_edge_small(pair, c, e).expect("small").1))
                })
                .collect();
        }
        t
    });
    parts.into_iter().fold(Tally::default(), |mut acc, t| {
        acc.merge(t);
        acc
    })
}

/// The point `μ · η η η …` with `η` the lasso reached from `r(μ)` by always
/// taking the first (`last = false`) or last outgoing edge.
pub fn cylinder_point(pair: &MatrixPair, mu: &Path, last: bool) -> InfPath {
    let mut walk = mu.clone();
    let mut visited = vec![None; pair.n()];
    loop {
        let v = walk.range();
        if let Some(k) = visited[v] {
            let tail = walk.suffix(k);
            return InfPath::new(walk.prefix(k), tail).expect("lasso is a point");
        }
        visited[v] = Some(walk.len());
        let mut out = pair.out_edges(v);
        let e = if last { out.last() } else { out.next() }.expect("no sinks");
        walk.push(e);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Agreement {
    pub points: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<String>,
}

impl Agreement {
    pub fn agrees(&self) -> bool {
        self.mismatches == 0 && self.points > 0
    }
}

/// Compares `π_U` and `π_V` on two sample points of every cylinder of length
/// `depth`.
pub fn agree_on_cylinders(
    pair: &MatrixPair,
    u: &Bisection,
    v: &Bisection,
    depth: usize,
    exec: Exec,
) -> Result<Agreement> {
    let (eu, ev) = (Evaluator::new(pair, u), Evaluator::new(pair, v));
    let cylinders = all_paths(pair, depth);
    let parts = map_items(exec, &cylinders, |mu| -> Result<Agreement> {
        let mut a = Agreement::default();
        for last in [false, true] {
            let x = cylinder_point(pair, mu, last);
            let (y, z) = (eu.apply(&x)?, ev.apply(&x)?);
            a.points += 1;
            if y != z {
                a.mismatches += 1;
                a.first_mismatch.get_or_insert_with(|| format!("{x}: {y} vs {z}"));
            }
        }
        Ok(a)
    });
    let mut out = Agreement::default();
    for part in parts {
        let part = part?;
        out.points += part.points;
        out.mismatches += part.mismatches;
        if out.first_mismatch.is_none() {
            out.first_mismatch = part.first_mismatch;
        }
    }
    Ok(out)
}
