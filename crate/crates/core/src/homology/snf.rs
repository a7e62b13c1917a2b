//! Dense integer matrices and the Smith normal form with both unimodular
//! transforms (and the inverse of the row transform).

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix { rows: r, cols: c, data: rows.iter().flatten().cloned().map(Into::into).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// row_i += k · row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.cols {
            let t = k * &self[(j, c)];
            self[(i, c)] += t;
        }
    }

    /// col_i += k · col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.rows {
            let t = k * &self[(r, j)];
            self[(r, i)] += t;
        }
    }

    fn neg_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let t = -&self[(i, c)];
            self[(i, c)] = t;
        }
    }

    fn neg_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let t = -&self[(r, j)];
            self[(r, j)] = t;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// `D = P·M·Q` with `P`, `Q` unimodular and `D` diagonal,
/// `d_1 | d_2 | … | d_rank`, all positive, zeros after `rank`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub d: IntMatrix,
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// The nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Some `x` with `M x = b`, if one exists over the integers.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.p.mul_vec(b);
        let mut z = vec![BigInt::zero(); self.q.rows()];
        for (i, yi) in y.iter().enumerate() {
            if i < self.rank {
                let (quot, rem) = yi.div_rem(&self.d[(i, i)]);
                if !rem.is_zero() {
                    return None;
                }
                z[i] = quot;
            } else if !yi.is_zero() {
                return None;
            }
        }
        Some(self.q.mul_vec(&z))
    }
}

struct Work {
    a: IntMatrix,
    p: IntMatrix,
    p_inv: IntMatrix,
    q: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.p.swap_rows(i, j);
        self.p_inv.swap_cols(i, j);
    }

    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        self.a.add_row(i, j, k);
        self.p.add_row(i, j, k);
        self.p_inv.add_col(j, i, &-k);
    }

    fn neg_row(&mut self, i: usize) {
        self.a.neg_row(i);
        self.p.neg_row(i);
        self.p_inv.neg_col(i);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.q.swap_cols(i, j);
    }

    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        self.a.add_col(i, j, k);
        self.q.add_col(i, j, k);
    }
}

pub fn smith(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        p: IntMatrix::identity(r),
        p_inv: IntMatrix::identity(r),
        q: IntMatrix::identity(c),
    };
    let mut t = 0;
    while t < r.min(c) {
        'pivot: loop {
            // The smallest nonzero entry of the trailing block becomes the
            // pivot; every pass below either finishes the stage or leaves a
            // nonzero remainder smaller than it, so the pivot shrinks.
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &w.a[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break 'pivot };
            w.swap_rows(t, bi);
            w.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..r {
                let quot = nearest_quotient(&w.a[(i, t)], &w.a[(t, t)]);
                if !quot.is_zero() {
                    w.add_row(i, t, &-quot);
                }
                clean &= w.a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                let quot = nearest_quotient(&w.a[(t, j)], &w.a[(t, t)]);
                if !quot.is_zero() {
                    w.add_col(j, t, &-quot);
                }
                clean &= w.a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let offender = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !w.a[(i, j)].is_multiple_of(&w.a[(t, t)]))
            });
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break 'pivot,
            }
        }
        if w.a[(t, t)].is_zero() {
            break;
        }
        if w.a[(t, t)].is_negative() {
            w.neg_row(t);
        }
        t += 1;
    }
    Smith { d: w.a, p: w.p, p_inv: w.p_inv, q: w.q, rank: t }
}

/// `q` with `|x - q·p| <= |p| / 2`.
fn nearest_quotient(x: &BigInt, p: &BigInt) -> BigInt {
    // the floor remainder shares the sign of p, so rem - p is the other candidate
    let (q, rem) = x.div_mod_floor(p);
    if (&rem + &rem).abs() > p.abs() {
        q + 1
    } else {
        q
    }
}

/// Determinant by fraction-free elimination (Bareiss).
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "square matrix required");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Smith {
        let s = smith(m);
        assert_eq!(s.p.mul(m).mul(&s.q), s.d, "D != P M Q for\n{m}");
        assert_eq!(s.p.mul(&s.p_inv), IntMatrix::identity(m.rows()));
        assert!(determinant(&s.p).abs().is_one());
        assert!(determinant(&s.q).abs().is_one());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        assert!(f.iter().all(|d| d.is_positive()));
        assert!(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        for i in s.rank..m.rows().min(m.cols()) {
            assert!(s.d[(i, i)].is_zero());
        }
        s
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn nearest_quotient_halves_the_remainder() {
        for x in -20i64..=20 {
            for p in (-7i64..=7).filter(|&p| p != 0) {
                let q = nearest_quotient(&BigInt::from(x), &BigInt::from(p));
                let rem = x - i64::try_from(q).unwrap() * p;
                assert!(2 * rem.abs() <= p.abs(), "x={x} p={p} rem={rem}");
            }
        }
    }

    #[test]
    fn mixed_sign_pivots_stay_small() {
        check(&IntMatrix::from_rows(&[vec![9i64, -4]]));
        let m = IntMatrix::from_rows(&[
            vec![-9i64, 3, -5, 4, 2, 4],
            vec![2, -8, -2, 1, -9, -5],
            vec![3, -2, -4, -8, 2, -1],
            vec![-2, 6, -6, -9, -6, 8],
            vec![-6, -5, -4, -9, 0, 7],
            vec![1, 7, 7, -7, 0, 7],
        ]);
        let s = check(&m);
        let widest = s.p.data.iter().chain(&s.q.data).map(BigInt::bits).max().unwrap();
        assert!(widest < 128, "transform entries grew to {widest} bits");
    }

    #[test]
    fn small_examples() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.invariant_factors(), big(&[1, 1, 1]));
        let s = check(&IntMatrix::from_rows(&[vec![0i64, -2], vec![-2, 0]]));
        assert_eq!(s.invariant_factors(), big(&[2, 2]));
        let s = check(&IntMatrix::from_rows(&[vec![-4i64, -2], vec![-2, -1]]));
        assert_eq!(s.invariant_factors(), big(&[1]));
        let s = check(&IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        assert_eq!(s.invariant_factors(), big(&[2, 6, 12]));
        check(&IntMatrix::zeros(2, 3));
        check(&IntMatrix::from_rows(&[vec![6i64, 4], vec![10, 15], vec![3, 9]]));
    }

    #[test]
    fn solving() {
        let m = IntMatrix::from_rows(&[vec![0i64, 2], vec![2, 0]]);
        let s = smith(&m);
        assert_eq!(s.solve(&big(&[2, -2])), Some(big(&[-1, 1])));
        assert_eq!(s.solve(&big(&[1, 0])), None);
        let z = IntMatrix::zeros(1, 1);
        assert_eq!(smith(&z).solve(&big(&[0])), Some(big(&[0])));
        assert_eq!(smith(&z).solve(&big(&[1])), None);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&IntMatrix::from_rows(&[vec![2i64, 3], vec![3, 2]])), BigInt::from(-5));
        assert_eq!(
            determinant(&IntMatrix::from_rows(&[vec![0i64, 1, 2], vec![3, 4, 5], vec![6, 7, 9]])),
            BigInt::from(-3)
        );
    }
}
