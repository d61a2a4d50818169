//! Integer matrices and Smith normal form by elementary row/column reduction.
//!
//! Entries are arbitrary precision: the transforms `u`, `v` of even a small
//! matrix can outgrow 64 bits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::from(1);
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = BigInt::from(d);
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols).expect("ragged matrix rows")
    }

    /// Like [`IntMatrix::from_rows`] but with an explicit column count, so that
    /// matrices with zero rows keep their width.
    pub fn from_rows_with_cols(rows: &[Vec<i64>], cols: usize) -> Option<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
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

    /// Matrix product; `None` on shape mismatch.
    pub fn mul(&self, other: &Self) -> Option<Self> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        Some(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &Self) -> Option<Self> {
        if self.rows != other.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Some(out)
    }

    /// The diagonal entries `a_00, a_11, …` up to `min(rows, cols)`.
    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(source, j)] * factor;
            self[(target, j)] += v;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, source)] * factor;
            self[(i, target)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let i = r * self.cols + j;
            self.data[i] = -std::mem::take(&mut self.data[i]);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let i = r * self.cols + c;
            self.data[i] = -std::mem::take(&mut self.data[i]);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Result of [`smith_normal_form`]: `m = u * d * v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal of `d`, which is nonnegative and a divisibility chain.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.d.diagonal_entries()
    }
}

/// Smith normal form `m = u * d * v` with `u`, `v` unimodular and `d` diagonal,
/// nonnegative and `d_1 | d_2 | …` (zeros last).
///
/// Pivots on the smallest nonzero entry of the remaining block. The transforms
/// are tracked as inverses of the elementary operations applied to `m`, so no
/// integer matrix inversion is ever needed.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut a = m.clone();
    // invariant: m = u * a * v
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);

    let row_add = |a: &mut IntMatrix, u: &mut IntMatrix, t: usize, s: usize, q: &BigInt| {
        a.add_row(t, s, q);
        u.add_col(s, t, &-q);
    };
    let col_add = |a: &mut IntMatrix, v: &mut IntMatrix, t: usize, s: usize, q: &BigInt| {
        a.add_col(t, s, q);
        v.add_row(s, t, &-q);
    };
    let one = BigInt::from(1);

    for t in 0..n {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..a.rows {
                for j in t..a.cols {
                    let x = &a[(i, j)];
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // trailing block is zero; nothing left to do
                return finish(a, u, v);
            };
            if pi != t {
                a.swap_rows(t, pi);
                u.swap_cols(t, pi);
            }
            if pj != t {
                a.swap_cols(t, pj);
                v.swap_rows(t, pj);
            }

            let mut clean = true;
            for i in t + 1..a.rows {
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                if !q.is_zero() {
                    row_add(&mut a, &mut u, i, t, &-q);
                }
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..a.cols {
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                if !q.is_zero() {
                    col_add(&mut a, &mut v, j, t, &-q);
                }
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // pivot must divide the whole trailing block
            let p = a[(t, t)].clone();
            let offender = (t + 1..a.rows)
                .find(|&i| (t + 1..a.cols).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => row_add(&mut a, &mut u, t, i, &one),
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_col(t);
        }
    }
    finish(a, u, v)
}

fn finish(mut a: IntMatrix, mut u: IntMatrix, v: IntMatrix) -> SmithForm {
    for t in 0..a.rows.min(a.cols) {
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_col(t);
        }
    }
    SmithForm { u, d: a, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(&s.d).unwrap().mul(&s.v).unwrap(), *m);
        let diag = s.invariants();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        s
    }

    #[test]
    fn two_by_two_example() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.invariants(), ints(&[2, 4]));
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.u, IntMatrix::identity(3));
        assert_eq!(s.v, IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert_eq!(s.d, IntMatrix::zeros(2, 3));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = check(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(s.invariants(), ints(&[1, 6]));
    }

    #[test]
    fn negative_and_rectangular() {
        let s = check(&IntMatrix::from_rows(&[vec![-4, 6, 0], vec![0, -10, 14]]));
        assert_eq!(s.invariants(), ints(&[2, 2]));
    }

    #[test]
    fn empty_matrices() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(2, 0));
    }
}
