//! Independent oracles shared by the integration tests. Nothing here calls the
//! Smith normal form or the SNF-based injectivity tests of the library.

#![allow(dead_code)]

use std::collections::HashSet;

use holodual_core::finab::{IntMatrix, Hom};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors `s_k = d_k / d_{k-1}` where `d_k` is the gcd of all
/// `k × k` minors; zero once the rank is exceeded.
pub fn invariants_from_minors(rows: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
    let rows = big_rows(rows);
    let r = rows.len();
    let n = r.min(cols);
    let mut out = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 1..=n {
        let mut g = BigInt::zero();
        for rs in subsets(r, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect()).collect();
                g = g.gcd(&det_bareiss(&minor));
            }
        }
        if g.is_zero() {
            out.extend(std::iter::repeat(BigInt::zero()).take(n - out.len()));
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> (Vec<Vec<i64>>, usize) {
    let r = rng.gen_range(1..=max_dim);
    let c = rng.gen_range(1..=max_dim);
    let rows = (0..r)
        .map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    (rows, c)
}

pub fn to_int_matrix(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    IntMatrix::from_rows_with_cols(rows, cols).expect("rectangular")
}

/// Image size of a homomorphism by enumerating its source.
pub fn image_size(f: &Hom) -> u64 {
    let image: HashSet<Vec<u64>> = f
        .source()
        .elements()
        .map(|g| f.apply(&g).expect("element of source").coords().to_vec())
        .collect();
    image.len() as u64
}

/// Kernel size of a homomorphism by enumerating its source.
pub fn kernel_size(f: &Hom) -> u64 {
    f.source()
        .elements()
        .filter(|g| f.apply(g).expect("element of source").is_zero())
        .count() as u64
}
