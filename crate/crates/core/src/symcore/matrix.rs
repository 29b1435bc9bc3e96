//! Small exact integer-matrix helpers for exponent matrices.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::rat::Int;

pub fn identity_matrix(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

/// `a * b` for an `m x k` times `k x n` product.
pub fn mat_mul(a: &[Vec<Int>], b: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let k = if a.is_empty() { b.len() } else { a[0].len() };
    debug_assert_eq!(k, b.len(), "inner dimensions must agree");
    let n = if b.is_empty() { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    let mut acc = Int::zero();
                    for (i, e) in row.iter().enumerate() {
                        acc += e * &b[i][j];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn matrix_det(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut negate = false;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let pivot = (k + 1..n).find(|&r| !a[r][k].is_zero());
            match pivot {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
            a[i][k] = Int::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn minor_det(m: &[Vec<Int>], skip_row: usize, skip_col: usize) -> Int {
    let sub: Vec<Vec<Int>> = m
        .iter()
        .enumerate()
        .filter(|(r, _)| *r != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(c, _)| *c != skip_col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect();
    matrix_det(&sub)
}

/// Inverse of a unimodular integer matrix via the adjugate; `None` when the
/// determinant is not `+-1`.
pub fn unimodular_inverse(m: &[Vec<Int>]) -> Option<Vec<Vec<Int>>> {
    let n = m.len();
    let d = matrix_det(m);
    if !d.abs().is_one() {
        return None;
    }
    // adjugate transposes the cofactors; det = +-1 folds in as a sign
    let inv = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let c = minor_det(m, i, j);
                    let c = if (i + j) % 2 == 1 { -c } else { c };
                    c * &d
                })
                .collect()
        })
        .collect();
    Some(inv)
}
