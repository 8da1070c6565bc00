//! Exact dense linear algebra over Q(i) and Q: Gaussian elimination,
//! null spaces, linear solves, rational matrix inversion, and signatures of
//! symmetric rational matrices by congruence diagonalization.
//!
//! Everything here is exact; there is no pivot-size heuristic because there
//! is no rounding.

use crate::scalar::Scalar;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type QiMatrix = Vec<Vec<Scalar>>;

/// Reduced row echelon form, in place. Returns the pivot columns.
pub fn rref(m: &mut QiMatrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inv();
        for j in c..cols {
            let v = &m[r][j] * &inv;
            m[r][j] = v;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= &delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(m: &QiMatrix) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Basis of the right null space of `m` (column vectors).
pub fn nullspace(m: &QiMatrix) -> Vec<Vec<Scalar>> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Scalar::zero(); cols];
        v[fc] = Scalar::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[row][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve `m x = b` exactly. Returns `None` if inconsistent; with free
/// variables present the returned solution sets them to zero. The flag is
/// true iff the solution is unique.
pub fn solve(m: &QiMatrix, b: &[Scalar]) -> Option<(Vec<Scalar>, bool)> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut aug: QiMatrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some((x, pivots.len() == cols))
}

/// Exact inverse of a square rational matrix; `None` if singular.
pub fn invert_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j {
                    BigRational::from_integer(1.into())
                } else {
                    BigRational::zero()
                });
            }
            r
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, pr);
        let inv = aug[c][c].recip();
        for j in c..2 * n {
            aug[c][j] = &aug[c][j] * &inv;
        }
        for i in 0..n {
            if i != c && !aug[i][c].is_zero() {
                let factor = aug[i][c].clone();
                for j in c..2 * n {
                    let delta = &factor * &aug[c][j];
                    aug[i][j] -= delta;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Signature (positive count, negative count) of a symmetric rational matrix
/// by exact congruence diagonalization.
pub fn signature(m: &[Vec<BigRational>]) -> (usize, usize) {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut pos = 0;
    let mut neg = 0;
    for k in 0..n {
        if a[k][k].is_zero() {
            // Bring a nonzero entry onto the diagonal: first try a later
            // diagonal entry, then an off-diagonal one via row+column
            // addition (congruence-safe).
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            } else {
                continue; // entire row/column zero: rank deficiency
            }
        }
        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &pivot;
            for c in 0..n {
                let delta = &factor * &a[k][c];
                a[i][c] -= delta;
            }
            for r in 0..n {
                let delta = &factor * &a[r][k];
                a[r][i] -= delta;
            }
        }
    }
    (pos, neg)
}
