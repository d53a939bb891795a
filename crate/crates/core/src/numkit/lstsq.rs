//! Overdetermined least squares by Householder QR with column pivoting.

use super::{norm2, DenseMatrix};
use crate::error::{Error, Result};

/// Relative threshold on the pivoted `R` diagonal used to count the
/// numerical rank.
const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LstsqResult {
    pub solution: Vec<f64>,
    pub residual_norm: f64,
    pub rank: usize,
}

/// Minimize `||A x - b||_2` for a matrix with at least as many rows as
/// columns. Rank-deficient systems get the basic solution with zeros in
/// the non-pivot coordinates; the rank is reported and the caller decides.
pub fn lstsq(a: &DenseMatrix, b: &[f64]) -> Result<LstsqResult> {
    let m = a.rows();
    let n = a.cols();
    if m < n {
        return Err(Error::InvalidArgument(format!(
            "least squares requires rows >= cols, got {m}x{n}"
        )));
    }
    if b.len() != m {
        return Err(Error::InvalidArgument(format!(
            "right-hand side length {} does not match {m} rows",
            b.len()
        )));
    }

    let mut r = a.clone();
    let mut qtb = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        // Column pivot: move the column with the largest remaining norm
        // into position k.
        let mut pivot = k;
        let mut pivot_norm = trailing_col_norm(&r, k, k);
        for j in k + 1..n {
            let norm = trailing_col_norm(&r, j, k);
            if norm > pivot_norm {
                pivot_norm = norm;
                pivot = j;
            }
        }
        if pivot != k {
            for i in 0..m {
                let tmp = r[(i, k)];
                r[(i, k)] = r[(i, pivot)];
                r[(i, pivot)] = tmp;
            }
            perm.swap(k, pivot);
        }
        if pivot_norm == 0.0 {
            continue; // remaining columns are exactly zero
        }

        // Householder reflection producing R[k][k] = -sign(x_k) ||x||.
        let alpha = -pivot_norm.copysign(r[(k, k)]);
        let mut v: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let v_norm_sq: f64 = v.iter().map(|x| x * x).sum();
        if v_norm_sq > 0.0 {
            let beta = 2.0 / v_norm_sq;
            for j in k..n {
                let proj: f64 = (k..m).map(|i| v[i - k] * r[(i, j)]).sum();
                let scaled = beta * proj;
                for i in k..m {
                    r[(i, j)] -= scaled * v[i - k];
                }
            }
            let proj: f64 = (k..m).map(|i| v[i - k] * qtb[i]).sum();
            let scaled = beta * proj;
            for i in k..m {
                qtb[i] -= scaled * v[i - k];
            }
        }
        r[(k, k)] = alpha;
        for i in k + 1..m {
            r[(i, k)] = 0.0;
        }
    }

    let largest = r[(0, 0)].abs();
    let rank = (0..n)
        .take_while(|&k| r[(k, k)].abs() > RANK_TOLERANCE * largest)
        .count();

    let mut y = vec![0.0; n];
    for i in (0..rank).rev() {
        let mut sum = qtb[i];
        for j in i + 1..rank {
            sum -= r[(i, j)] * y[j];
        }
        y[i] = sum / r[(i, i)];
    }
    let mut solution = vec![0.0; n];
    for (k, &col) in perm.iter().enumerate() {
        solution[col] = y[k];
    }

    let ax = a.mul_vec(&solution);
    let diff: Vec<f64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    Ok(LstsqResult {
        solution,
        residual_norm: norm2(&diff),
        rank,
    })
}

fn trailing_col_norm(r: &DenseMatrix, col: usize, from_row: usize) -> f64 {
    (from_row..r.rows())
        .map(|i| r[(i, col)] * r[(i, col)])
        .sum::<f64>()
        .sqrt()
}
