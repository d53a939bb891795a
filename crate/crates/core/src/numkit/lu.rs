//! Dense LU factorization with partial pivoting and a Hager one-norm
//! condition estimate.

use super::DenseMatrix;
use crate::error::{Error, Result};

/// LU factors of a square matrix, kept for repeated solves and for the
/// condition estimator.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DenseMatrix,
    pivots: Vec<usize>,
    a_one_norm: f64,
}

impl LuFactors {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidArgument(format!(
                "LU factorization requires a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let a_one_norm = a.one_norm();
        let mut lu = a.clone();
        let mut pivots = vec![0usize; n];

        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_mag = lu[(k, k)].abs();
            for i in k + 1..n {
                let mag = lu[(i, k)].abs();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = i;
                }
            }
            if pivot_mag == 0.0 {
                return Err(Error::SingularMatrix { pivot: k });
            }
            pivots[k] = pivot_row;
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
            }
            let inv = 1.0 / lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] * inv;
                lu[(i, k)] = factor;
                if factor != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= factor * lu[(k, j)];
                    }
                }
            }
        }

        Ok(LuFactors {
            lu,
            pivots,
            a_one_norm,
        })
    }

    pub fn size(&self) -> usize {
        self.lu.rows()
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.size();
        assert_eq!(b.len(), n);
        // P A = L U: permute b first, then the two triangular solves.
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
        }
        for k in 0..n {
            for i in k + 1..n {
                x[i] -= self.lu[(i, k)] * x[k];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// Solve `A^T x = b` using the same factors.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.size();
        assert_eq!(b.len(), n);
        // A^T = U^T L^T P, so solve U^T y = b, then L^T z = y, then
        // unapply the row permutation.
        let mut x = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(j, i)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(j, i)] * x[j];
            }
        }
        for k in (0..n).rev() {
            x.swap(k, self.pivots[k]);
        }
        x
    }

    /// One-norm condition estimate `||A||_1 * est(||A^{-1}||_1)` by Hager's
    /// method.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.size();
        let mut x = vec![1.0 / n as f64; n];
        let mut estimate = 0.0f64;
        for _ in 0..5 {
            let y = self.solve(&x);
            let y_norm: f64 = y.iter().map(|v| v.abs()).sum();
            if !y_norm.is_finite() {
                return f64::INFINITY;
            }
            estimate = estimate.max(y_norm);
            let xi: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
            let z = self.solve_transpose(&xi);
            let (j_max, z_max) = z
                .iter()
                .enumerate()
                .map(|(j, v)| (j, v.abs()))
                .fold((0, 0.0), |acc, item| if item.1 > acc.1 { item } else { acc });
            let z_dot_x: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if z_max <= z_dot_x.abs() {
                break;
            }
            x = vec![0.0; n];
            x[j_max] = 1.0;
        }
        self.a_one_norm * estimate
    }
}

/// One-shot solve returning the solution and the condition estimate.
pub fn lu_solve(a: &DenseMatrix, b: &[f64]) -> Result<(Vec<f64>, f64)> {
    let factors = LuFactors::factor(a)?;
    let condition = factors.condition_estimate();
    Ok((factors.solve(b), condition))
}
