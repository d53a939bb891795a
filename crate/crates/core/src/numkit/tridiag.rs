//! Symmetric tridiagonal eigenvalues by the implicit-shift QL iteration.

use crate::error::{Error, Result};

/// A symmetric tridiagonal matrix given by its diagonal and positive
/// off-diagonal. The Hermite Jacobi matrix has zero diagonal and
/// off-diagonal `beta_m = sqrt(m/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidArgument(
                "tridiagonal matrix must have size >= 1".into(),
            ));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument(format!(
                "off-diagonal length {} does not match size {}",
                off.len(),
                diag.len()
            )));
        }
        if let Some((index, &value)) = diag
            .iter()
            .chain(off.iter())
            .enumerate()
            .find(|(_, v)| !v.is_finite())
        {
            return Err(Error::NonFiniteInput {
                what: "tridiagonal entry",
                index,
                at: value,
            });
        }
        Ok(SymTridiag { diag, off })
    }

    /// The Jacobi matrix whose eigenvalues are the zeros of `H_size`.
    pub fn hermite_jacobi(size: usize) -> Self {
        SymTridiag {
            diag: vec![0.0; size],
            off: (1..size).map(|m| (m as f64 / 2.0).sqrt()).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        tridiag_eigenvalues(self)
    }
}

/// All eigenvalues, sorted ascending.
pub fn tridiag_eigenvalues(t: &SymTridiag) -> Result<Vec<f64>> {
    let n = t.size();
    let mut d = t.diag.clone();
    let mut e = t.off.clone();
    e.push(0.0);

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // Look for a negligible subdiagonal element to split at.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::EigenNonConvergence {
                    what: "tridiagonal QL",
                    index: l,
                    sweeps: 50,
                });
            }

            // Implicit Wilkinson shift.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Recover from underflow by skipping the transformation.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    d.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    Ok(d)
}
