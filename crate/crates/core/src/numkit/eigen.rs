//! Dense nonsymmetric eigenvalues: balancing, reduction to upper
//! Hessenberg form by stabilized elementary similarity transforms, then
//! the Francis double-shift QR iteration (the classical EISPACK
//! balanc/elmhes/hqr chain, eigenvalues only).

use super::{Complex, DenseMatrix};
use crate::error::{Error, Result};

const MAX_DENSE_EIGEN_SIZE: usize = 200;
const RADIX: f64 = 2.0;

/// All eigenvalues of a square matrix, sorted by real part then
/// imaginary part. Accurate to roughly `1e-8` relative for
/// well-conditioned spectra up to order 200.
pub fn dense_eigenvalues(a: &DenseMatrix) -> Result<Vec<Complex>> {
    if !a.is_square() {
        return Err(Error::InvalidArgument(format!(
            "eigenvalues require a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n > MAX_DENSE_EIGEN_SIZE {
        return Err(Error::Capability {
            what: "dense eigenproblem size",
            requested: n,
            max: MAX_DENSE_EIGEN_SIZE,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut work = a.clone();
    balance(&mut work);
    hessenberg(&mut work);
    let mut eigenvalues = hqr(&mut work)?;
    eigenvalues.sort_by(|p, q| {
        (p.re, p.im)
            .partial_cmp(&(q.re, q.im))
            .expect("eigenvalues are finite")
    });
    Ok(eigenvalues)
}

/// Diagonal similarity scaling that roughly equalizes row and column
/// norms; improves the accuracy of the QR iteration.
fn balance(a: &mut DenseMatrix) {
    let n = a.rows();
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= g;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
        if done {
            return;
        }
    }
}

/// Reduce to upper Hessenberg form by pivoted elementary similarity
/// transformations; everything below the subdiagonal is zeroed.
fn hessenberg(a: &mut DenseMatrix) {
    let n = a.rows();
    for m in 1..n.saturating_sub(1) {
        let mut x = 0.0f64;
        let mut pivot = m;
        for j in m..n {
            if a[(j, m - 1)].abs() > x.abs() {
                x = a[(j, m - 1)];
                pivot = j;
            }
        }
        if pivot != m {
            for j in m - 1..n {
                let tmp = a[(pivot, j)];
                a[(pivot, j)] = a[(m, j)];
                a[(m, j)] = tmp;
            }
            for j in 0..n {
                let tmp = a[(j, pivot)];
                a[(j, pivot)] = a[(j, m)];
                a[(j, m)] = tmp;
            }
        }
        if x != 0.0 {
            for i in m + 1..n {
                let mut y = a[(i, m - 1)];
                if y != 0.0 {
                    y /= x;
                    a[(i, m - 1)] = y;
                    for j in m..n {
                        let delta = y * a[(m, j)];
                        a[(i, j)] -= delta;
                    }
                    for j in 0..n {
                        let delta = y * a[(j, i)];
                        a[(j, m)] += delta;
                    }
                }
            }
        }
    }
    // Multipliers stored below the subdiagonal are not part of the
    // Hessenberg matrix; clear them before the QR iteration.
    for i in 2..n {
        for j in 0..i - 1 {
            a[(i, j)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix, eigenvalues
/// only. Destroys its input.
fn hqr(h: &mut DenseMatrix) -> Result<Vec<Complex>> {
    let n = h.rows();
    let mut out = vec![Complex::new(0.0, 0.0); n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += h[(i, j)].abs();
        }
    }
    if anorm == 0.0 {
        return Ok(out);
    }

    let mut t = 0.0f64;
    let mut nn = n as isize - 1;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = nn as usize;
            while l >= 1 {
                let s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
                let s = if s == 0.0 { anorm } else { s };
                if h[(l, l - 1)].abs() <= f64::EPSILON * s {
                    break;
                }
                l -= 1;
            }

            let nnu = nn as usize;
            let mut x = h[(nnu, nnu)];
            if l == nnu {
                out[nnu] = Complex::new(x + t, 0.0);
                nn -= 1;
                break;
            }

            let mut y = h[(nnu - 1, nnu - 1)];
            let mut w = h[(nnu, nnu - 1)] * h[(nnu - 1, nnu)];
            if l == nnu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + z.copysign(p);
                    let first = x + z;
                    let second = if z != 0.0 { x - w / z } else { first };
                    out[nnu - 1] = Complex::new(first, 0.0);
                    out[nnu] = Complex::new(second, 0.0);
                } else {
                    out[nnu - 1] = Complex::new(x + p, z);
                    out[nnu] = Complex::new(x + p, -z);
                }
                nn -= 2;
                break;
            }

            if its == 30 {
                return Err(Error::EigenNonConvergence {
                    what: "Hessenberg QR",
                    index: nnu,
                    sweeps: 30,
                });
            }
            if its == 10 || its == 20 {
                // Exceptional shift to break symmetry-induced cycling.
                t += x;
                for i in 0..=nnu {
                    let d = h[(i, i)] - x;
                    h[(i, i)] = d;
                }
                let s = h[(nnu, nnu - 1)].abs() + h[(nnu - 1, nnu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Form the first column of (H - a I)(H - b I) and look for two
            // consecutive small subdiagonal elements to start the sweep at.
            let mut m = nnu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = h[(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - z - rr - ss;
                r = h[(m + 2, m + 1)];
                let scale = p.abs() + q.abs() + r.abs();
                p /= scale;
                q /= scale;
                r /= scale;
                if m == l {
                    break;
                }
                let u = h[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (h[(m - 1, m - 1)].abs() + z.abs() + h[(m + 1, m + 1)].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nnu {
                h[(i, i - 2)] = 0.0;
                if i != m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // Double QR sweep: chase the bulge from row m to row nn.
            for k in m..nnu {
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if k != nnu - 1 { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            h[(k, k - 1)] = -h[(k, k - 1)];
                        }
                    } else {
                        h[(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nnu {
                        let mut pp = h[(k, j)] + q * h[(k + 1, j)];
                        if k != nnu - 1 {
                            pp += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= pp * z;
                        }
                        h[(k + 1, j)] -= pp * y;
                        h[(k, j)] -= pp * x;
                    }
                    let upper = if nnu < k + 3 { nnu } else { k + 3 };
                    for i in l..=upper {
                        let mut pp = x * h[(i, k)] + y * h[(i, k + 1)];
                        if k != nnu - 1 {
                            pp += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= pp * r;
                        }
                        h[(i, k + 1)] -= pp * q;
                        h[(i, k)] -= pp;
                    }
                }
            }
        }
    }
    Ok(out)
}
