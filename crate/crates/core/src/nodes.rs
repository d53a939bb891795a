//! Gauss-Hermite nodes (zeros of `psi_(n+1)`), the discrete weights, and
//! the superconvergence point sets.
//!
//! Nodes come from the eigenvalues of the Jacobi matrix polished by
//! Newton steps on `psi_(n+1)`; the tau set is found by bracketed
//! root-finding on `psi'_(n+1)`; the eta set follows analytically from
//! the factorization `psi''_(n+1) = (x^2 - (2n+3)) psi_(n+1)`.

use crate::basis::{self, Limits, NormConstants};
use crate::error::{Error, Result};
use crate::numkit::SymTridiag;

/// Interpolation nodes `x_0 < ... < x_n` (the zeros of `psi_(n+1)`)
/// with the discrete weights `w_j = 1 / ((n+1) psi_n(x_j)^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// The superconvergence point sets for degree `n`: `tau` are the `n + 2`
/// zeros of `psi'_(n+1)`, `eta` the `n + 3` zeros of `psi''_(n+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperconPoints {
    pub n: usize,
    pub tau: Vec<f64>,
    pub eta: Vec<f64>,
}

/// `psi_(n+1)` and `psi'_(n+1)` at one point, from a single row pass.
fn psi_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let row = basis::psi_row(n + 2, x);
    let np1 = (n + 1) as f64;
    let dp = (np1 / 2.0).sqrt() * row[n] - ((np1 + 1.0) / 2.0).sqrt() * row[n + 2];
    (row[n + 1], dp)
}

/// Compute the Gauss-Hermite node set of degree `n`.
pub fn gauss_hermite_nodes(n: usize) -> Result<NodeSet> {
    let limits = Limits::default();
    if n > limits.max_degree {
        return Err(Error::Capability {
            what: "degree",
            requested: n,
            max: limits.max_degree,
        });
    }

    let jacobi = SymTridiag::hermite_jacobi(n + 1);
    let mut nodes = jacobi.eigenvalues()?;

    // Newton polish on psi_(n+1); at most 5 steps each.
    for x in nodes.iter_mut() {
        for _ in 0..5 {
            let (value, slope) = psi_and_derivative(n, *x);
            if slope == 0.0 {
                break;
            }
            let step = value / slope;
            *x -= step;
            if step.abs() <= 1e-15 * (1.0 + x.abs()) {
                break;
            }
        }
    }

    // The zeros are symmetric about the origin; enforce it exactly.
    let count = n + 1;
    for j in 0..count / 2 {
        let v = 0.5 * (nodes[count - 1 - j] - nodes[j]);
        nodes[j] = -v;
        nodes[count - 1 - j] = v;
    }
    if count % 2 == 1 {
        nodes[count / 2] = 0.0;
    }

    let scale = (n + 1) as f64;
    let weights = nodes
        .iter()
        .map(|&x| {
            let p = basis::psi(n, x);
            1.0 / (scale * p * p)
        })
        .collect();

    Ok(NodeSet { n, nodes, weights })
}

/// Safeguarded bisection-then-Newton root finder. `f` returns the value
/// and its derivative; the bracket must straddle a sign change.
fn bracketed_root(
    f: &dyn Fn(f64) -> (f64, f64),
    mut lo: f64,
    mut hi: f64,
    target: &'static str,
    index: usize,
) -> Result<f64> {
    let (mut flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::BracketFailure { target, index });
    }

    // A few bisection steps to shrink the bracket, then Newton with
    // bisection fallback whenever a step leaves the bracket.
    for _ in 0..8 {
        let mid = 0.5 * (lo + hi);
        let (fmid, _) = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..60 {
        let (value, slope) = f(x);
        if value == 0.0 {
            return Ok(x);
        }
        if value.signum() == flo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let newton = if slope != 0.0 { x - value / slope } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 1e-15 * (1.0 + x.abs()) {
            break;
        }
    }
    Ok(x)
}

/// The `n + 2` zeros of `psi'_(n+1)`, sorted ascending.
///
/// One zero lies strictly between each adjacent node pair and one beyond
/// each outermost node, below `sqrt(2n + 5)`.
pub fn tau_points(n: usize) -> Result<Vec<f64>> {
    let node_set = gauss_hermite_nodes(n)?;
    tau_points_from(&node_set)
}

pub(crate) fn tau_points_from(node_set: &NodeSet) -> Result<Vec<f64>> {
    let n = node_set.n;
    let np1 = (n + 1) as f64;
    let eval = |x: f64| {
        let row = basis::psi_row(n + 2, x);
        let dp = (np1 / 2.0).sqrt() * row[n] - ((np1 + 1.0) / 2.0).sqrt() * row[n + 2];
        // psi''_(n+1) = (x^2 - (2n+3)) psi_(n+1).
        let ddp = (x * x - (2.0 * np1 + 1.0)) * row[n + 1];
        (dp, ddp)
    };

    let nodes = &node_set.nodes;
    let outer = (2.0 * n as f64 + 5.0).sqrt();
    let mut tau = Vec::with_capacity(n + 2);
    tau.push(bracketed_root(&eval, -outer, nodes[0], "tau", 0)?);
    for j in 0..n {
        tau.push(bracketed_root(&eval, nodes[j], nodes[j + 1], "tau", j + 1)?);
    }
    tau.push(bracketed_root(&eval, nodes[n], outer, "tau", n + 1)?);

    let count = n + 2;
    for j in 0..count / 2 {
        let v = 0.5 * (tau[count - 1 - j] - tau[j]);
        tau[j] = -v;
        tau[count - 1 - j] = v;
    }
    if count % 2 == 1 {
        tau[count / 2] = 0.0;
    }

    // Residual verification against the sup scale of psi'_(n+1).
    let scale = NormConstants::constant(1) * np1.powf(0.25);
    for &t in &tau {
        let residual = eval(t).0.abs();
        let tolerance = 1e-12 * scale;
        if residual > tolerance {
            return Err(Error::VerificationFailure {
                what: "tau point residual",
                residual,
                tolerance,
            });
        }
    }
    Ok(tau)
}

/// The `n + 3` zeros of `psi''_(n+1)`: the nodes together with the
/// turning points `+-sqrt(2n + 3)` of `psi_(n+1)`.
pub fn eta_points(n: usize) -> Result<Vec<f64>> {
    let node_set = gauss_hermite_nodes(n)?;
    eta_points_from(&node_set)
}

pub(crate) fn eta_points_from(node_set: &NodeSet) -> Result<Vec<f64>> {
    let n = node_set.n;
    let turning = (2.0 * n as f64 + 3.0).sqrt();
    let mut eta = Vec::with_capacity(n + 3);
    eta.push(-turning);
    eta.extend_from_slice(&node_set.nodes);
    eta.push(turning);

    // Verify through the ladder expansion of psi'' rather than the
    // factorization the set was built from.
    let coeffs = basis::derivative_ladder(n + 1, 2);
    for &x in &eta {
        let row = basis::psi_row(n + 3, x);
        let residual: f64 = coeffs.iter().zip(&row).map(|(c, p)| c * p).sum();
        if residual.abs() > 1e-10 {
            return Err(Error::VerificationFailure {
                what: "eta point residual",
                residual: residual.abs(),
                tolerance: 1e-10,
            });
        }
    }
    Ok(eta)
}

/// Both superconvergence point sets for degree `n`.
pub fn supercon_points(n: usize) -> Result<SuperconPoints> {
    let node_set = gauss_hermite_nodes(n)?;
    Ok(SuperconPoints {
        n,
        tau: tau_points_from(&node_set)?,
        eta: eta_points_from(&node_set)?,
    })
}

/// CSV dump of a node set and its superconvergence points: one row per
/// point with columns `(index, kind, value, weight-or-empty)` at 17
/// significant digits.
pub fn points_csv(node_set: &NodeSet, points: &SuperconPoints) -> String {
    let mut out = String::from("index,kind,value,weight\n");
    for (j, (&x, &w)) in node_set.nodes.iter().zip(&node_set.weights).enumerate() {
        out.push_str(&format!("{j},node,{x:.16e},{w:.16e}\n"));
    }
    for (j, &t) in points.tau.iter().enumerate() {
        out.push_str(&format!("{j},tau,{t:.16e},\n"));
    }
    for (j, &e) in points.eta.iter().enumerate() {
        out.push_str(&format!("{j},eta,{e:.16e},\n"));
    }
    out
}
