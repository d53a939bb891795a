//! Hermite spectral interpolation at the Gauss-Hermite nodes, exact
//! spectral differentiation in coefficient space, error curves, and the
//! superconvergence ratio series.

use rayon::prelude::*;

use crate::basis;
use crate::error::{Error, Result};
use crate::functions::RealFunction;
use crate::nodes::{self, NodeSet};

/// An expansion `sum a_k psi_k` in the Hermite-function basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion {
    coeffs: Vec<f64>,
}

impl HermiteExpansion {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "expansion needs at least one coefficient");
        assert!(
            coeffs.iter().all(|c| c.is_finite()),
            "expansion coefficients must be finite"
        );
        HermiteExpansion { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluate by the Clenshaw backward recurrence against the
    /// Hermite-function three-term recurrence. Far outside the turning
    /// point (where the backward pass could overflow) the expansion is
    /// summed directly against a scaled basis row instead.
    pub fn evaluate(&self, x: f64) -> f64 {
        if x.abs() > 37.0 {
            let row = basis::psi_row(self.degree(), x);
            return self.coeffs.iter().zip(&row).map(|(a, p)| a * p).sum();
        }
        let mut b1 = 0.0f64;
        let mut b2 = 0.0f64;
        for k in (0..self.coeffs.len()).rev() {
            let kf = k as f64;
            let alpha = (2.0 / (kf + 1.0)).sqrt() * x;
            let beta_next = -((kf + 1.0) / (kf + 2.0)).sqrt();
            let b = self.coeffs[k] + alpha * b1 + beta_next * b2;
            b2 = b1;
            b1 = b;
        }
        b1 * basis::psi(0, x)
    }

    pub fn evaluate_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.evaluate(x)).collect()
    }

    /// Exact derivative in coefficient space; the degree grows by one.
    pub fn differentiate(&self) -> HermiteExpansion {
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            let kf = k as f64;
            if k > 0 {
                out[k - 1] += a * (kf / 2.0).sqrt();
            }
            out[k + 1] -= a * ((kf + 1.0) / 2.0).sqrt();
        }
        HermiteExpansion::new(out)
    }
}

/// Interpolate `f` at the `n + 1` Gauss-Hermite nodes by the discrete
/// Hermite transform: `a_k = sum_j w_j psi_k(x_j) f(x_j)`.
pub fn interpolate<F: Fn(f64) -> f64>(f: F, n: usize) -> Result<HermiteExpansion> {
    let node_set = nodes::gauss_hermite_nodes(n)?;
    let samples: Vec<f64> = node_set.nodes.iter().map(|&x| f(x)).collect();
    interpolate_samples(&node_set, &samples)
}

/// The discrete transform for samples already taken at the nodes.
pub fn interpolate_samples(node_set: &NodeSet, samples: &[f64]) -> Result<HermiteExpansion> {
    let n = node_set.n;
    if samples.len() != n + 1 {
        return Err(Error::InvalidArgument(format!(
            "expected {} samples, got {}",
            n + 1,
            samples.len()
        )));
    }
    for (index, (&value, &x)) in samples.iter().zip(&node_set.nodes).enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFiniteInput {
                what: "sample",
                index,
                at: x,
            });
        }
    }
    let mut coeffs = vec![0.0; n + 1];
    for ((&x, &w), &fx) in node_set.nodes.iter().zip(&node_set.weights).zip(samples) {
        let row = basis::psi_row(n, x);
        let scale = w * fx;
        for (a, p) in coeffs.iter_mut().zip(&row) {
            *a += scale * p;
        }
    }
    Ok(HermiteExpansion::new(coeffs))
}

/// Which point family the marked errors of an [`ErrorCurve`] sit on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Node,
    Tau,
    Eta,
}

impl PointKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PointKind::Node => "node",
            PointKind::Tau => "tau",
            PointKind::Eta => "eta",
        }
    }
}

/// Evaluation grid specification for error curves and sup estimates:
/// `points` samples on `[-(sqrt(2n+3) + pad), sqrt(2n+3) + pad]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub window_pad: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            points: 4000,
            window_pad: 2.0,
        }
    }
}

impl GridSpec {
    pub fn window(&self, n: usize) -> (f64, f64) {
        let half = (2.0 * n as f64 + 3.0).sqrt() + self.window_pad;
        (-half, half)
    }

    pub fn abscissae(&self, n: usize) -> Vec<f64> {
        let (lo, hi) = self.window(n);
        linspace(lo, hi, self.points)
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2);
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + step * i as f64).collect()
}

/// A sampled error curve `(f - h_n)^(m)` with the errors marked at the
/// superconvergence set matching the derivative order.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
    pub marked: Vec<(f64, f64)>,
    pub mark_kind: PointKind,
    pub sup_estimate: f64,
}

/// One entry of the superconvergence ratio series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEntry {
    pub n: usize,
    pub r1: f64,
    pub r2: f64,
    /// Set when the error is at rounding level and the ratios are 0/0.
    pub degenerate: bool,
}

/// The series `(n, R1, R2)` over a degree range.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSeries {
    pub entries: Vec<RatioEntry>,
}

/// Build the error curve of the `m`-th derivative of the interpolant of
/// `f` at degree `n`. Marked points: the nodes for `m = 0`, the tau set
/// for `m = 1`, the eta set for `m = 2`.
pub fn error_curve(f: &dyn RealFunction, m: u32, n: usize, grid: &GridSpec) -> Result<ErrorCurve> {
    if m > 2 {
        return Err(Error::InvalidArgument(format!(
            "error curves support derivative orders 0..=2, got {m}"
        )));
    }
    if f.derivative(m, 0.0).is_none() {
        return Err(Error::MissingDerivative { order: m });
    }

    let node_set = nodes::gauss_hermite_nodes(n)?;
    let samples: Vec<f64> = node_set.nodes.iter().map(|&x| f.value(x)).collect();
    let mut h = interpolate_samples(&node_set, &samples)?;
    for _ in 0..m {
        h = h.differentiate();
    }

    let exact = |x: f64| f.derivative(m, x).expect("derivative availability checked");
    let abscissae = grid.abscissae(n);
    let values: Vec<f64> = abscissae.iter().map(|&x| exact(x) - h.evaluate(x)).collect();
    let sup_estimate = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));

    let (points, mark_kind) = match m {
        0 => (node_set.nodes.clone(), PointKind::Node),
        1 => (nodes::tau_points_from(&node_set)?, PointKind::Tau),
        _ => (nodes::eta_points_from(&node_set)?, PointKind::Eta),
    };
    let marked = points
        .into_iter()
        .map(|x| (x, exact(x) - h.evaluate(x)))
        .collect();

    Ok(ErrorCurve {
        abscissae,
        values,
        marked,
        mark_kind,
        sup_estimate,
    })
}

/// Superconvergence ratios `R1(n)`, `R2(n)` over an inclusive degree
/// range. Degrees are independent and evaluated in parallel.
pub fn ratio_series(
    f: &(dyn RealFunction + Sync),
    n_min: usize,
    n_max: usize,
    grid: &GridSpec,
) -> Result<RatioSeries> {
    if n_min > n_max {
        return Err(Error::InvalidArgument(format!(
            "empty degree range {n_min}..={n_max}"
        )));
    }
    for order in [1u32, 2] {
        if f.derivative(order, 0.0).is_none() {
            return Err(Error::MissingDerivative { order });
        }
    }
    let entries: Vec<Result<RatioEntry>> = (n_min..=n_max)
        .into_par_iter()
        .map(|n| ratio_entry(f, n, grid))
        .collect();
    Ok(RatioSeries {
        entries: entries.into_iter().collect::<Result<Vec<_>>>()?,
    })
}

fn ratio_entry(f: &dyn RealFunction, n: usize, grid: &GridSpec) -> Result<RatioEntry> {
    let node_set = nodes::gauss_hermite_nodes(n)?;
    let samples: Vec<f64> = node_set.nodes.iter().map(|&x| f.value(x)).collect();
    let h = interpolate_samples(&node_set, &samples)?;
    let d1 = h.differentiate();
    let d2 = d1.differentiate();

    let abscissae = grid.abscissae(n);
    let mut sup1 = 0.0f64;
    let mut sup2 = 0.0f64;
    let mut scale1 = 0.0f64;
    let mut scale2 = 0.0f64;
    for &x in &abscissae {
        let f1 = f.derivative(1, x).expect("checked");
        let f2 = f.derivative(2, x).expect("checked");
        sup1 = sup1.max((f1 - d1.evaluate(x)).abs());
        sup2 = sup2.max((f2 - d2.evaluate(x)).abs());
        scale1 = scale1.max(f1.abs());
        scale2 = scale2.max(f2.abs());
    }

    let tau = nodes::tau_points_from(&node_set)?;
    let eta = nodes::eta_points_from(&node_set)?;
    let marked1 = tau
        .iter()
        .map(|&x| (f.derivative(1, x).expect("checked") - d1.evaluate(x)).abs())
        .fold(0.0f64, f64::max);
    let marked2 = eta
        .iter()
        .map(|&x| (f.derivative(2, x).expect("checked") - d2.evaluate(x)).abs())
        .fold(0.0f64, f64::max);

    // 0/0 guard: when the interpolant reproduces f to rounding level the
    // ratios carry no information; flag rather than drop the entry.
    let degenerate = sup1 <= 1e-13 * scale1.max(1.0) || sup2 <= 1e-13 * scale2.max(1.0);
    if degenerate {
        return Ok(RatioEntry {
            n,
            r1: f64::NAN,
            r2: f64::NAN,
            degenerate,
        });
    }
    Ok(RatioEntry {
        n,
        r1: marked1 / sup1,
        r2: marked2 / sup2,
        degenerate,
    })
}
