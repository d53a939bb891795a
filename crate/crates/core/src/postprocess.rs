//! Least-squares merge of two collocation solutions sampled at their
//! superconvergence node sets, producing a higher-accuracy expansion.

use crate::basis;
use crate::colloc::CollocationSolution;
use crate::error::{Error, Result};
use crate::interp::{linspace, HermiteExpansion};
use crate::numkit::{self, DenseMatrix};

/// Degrees of the merge: the first solution has degree `n`, the merged
/// expansion degree `m <= 2n + 1` so the stacked system stays
/// overdetermined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeSpec {
    pub n: usize,
    pub m: usize,
}

impl MergeSpec {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m > 2 * n + 1 {
            return Err(Error::InvalidArgument(format!(
                "merge degree m = {m} violates m <= 2n + 1 = {}",
                2 * n + 1
            )));
        }
        Ok(MergeSpec { n, m })
    }
}

/// The merged expansion with its least-squares diagnostics.
#[derive(Debug, Clone)]
pub struct MergeResult {
    pub phi: HermiteExpansion,
    /// Norm of the stacked residual vector.
    pub residual_norm: f64,
    /// `phi(x_j) - u_n(x_j)` at the first solution's nodes.
    pub residuals_first: Vec<f64>,
    /// `phi(y_j) - u_(n+1)(y_j)` at the second solution's nodes.
    pub residuals_second: Vec<f64>,
    /// Hull `[y_0, y_(n+1)]` of the second node set, inside which the
    /// merged solution is trustworthy.
    pub hull: (f64, f64),
}

/// Solve the stacked `(2n+3) x (m+1)` least-squares problem whose rows
/// are `psi_k` sampled at the zeros of `psi_(n+1)` and `psi_(n+2)` and
/// whose right-hand side holds the two solutions' nodal values.
pub fn merge(
    first: &CollocationSolution,
    second: &CollocationSolution,
    spec: &MergeSpec,
) -> Result<MergeResult> {
    if first.nodes.n != spec.n {
        return Err(Error::InvalidArgument(format!(
            "first solution has degree {}, expected n = {}",
            first.nodes.n, spec.n
        )));
    }
    if second.nodes.n != spec.n + 1 {
        return Err(Error::InvalidArgument(format!(
            "second solution has degree {}, expected n + 1 = {}",
            second.nodes.n,
            spec.n + 1
        )));
    }

    let m = spec.m;
    let rows = 2 * spec.n + 3;
    let mut design = DenseMatrix::zeros(rows, m + 1);
    let mut stacked = Vec::with_capacity(rows);
    for (offset, solution) in [(0usize, first), (spec.n + 1, second)] {
        for (j, (&x, &value)) in solution
            .nodes
            .nodes
            .iter()
            .zip(&solution.nodal_values)
            .enumerate()
        {
            let row = basis::psi_row(m, x);
            for k in 0..=m {
                design[(offset + j, k)] = row[k];
            }
            stacked.push(value);
        }
    }

    let fit = numkit::lstsq(&design, &stacked)?;
    if fit.rank < m + 1 {
        return Err(Error::RankDeficient {
            rank: fit.rank,
            columns: m + 1,
        });
    }

    let phi = HermiteExpansion::new(fit.solution);
    let residuals_first: Vec<f64> = first
        .nodes
        .nodes
        .iter()
        .zip(&first.nodal_values)
        .map(|(&x, &v)| phi.evaluate(x) - v)
        .collect();
    let residuals_second: Vec<f64> = second
        .nodes
        .nodes
        .iter()
        .zip(&second.nodal_values)
        .map(|(&y, &v)| phi.evaluate(y) - v)
        .collect();
    let residual_norm = numkit::norm2(
        &residuals_first
            .iter()
            .chain(&residuals_second)
            .copied()
            .collect::<Vec<_>>(),
    );

    let hull = (
        *second.nodes.nodes.first().expect("nonempty node set"),
        *second.nodes.nodes.last().expect("nonempty node set"),
    );
    Ok(MergeResult {
        phi,
        residual_norm,
        residuals_first,
        residuals_second,
        hull,
    })
}

/// Sup errors of the merged solution inside and outside the hull of the
/// second node set, measured against an exact solution on a dense grid
/// over `window`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowReport {
    pub inside_sup: f64,
    pub outside_sup: f64,
    pub hull: (f64, f64),
    pub window: (f64, f64),
}

pub fn windowed_error_report<F: Fn(f64) -> f64>(
    result: &MergeResult,
    exact: F,
    window: (f64, f64),
    points: usize,
) -> WindowReport {
    let (lo, hi) = window;
    let mut inside_sup = 0.0f64;
    let mut outside_sup = 0.0f64;
    for x in linspace(lo, hi, points.max(2)) {
        let err = (exact(x) - result.phi.evaluate(x)).abs();
        if x >= result.hull.0 && x <= result.hull.1 {
            inside_sup = inside_sup.max(err);
        } else {
            outside_sup = outside_sup.max(err);
        }
    }
    WindowReport {
        inside_sup,
        outside_sup,
        hull: result.hull,
        window,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colloc::{solve, CollocationProblem, Model};
    use crate::nodes;

    /// Fabricate a "solution" whose nodal values sample a given function,
    /// bypassing any solve. Only the node data matter to `merge`.
    fn sampled_solution<F: Fn(f64) -> f64>(n: usize, f: F) -> CollocationSolution {
        let node_set = nodes::gauss_hermite_nodes(n).unwrap();
        let nodal_values: Vec<f64> = node_set.nodes.iter().map(|&x| f(x)).collect();
        let expansion = crate::interp::interpolate_samples(&node_set, &nodal_values).unwrap();
        CollocationSolution {
            model: Model::Model2,
            alpha: 1.0,
            nodes: node_set,
            nodal_values,
            expansion,
            residual: 0.0,
            condition: 1.0,
        }
    }

    #[test]
    fn consistent_system_recovers_the_member() {
        // Both inputs sample a fixed expansion in H_m: exact recovery with
        // negligible residual.
        let n = 6;
        let m = 7;
        let mut coeffs = vec![0.0; m + 1];
        coeffs[0] = 0.3;
        coeffs[4] = -1.1;
        coeffs[7] = 0.8;
        let target = HermiteExpansion::new(coeffs.clone());
        let first = sampled_solution(n, |x| target.evaluate(x));
        let second = sampled_solution(n + 1, |x| target.evaluate(x));
        let spec = MergeSpec::new(n, m).unwrap();
        let out = merge(&first, &second, &spec).unwrap();
        for (a, b) in out.phi.coeffs().iter().zip(&coeffs) {
            assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
        assert!(out.residual_norm <= 1e-12);
    }

    #[test]
    fn same_degree_consistent_case() {
        // m = n with both solutions sampling the same g in H_n.
        let n = 5;
        let g = HermiteExpansion::new(vec![0.5, 0.0, -0.25, 0.0, 1.5, -0.75]);
        let first = sampled_solution(n, |x| g.evaluate(x));
        let second = sampled_solution(n + 1, |x| g.evaluate(x));
        let out = merge(&first, &second, &MergeSpec::new(n, n).unwrap()).unwrap();
        for (a, b) in out.phi.coeffs().iter().zip(g.coeffs()) {
            assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn merge_spec_bounds() {
        assert!(MergeSpec::new(5, 11).is_ok());
        assert!(MergeSpec::new(5, 12).is_err());
    }

    #[test]
    fn exact_recovery_has_tiny_window_errors() {
        let n = 6;
        let m = 7;
        let mut coeffs = vec![0.0; m + 1];
        coeffs[2] = 1.0;
        coeffs[6] = -0.5;
        let target = HermiteExpansion::new(coeffs);
        let first = sampled_solution(n, |x| target.evaluate(x));
        let second = sampled_solution(n + 1, |x| target.evaluate(x));
        let out = merge(&first, &second, &MergeSpec::new(n, m).unwrap()).unwrap();
        let window = (-6.0, 6.0);
        let report = windowed_error_report(&out, |x| target.evaluate(x), window, 2001);
        assert!(report.inside_sup <= 1e-10);
        assert!(report.outside_sup <= 1e-10);
    }

    #[test]
    fn first_order_optimality_of_the_fit() {
        // Perturbing any single coefficient must not decrease the stacked
        // residual norm.
        let n = 8;
        let alpha = 1.0;
        let exact = crate::functions::Builtin::TwinPeaks;
        let solve_at = |deg: usize| {
            solve(&CollocationProblem {
                model: Model::Model2,
                alpha,
                n: deg,
                rhs: |x| {
                    use crate::functions::RealFunction;
                    -exact.derivative(2, x).unwrap() + alpha * exact.value(x)
                },
            })
            .unwrap()
        };
        let first = solve_at(n);
        let second = solve_at(n + 1);
        let spec = MergeSpec::new(n, n + 1).unwrap();
        let out = merge(&first, &second, &spec).unwrap();

        let stacked_norm = |phi: &HermiteExpansion| {
            let mut sum = 0.0;
            for (&x, &v) in first.nodes.nodes.iter().zip(&first.nodal_values) {
                sum += (phi.evaluate(x) - v) * (phi.evaluate(x) - v);
            }
            for (&y, &v) in second.nodes.nodes.iter().zip(&second.nodal_values) {
                sum += (phi.evaluate(y) - v) * (phi.evaluate(y) - v);
            }
            sum.sqrt()
        };
        let base = stacked_norm(&out.phi);
        assert!((base - out.residual_norm).abs() <= 1e-12);

        let mut state = 77u64;
        for _ in 0..20 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let coord = (state >> 8) as usize % out.phi.coeffs().len();
            for sign in [-1.0, 1.0] {
                let mut perturbed = out.phi.coeffs().to_vec();
                perturbed[coord] += sign * 1e-6;
                let norm = stacked_norm(&HermiteExpansion::new(perturbed));
                assert!(
                    norm >= base - 1e-12,
                    "perturbing coefficient {coord} by {sign}e-6 lowered the residual"
                );
            }
        }
    }

    #[test]
    fn symmetric_problems_give_symmetric_error_curves() {
        // An even exact solution through the fully symmetric pipeline
        // (nodes, weights, operator, least squares) keeps the merged
        // error curve mirror-symmetric. Oracle: mirrored evaluation.
        let n = 12;
        let alpha = 1.0;
        let exact = crate::functions::Builtin::TwinPeaks;
        let rhs = |x: f64| {
            use crate::functions::RealFunction;
            -exact.derivative(2, x).unwrap() + alpha * exact.value(x)
        };
        let first = solve(&CollocationProblem {
            model: Model::Model2,
            alpha,
            n,
            rhs,
        })
        .unwrap();
        let second = solve(&CollocationProblem {
            model: Model::Model2,
            alpha,
            n: n + 1,
            rhs,
        })
        .unwrap();
        let out = merge(&first, &second, &MergeSpec::new(n, n + 1).unwrap()).unwrap();
        use crate::functions::RealFunction;
        for i in 0..300 {
            let x = 7.0 * (i as f64 + 1.0) / 300.0;
            let plus = exact.value(x) - out.phi.evaluate(x);
            let minus = exact.value(-x) - out.phi.evaluate(-x);
            assert!(
                (plus - minus).abs() <= 1e-9,
                "asymmetry {:e} at x = {x}",
                (plus - minus).abs()
            );
        }
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let first = sampled_solution(4, |x| (-x * x).exp());
        let second = sampled_solution(6, |x| (-x * x).exp());
        let err = merge(&first, &second, &MergeSpec::new(4, 5).unwrap()).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }
}
