//! Hermite spectral collocation for two second-order models on the real
//! line, the second-derivative differentiation matrix of the cardinal
//! basis, and the exactness and spectrum diagnostics.
//!
//! Model 1: `u'' + (alpha - x^2) u = f` with `alpha != 1, 3, 5, ...`
//! Model 2: `-u'' + alpha u = f` with `alpha != -mu_j^2` (see
//! [`spectrum_check`]).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{self, NormConstants};
use crate::error::{Error, Result};
use crate::interp::{interpolate_samples, HermiteExpansion};
use crate::nodes::{self, NodeSet};
use crate::numkit::{self, DenseMatrix, LuFactors};

/// Condition-estimate threshold beyond which a collocation system is
/// reported unsolvable instead of silently returning garbage.
pub const CONDITION_LIMIT: f64 = 1e12;

/// The two boundary-value models on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// `u'' + (alpha - x^2) u = f`
    Model1,
    /// `-u'' + alpha u = f`
    Model2,
}

impl Model {
    pub fn id(self) -> &'static str {
        match self {
            Model::Model1 => "model1",
            Model::Model2 => "model2",
        }
    }

    pub fn from_id(id: &str) -> Result<Model> {
        match id {
            "model1" | "1" => Ok(Model::Model1),
            "model2" | "2" => Ok(Model::Model2),
            _ => Err(Error::InvalidArgument(format!(
                "unknown model {id:?}; expected model1 or model2"
            ))),
        }
    }

    /// Apply the model's differential operator to an expansion at a point.
    pub fn apply(
        self,
        alpha: f64,
        u: &HermiteExpansion,
        u_second: &HermiteExpansion,
        x: f64,
    ) -> f64 {
        match self {
            Model::Model1 => u_second.evaluate(x) + (alpha - x * x) * u.evaluate(x),
            Model::Model2 => -u_second.evaluate(x) + alpha * u.evaluate(x),
        }
    }

    /// Parameter admissibility that can be decided up front. Model 1
    /// degenerates exactly at the odd positive integers; Model 2 at the
    /// negated squared spectrum values, which the solver detects through
    /// its condition estimate instead.
    pub fn check_alpha(self, alpha: f64) -> Result<()> {
        if let Model::Model1 = self {
            let rem = (alpha - 1.0).rem_euclid(2.0);
            if alpha > 0.0 && !(1e-12..=2.0 - 1e-12).contains(&rem) {
                return Err(Error::InvalidArgument(format!(
                    "alpha = {alpha} is forbidden for model 1 (alpha != 1, 3, 5, ...)"
                )));
            }
        }
        Ok(())
    }
}

/// A collocation problem instance; `rhs` is sampled at the nodes.
#[derive(Debug, Clone)]
pub struct CollocationProblem<F: Fn(f64) -> f64> {
    pub model: Model,
    pub alpha: f64,
    pub n: usize,
    pub rhs: F,
}

/// The second-derivative differentiation matrix `D_ij = sigma_j''(x_i)`
/// of the cardinal functions at the Gauss-Hermite nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffMatrix {
    n: usize,
    matrix: DenseMatrix,
}

impl DiffMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }
}

/// Assemble the differentiation matrix from closed-form entries.
///
/// With `p = psi_(n+1)`, Taylor expansion of the cardinal function
/// `sigma_j = p / (p'(x_j) (x - x_j))` about the nodes gives
/// `D_jj = (x_j^2 - (2n+3)) / 3` (using `p''' = (x^2 - (2n+3)) p'` at a
/// node) and `D_ij = -2 p'(x_i) / (p'(x_j) (x_i - x_j)^2)` off the
/// diagonal, where `p''(x_i) = 0` kills the remaining term.
pub fn diff_matrix(node_set: &NodeSet) -> DiffMatrix {
    let n = node_set.n;
    let np1 = (n + 1) as f64;
    let slopes: Vec<f64> = node_set
        .nodes
        .iter()
        .map(|&x| {
            let row = basis::psi_row(n + 2, x);
            (np1 / 2.0).sqrt() * row[n] - ((np1 + 1.0) / 2.0).sqrt() * row[n + 2]
        })
        .collect();

    let freq = 2.0 * n as f64 + 3.0;
    let mut matrix = DenseMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        let xi = node_set.nodes[i];
        for j in 0..=n {
            matrix[(i, j)] = if i == j {
                (xi * xi - freq) / 3.0
            } else {
                let dx = xi - node_set.nodes[j];
                -2.0 * slopes[i] / (slopes[j] * dx * dx)
            };
        }
    }
    DiffMatrix { n, matrix }
}

/// A single entry `sigma_j''(x_i)` of the differentiation matrix.
pub fn cardinal_second_derivative(n: usize, i: usize, j: usize) -> Result<f64> {
    if i > n || j > n {
        return Err(Error::InvalidArgument(format!(
            "entry ({i}, {j}) outside the {}x{} differentiation matrix",
            n + 1,
            n + 1
        )));
    }
    let node_set = nodes::gauss_hermite_nodes(n)?;
    Ok(diff_matrix(&node_set).entry(i, j))
}

/// The cardinal function `sigma_j(x) = psi_(n+1)(x) / (psi'_(n+1)(x_j) (x - x_j))`.
pub fn cardinal_function(node_set: &NodeSet, j: usize, x: f64) -> f64 {
    let n = node_set.n;
    let xj = node_set.nodes[j];
    let np1 = (n + 1) as f64;
    let row = basis::psi_row(n + 2, xj);
    let slope = (np1 / 2.0).sqrt() * row[n] - ((np1 + 1.0) / 2.0).sqrt() * row[n + 2];
    if x == xj {
        return 1.0;
    }
    basis::psi(n + 1, x) / (slope * (x - xj))
}

/// A solved collocation problem.
#[derive(Debug, Clone)]
pub struct CollocationSolution {
    pub model: Model,
    pub alpha: f64,
    pub nodes: NodeSet,
    pub nodal_values: Vec<f64>,
    pub expansion: HermiteExpansion,
    /// Relative linear-system residual `||A u - f|| / ||f||`.
    pub residual: f64,
    /// One-norm condition estimate of the collocation matrix.
    pub condition: f64,
}

/// Solve a collocation problem by dense LU with partial pivoting.
pub fn solve<F: Fn(f64) -> f64>(problem: &CollocationProblem<F>) -> Result<CollocationSolution> {
    problem.model.check_alpha(problem.alpha)?;
    let node_set = nodes::gauss_hermite_nodes(problem.n)?;
    let d = diff_matrix(&node_set);

    let n = problem.n;
    let mut a = DenseMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        let xi = node_set.nodes[i];
        for j in 0..=n {
            a[(i, j)] = match problem.model {
                Model::Model1 => {
                    d.entry(i, j) + if i == j { problem.alpha - xi * xi } else { 0.0 }
                }
                Model::Model2 => -d.entry(i, j) + if i == j { problem.alpha } else { 0.0 },
            };
        }
    }

    let mut rhs = Vec::with_capacity(n + 1);
    for (index, &x) in node_set.nodes.iter().enumerate() {
        let value = (problem.rhs)(x);
        if !value.is_finite() {
            return Err(Error::NonFiniteInput {
                what: "right-hand side sample",
                index,
                at: x,
            });
        }
        rhs.push(value);
    }

    let factors = match LuFactors::factor(&a) {
        Ok(f) => f,
        Err(Error::SingularMatrix { .. }) => {
            return Err(Error::Solvability {
                condition: f64::INFINITY,
            })
        }
        Err(e) => return Err(e),
    };
    let condition = factors.condition_estimate();
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(Error::Solvability { condition });
    }

    let nodal_values = factors.solve(&rhs);
    let back = a.mul_vec(&nodal_values);
    let rhs_norm = numkit::norm2(&rhs).max(f64::MIN_POSITIVE);
    let defects: Vec<f64> = back.iter().zip(&rhs).map(|(p, q)| p - q).collect();
    let residual = numkit::norm2(&defects) / rhs_norm;

    let expansion = interpolate_samples(&node_set, &nodal_values)?;
    Ok(CollocationSolution {
        model: problem.model,
        alpha: problem.alpha,
        nodes: node_set,
        nodal_values,
        expansion,
        residual,
        condition,
    })
}

/// One check of an exactness report: worst absolute error and the
/// tolerance it is held against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactnessCheck {
    pub worst: f64,
    pub tolerance: f64,
}

impl ExactnessCheck {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

/// Result of manufacturing a random `u` in `H_(n+1)`, solving, and
/// checking that the defect is exactly the top mode.
#[derive(Debug, Clone)]
pub struct ExactnessReport {
    pub model: Model,
    pub alpha: f64,
    pub n: usize,
    pub seed: u64,
    pub top_coefficient: f64,
    /// `max_k |a_k - a_hat_k|` for `k <= n`.
    pub coefficients: ExactnessCheck,
    /// Error at the collocation nodes.
    pub nodes: ExactnessCheck,
    /// First-derivative error at the tau set.
    pub tau: ExactnessCheck,
    /// Second-derivative error at the eta set.
    pub eta: ExactnessCheck,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.coefficients.passed() && self.nodes.passed() && self.tau.passed() && self.eta.passed()
    }

    /// Description of the worst failing check, if any.
    pub fn worst_offender(&self) -> Option<String> {
        let mut worst: Option<(&str, f64, f64)> = None;
        for (name, check) in [
            ("coefficients", self.coefficients),
            ("node errors", self.nodes),
            ("tau derivative errors", self.tau),
            ("eta second-derivative errors", self.eta),
        ] {
            if !check.passed() {
                let ratio = check.worst / check.tolerance;
                if worst.is_none_or(|(_, _, r)| ratio > r) {
                    worst = Some((name, check.worst, ratio));
                }
            }
        }
        worst.map(|(name, value, _)| {
            format!(
                "{} for model {} alpha {} n {} seed {}: worst {value:e}",
                name,
                self.model.id(),
                self.alpha,
                self.n,
                self.seed
            )
        })
    }
}

/// Draw a random `u` in `H_(n+1)`, manufacture the right-hand side by
/// applying the model operator exactly, solve, and measure how far the
/// defect `u - u_n` is from the single mode `a_(n+1) psi_(n+1)`.
pub fn verify_exactness(model: Model, alpha: f64, n: usize, seed: u64) -> Result<ExactnessReport> {
    model.check_alpha(alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<f64> = (0..=n + 1).map(|_| rng.random_range(-1.0..1.0)).collect();
    let u = HermiteExpansion::new(coeffs.clone());
    let u_second = u.differentiate().differentiate();
    let top = coeffs[n + 1];

    let solution = solve(&CollocationProblem {
        model,
        alpha,
        n,
        rhs: |x| model.apply(alpha, &u, &u_second, x),
    })?;

    let coeff_err = solution
        .expansion
        .coeffs()
        .iter()
        .zip(&coeffs)
        .map(|(a_hat, a)| (a_hat - a).abs())
        .fold(0.0f64, f64::max);

    // Defect expansion e = u - u_n, padded to degree n + 1.
    let mut defect = coeffs.clone();
    for (k, a_hat) in solution.expansion.coeffs().iter().enumerate() {
        defect[k] -= a_hat;
    }
    let defect = HermiteExpansion::new(defect);
    let defect_d1 = defect.differentiate();
    let defect_d2 = defect_d1.differentiate();

    let worst_at = |points: &[f64], e: &HermiteExpansion| {
        points
            .iter()
            .map(|&x| e.evaluate(x).abs())
            .fold(0.0f64, f64::max)
    };
    let tau = nodes::tau_points_from(&solution.nodes)?;
    let eta = nodes::eta_points_from(&solution.nodes)?;

    let np1 = (n + 1) as f64;
    let amplitude = 1.0 + top.abs();
    let scale0 = NormConstants::constant(0) * np1.powf(-1.0 / 12.0);
    let scale1 = NormConstants::constant(1) * np1.powf(0.25);
    let scale2 = NormConstants::constant(2) * np1.powf(0.75);

    Ok(ExactnessReport {
        model,
        alpha,
        n,
        seed,
        top_coefficient: top,
        coefficients: ExactnessCheck {
            worst: coeff_err,
            tolerance: 1e-9,
        },
        nodes: ExactnessCheck {
            worst: worst_at(&solution.nodes.nodes, &defect),
            tolerance: 1e-9 * amplitude * scale0,
        },
        tau: ExactnessCheck {
            worst: worst_at(&tau, &defect_d1),
            tolerance: 1e-9 * amplitude * scale1,
        },
        eta: ExactnessCheck {
            worst: worst_at(&eta, &defect_d2),
            tolerance: 1e-9 * amplitude * scale2,
        },
    })
}

/// Spectrum diagnostics of the differentiation matrix against the
/// predicted eigenvalues `-mu_j^2`, where `mu_j` runs over the positive
/// zeros of `psi_(n+1)` and of `psi'_(n+1)`.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub n: usize,
    pub eigenvalues: Vec<numkit::Complex>,
    pub expected: Vec<f64>,
    pub max_relative_mismatch: f64,
    pub max_imaginary: f64,
    pub min_gap: f64,
    pub unmatched: Vec<(f64, f64)>,
}

impl SpectrumReport {
    pub fn passed(&self) -> bool {
        self.unmatched.is_empty()
            && self.max_relative_mismatch <= 1e-7
            && self.max_imaginary <= 1e-8
            && self.min_gap >= 1e-6
    }
}

/// Dense eigensolve of the differentiation matrix for `n <= 40`,
/// matched as a multiset against the root-derived prediction.
pub fn spectrum_check(n: usize) -> Result<SpectrumReport> {
    if n > 40 {
        return Err(Error::Capability {
            what: "spectrum check degree",
            requested: n,
            max: 40,
        });
    }
    let node_set = nodes::gauss_hermite_nodes(n)?;
    let d = diff_matrix(&node_set);
    let eigenvalues = numkit::dense_eigenvalues(d.matrix())?;

    let tau = nodes::tau_points_from(&node_set)?;
    let mut expected: Vec<f64> = node_set
        .nodes
        .iter()
        .chain(tau.iter())
        .filter(|&&x| x > 1e-12)
        .map(|&mu| -mu * mu)
        .collect();
    expected.sort_by(|a, b| a.partial_cmp(b).expect("finite"));

    let mut sorted = eigenvalues.clone();
    sorted.sort_by(|p, q| p.re.partial_cmp(&q.re).expect("finite"));
    if sorted.len() != expected.len() {
        return Err(Error::InvalidArgument(format!(
            "spectrum size mismatch: {} eigenvalues vs {} predictions",
            sorted.len(),
            expected.len()
        )));
    }

    let mut max_relative_mismatch = 0.0f64;
    let mut unmatched = Vec::new();
    for (lambda, &target) in sorted.iter().zip(&expected) {
        let rel = (lambda.re - target).abs() / target.abs();
        max_relative_mismatch = max_relative_mismatch.max(rel);
        if rel > 1e-7 {
            unmatched.push((lambda.re, target));
        }
    }

    let max_imaginary = sorted.iter().map(|c| c.im.abs()).fold(0.0f64, f64::max);
    let min_gap = sorted
        .windows(2)
        .map(|w| (w[1].re - w[0].re).abs())
        .fold(f64::INFINITY, f64::min);

    Ok(SpectrumReport {
        n,
        eigenvalues,
        expected,
        max_relative_mismatch,
        max_imaginary,
        min_gap,
        unmatched,
    })
}
