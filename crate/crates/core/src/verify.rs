//! Runnable verification suites covering each module's invariants.
//!
//! Each suite returns machine-checkable outcomes; the CLI surfaces them
//! as a report with a nonzero exit on any failure.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{self, NormConstants};
use crate::colloc::{self, Model};
use crate::error::{Error, Result};
use crate::functions::{Builtin, RealFunction};
use crate::interp::{self, GridSpec, HermiteExpansion};
use crate::nodes;
use crate::postprocess::{self, MergeSpec};

/// The named verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Basis,
    Nodes,
    Interp,
    Colloc,
    Post,
    All,
}

impl Suite {
    pub fn id(self) -> &'static str {
        match self {
            Suite::Basis => "basis",
            Suite::Nodes => "nodes",
            Suite::Interp => "interp",
            Suite::Colloc => "colloc",
            Suite::Post => "post",
            Suite::All => "all",
        }
    }

    pub fn from_id(id: &str) -> Result<Suite> {
        match id {
            "basis" => Ok(Suite::Basis),
            "nodes" => Ok(Suite::Nodes),
            "interp" => Ok(Suite::Interp),
            "colloc" => Ok(Suite::Colloc),
            "post" => Ok(Suite::Post),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidArgument(format!(
                "unknown suite {id:?}; expected basis, nodes, interp, colloc, post, or all"
            ))),
        }
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// All outcomes of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<CheckOutcome>,
    pub elapsed_seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Run the requested suite (or all of them) with a deterministic seed.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<SuiteReport> {
    match suite {
        Suite::Basis => vec![basis_suite(seed)],
        Suite::Nodes => vec![nodes_suite()],
        Suite::Interp => vec![interp_suite(seed)],
        Suite::Colloc => vec![colloc_suite(seed)],
        Suite::Post => vec![post_suite()],
        Suite::All => vec![
            basis_suite(seed),
            nodes_suite(),
            interp_suite(seed),
            colloc_suite(seed),
            post_suite(),
        ],
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed,
        detail,
    }
}

fn timed(suite: &'static str, checks: Vec<CheckOutcome>, start: Instant) -> SuiteReport {
    SuiteReport {
        suite,
        checks,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    }
}

fn basis_suite(seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    // Ladder consistency of the first derivative.
    let mut worst = 0.0f64;
    for n in 1..=40usize {
        for _ in 0..100 {
            let x: f64 = rng.random_range(-10.0..10.0);
            let row = basis::psi_row(n + 1, x);
            let ladder = (n as f64 / 2.0).sqrt() * row[n - 1]
                - ((n as f64 + 1.0) / 2.0).sqrt() * row[n + 1];
            worst = worst.max((basis::psi_derivative(n, 1, x) - ladder).abs());
        }
    }
    checks.push(check(
        "ladder consistency of the first derivative",
        worst <= 1e-12,
        format!("worst defect {worst:.3e}, tolerance 1e-12"),
    ));

    // Harmonic-oscillator identity.
    let mut pass = true;
    let mut detail = String::new();
    for n in 0..=40usize {
        let bound = 1e-9 * (2.0 * n as f64 + 1.0);
        for i in 0..200 {
            let x = -10.0 + 20.0 * i as f64 / 199.0;
            let defect = -basis::psi_derivative(n, 2, x) + x * x * basis::psi(n, x)
                - (2.0 * n as f64 + 1.0) * basis::psi(n, x);
            if defect.abs() > bound {
                pass = false;
                detail = format!("n={n} x={x}: defect {:.3e} > {bound:.3e}", defect.abs());
            }
        }
    }
    checks.push(check(
        "harmonic-oscillator identity",
        pass,
        if pass { "all degrees <= 40 pass".into() } else { detail },
    ));

    // Cross-check against raw Hermite polynomials.
    let mut pass = true;
    let mut worst_rel = 0.0f64;
    for n in 0..=30usize {
        let mut gamma = std::f64::consts::PI.sqrt();
        for m in 1..=n {
            gamma *= 2.0 * m as f64;
        }
        for i in 0..80 {
            let x = -7.0 + 14.0 * i as f64 / 79.0;
            let h = basis::eval_hermite_poly(n, &[x]).expect("degree within cap")[0];
            let reference = (-0.5 * x * x).exp() * h / gamma.sqrt();
            let value = basis::psi(n, x);
            if value.abs() > 1e-8 {
                let rel = ((value - reference) / reference).abs();
                worst_rel = worst_rel.max(rel);
                if rel > 1e-11 {
                    pass = false;
                }
            }
        }
    }
    checks.push(check(
        "cross-check against H_n / sqrt(gamma_n)",
        pass,
        format!("worst relative defect {worst_rel:.3e}, tolerance 1e-11"),
    ));

    // Sharpness of the sup-norm bounds for 1 <= n <= 200.
    let mut pass = true;
    let mut detail = String::new();
    for k in 0..=3u32 {
        let constant = NormConstants::constant(k);
        for n in 1..=200usize {
            let scaled = basis::sup_norm_estimate(n, k).expect("within caps")
                * (n as f64).powf(-NormConstants::exponent(k));
            if scaled > constant * (1.0 + 1e-9) {
                pass = false;
                detail = format!("k={k} n={n}: scaled {scaled:.15} exceeds C{k} {constant:.15}");
            }
        }
    }
    checks.push(check(
        "sup-norm bound sharpness over n <= 200",
        pass,
        if pass { "scaled norms never exceed the optimal constants".into() } else { detail },
    ));

    // Symmetry at mirrored points.
    let mut pass = true;
    for n in [0usize, 1, 2, 7, 33, 150] {
        for i in 0..100 {
            let x = 0.07 * (i as f64 + 1.0);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            if basis::psi(n, -x) != sign * basis::psi(n, x) {
                pass = false;
            }
        }
    }
    checks.push(check(
        "mirror symmetry psi_n(-x) = (-1)^n psi_n(x)",
        pass,
        "bit-exact at mirrored grid points".into(),
    ));

    timed("basis", checks, start)
}

fn nodes_suite() -> SuiteReport {
    let start = Instant::now();
    let mut checks = Vec::new();

    // Discrete orthogonality up to degree 60.
    let mut worst = 0.0f64;
    for n in 0..=60usize {
        let set = nodes::gauss_hermite_nodes(n).expect("within caps");
        let rows: Vec<Vec<f64>> = set.nodes.iter().map(|&x| basis::psi_row(n, x)).collect();
        for k in 0..=n {
            for l in k..=n {
                let sum: f64 = (0..=n).map(|j| set.weights[j] * rows[j][k] * rows[j][l]).sum();
                let target = if k == l { 1.0 } else { 0.0 };
                worst = worst.max((sum - target).abs());
            }
        }
    }
    checks.push(check(
        "discrete orthogonality (n <= 60)",
        worst <= 1e-10,
        format!("worst defect {worst:.3e}, tolerance 1e-10"),
    ));

    // Exact-sum sanity at n = 1.
    let set = nodes::gauss_hermite_nodes(1).expect("within caps");
    let mut worst = 0.0f64;
    for (&x, &w) in set.nodes.iter().zip(&set.weights) {
        worst = worst.max((w * basis::psi(0, x) * basis::psi(0, x) - 0.5).abs());
    }
    checks.push(check(
        "exact-sum sanity at n = 1",
        worst <= 1e-14,
        format!("worst defect {worst:.3e}"),
    ));

    // Interlacing of tau with the nodes.
    let mut pass = true;
    for n in [1usize, 2, 3, 5, 8, 13, 21, 40, 80, 120, 160, 200] {
        let set = nodes::gauss_hermite_nodes(n).expect("within caps");
        let tau = nodes::tau_points(n).expect("bracketing succeeds");
        pass &= tau[0] < set.nodes[0] && tau[n + 1] > set.nodes[n];
        for j in 0..n {
            pass &= set.nodes[j] < tau[j + 1] && tau[j + 1] < set.nodes[j + 1];
        }
    }
    checks.push(check(
        "tau interlaces the nodes",
        pass,
        "x_j < tau_{j+1} < x_{j+1} with one point beyond each end".into(),
    ));

    // Eta identity residual (the constructor verifies <= 1e-10).
    let mut pass = true;
    for n in 1..=100usize {
        if nodes::eta_points(n).is_err() {
            pass = false;
        }
    }
    checks.push(check(
        "eta identity residual (n <= 100)",
        pass,
        "|psi''_{n+1}(eta_j)| <= 1e-10 via the ladder evaluation".into(),
    ));

    // Node residuals for n <= 200.
    let mut worst = 0.0f64;
    for n in 0..=200usize {
        let set = nodes::gauss_hermite_nodes(n).expect("within caps");
        for &x in &set.nodes {
            worst = worst.max(basis::psi(n + 1, x).abs());
        }
    }
    checks.push(check(
        "node residuals (n <= 200)",
        worst <= 1e-13,
        format!("worst |psi_{{n+1}}(x_j)| = {worst:.3e}, tolerance 1e-13"),
    ));

    timed("nodes", checks, start)
}

fn interp_suite(seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut checks = Vec::new();

    // Reproduction of H_n members.
    let mut pass = true;
    let mut worst_ratio = 0.0f64;
    for n in [1usize, 2, 3, 5, 8, 13, 21, 34, 55, 60] {
        for _ in 0..5 {
            let coeffs: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
            let g = HermiteExpansion::new(coeffs);
            let h = interp::interpolate(|x| g.evaluate(x), n).expect("finite samples");
            let (lo, hi) = GridSpec::default().window(n);
            let mut sup = 0.0f64;
            for i in 0..1000 {
                let x = lo + (hi - lo) * i as f64 / 999.0;
                sup = sup.max((g.evaluate(x) - h.evaluate(x)).abs());
            }
            worst_ratio = worst_ratio.max(sup / norm);
            pass &= sup <= 1e-10 * norm;
        }
    }
    checks.push(check(
        "reproduction of random members of H_n (n <= 60)",
        pass,
        format!("worst sup/coeff-norm ratio {worst_ratio:.3e}, tolerance 1e-10"),
    ));

    // Interpolation condition for a general function.
    let mut pass = true;
    for n in [5usize, 10, 20, 40] {
        let set = nodes::gauss_hermite_nodes(n).expect("within caps");
        let f = |x: f64| Builtin::Pole.value(x);
        let h = interp::interpolate(f, n).expect("finite samples");
        let scale = set.nodes.iter().map(|&x| f(x).abs()).fold(0.0f64, f64::max);
        for &x in &set.nodes {
            pass &= (h.evaluate(x) - f(x)).abs() <= 1e-10 * scale;
        }
    }
    checks.push(check(
        "interpolation condition at the nodes (n <= 40)",
        pass,
        "defect <= 1e-10 * max |f(x_j)|".into(),
    ));

    // Degree bookkeeping of differentiation.
    let mut pass = true;
    for n in [0usize, 3, 17] {
        let e = HermiteExpansion::new(vec![1.0; n + 1]);
        pass &= e.differentiate().degree() == n + 1;
    }
    checks.push(check(
        "derivative-degree bookkeeping",
        pass,
        "differentiate maps degree N to N + 1".into(),
    ));

    // Linearity of the discrete transform.
    let f = |x: f64| Builtin::Pole.value(x);
    let g = |x: f64| Builtin::Wavepacket.value(x);
    let (alpha, beta) = (1.3, -0.4);
    let n = 24;
    let hf = interp::interpolate(f, n).expect("finite");
    let hg = interp::interpolate(g, n).expect("finite");
    let hc = interp::interpolate(|x| alpha * f(x) + beta * g(x), n).expect("finite");
    let mut worst = 0.0f64;
    for k in 0..=n {
        worst = worst.max((hc.coeffs()[k] - alpha * hf.coeffs()[k] - beta * hg.coeffs()[k]).abs());
    }
    checks.push(check(
        "linearity of interpolation",
        worst <= 1e-12,
        format!("worst coefficient defect {worst:.3e}"),
    ));

    // Exponential decay rate for the pole function.
    let slope = decay_slope().expect("curves computable");
    checks.push(check(
        "decay rate of log sup-error vs sqrt(2n)",
        (-1.2..=-0.8).contains(&slope),
        format!("fitted slope {slope:.4}, expected within [-1.2, -0.8]"),
    ));

    timed("interp", checks, start)
}

/// Least-squares slope of `ln ||f - h_n||_inf` against `sqrt(2n)` for the
/// pole function over `n = 20, 30, ..., 120`.
pub fn decay_slope() -> Result<f64> {
    let grid = GridSpec::default();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for step in 0..=10usize {
        let n = 20 + 10 * step;
        let curve = interp::error_curve(&Builtin::Pole, 0, n, &grid)?;
        xs.push((2.0 * n as f64).sqrt());
        ys.push(curve.sup_estimate.ln());
    }
    let count = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    Ok((count * sxy - sx * sy) / (count * sxx - sx * sx))
}

fn colloc_suite(seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut checks = Vec::new();

    // Exactness of the defect across seeds, degrees, and models.
    let mut pass = true;
    let mut detail = String::from("all exactness reports pass");
    'outer: for model in [Model::Model1, Model::Model2] {
        let alpha = match model {
            Model::Model1 => 0.5,
            Model::Model2 => 2.0,
        };
        for n in [4usize, 8, 16, 32] {
            for offset in 0..20u64 {
                match colloc::verify_exactness(model, alpha, n, seed.wrapping_add(offset)) {
                    Ok(report) if report.passed() => {}
                    Ok(report) => {
                        pass = false;
                        detail = report.worst_offender().unwrap_or_default();
                        break 'outer;
                    }
                    Err(e) => {
                        pass = false;
                        detail = e.to_string();
                        break 'outer;
                    }
                }
            }
        }
    }
    checks.push(check("exactness on H_(n+1) (20 seeds, both models)", pass, detail));

    // Collocation derivative exactness on the basis.
    let mut worst = 0.0f64;
    for n in 1..=40usize {
        let set = nodes::gauss_hermite_nodes(n).expect("within caps");
        let d = colloc::diff_matrix(&set);
        for k in 0..=n {
            let samples: Vec<f64> = set.nodes.iter().map(|&x| basis::psi(k, x)).collect();
            let second = d.matrix().mul_vec(&samples);
            for (i, &x) in set.nodes.iter().enumerate() {
                let target = (x * x - (2.0 * k as f64 + 1.0)) * basis::psi(k, x);
                worst = worst.max((second[i] - target).abs());
            }
        }
    }
    checks.push(check(
        "differentiation matrix exact on H_n (n <= 40)",
        worst <= 1e-8,
        format!("worst defect {worst:.3e}, tolerance 1e-8"),
    ));

    // Spectrum structure for n <= 25.
    let mut pass = true;
    let mut detail = String::from("eigenvalues match -mu_j^2, real and distinct");
    for n in 1..=25usize {
        match colloc::spectrum_check(n) {
            Ok(report) if report.passed() => {}
            Ok(report) => {
                pass = false;
                detail = format!(
                    "n={n}: rel mismatch {:.3e}, imag {:.3e}, gap {:.3e}",
                    report.max_relative_mismatch, report.max_imaginary, report.min_gap
                );
            }
            Err(e) => {
                pass = false;
                detail = e.to_string();
            }
        }
    }
    checks.push(check("spectrum structure (n <= 25)", pass, detail));

    // Linear-system residuals for the shipped figure configurations.
    let mut worst = 0.0f64;
    for (model, alpha, exact) in [
        (Model::Model1, 0.5, Builtin::Pole2),
        (Model::Model2, 2.0, Builtin::GaussLog),
    ] {
        let solution = colloc::solve(&colloc::CollocationProblem {
            model,
            alpha,
            n: 45,
            rhs: |x| match model {
                Model::Model1 => exact.derivative(2, x).unwrap() + (alpha - x * x) * exact.value(x),
                Model::Model2 => -exact.derivative(2, x).unwrap() + alpha * exact.value(x),
            },
        })
        .expect("admissible configuration");
        worst = worst.max(solution.residual);
    }
    checks.push(check(
        "linear-system residuals of the shipped examples",
        worst <= 1e-9,
        format!("worst relative residual {worst:.3e}"),
    ));

    timed("colloc", checks, start)
}

fn post_suite() -> SuiteReport {
    let start = Instant::now();
    let mut checks = Vec::new();

    // Consistent overdetermined systems have negligible residual.
    let n = 6;
    let m = 7;
    let mut coeffs = vec![0.0; m + 1];
    coeffs[1] = 0.9;
    coeffs[5] = -0.2;
    coeffs[7] = 0.6;
    let target = HermiteExpansion::new(coeffs);
    let sample = |deg: usize| {
        let set = nodes::gauss_hermite_nodes(deg).expect("within caps");
        let values: Vec<f64> = set.nodes.iter().map(|&x| target.evaluate(x)).collect();
        let expansion = interp::interpolate_samples(&set, &values).expect("finite");
        colloc::CollocationSolution {
            model: Model::Model2,
            alpha: 1.0,
            nodes: set,
            nodal_values: values,
            expansion,
            residual: 0.0,
            condition: 1.0,
        }
    };
    let merged = postprocess::merge(
        &sample(n),
        &sample(n + 1),
        &MergeSpec::new(n, m).expect("m <= 2n+1"),
    )
    .expect("full rank");
    checks.push(check(
        "consistency residual",
        merged.residual_norm <= 1e-12,
        format!("stacked residual {:.3e}", merged.residual_norm),
    ));

    // Reduced-scale improvement and windowing behaviour.
    match section5_reduced(40) {
        Ok(summary) => {
            checks.push(check(
                "reduced-scale improvement (n = 40, m = 41)",
                summary.improved,
                format!(
                    "phi inside-hull sup {:.3e} vs inputs ({:.3e}, {:.3e})",
                    summary.phi_inside_sup, summary.first_sup, summary.second_sup
                ),
            ));
            checks.push(check(
                "outside-hull deterioration (n = 40, m = 51)",
                summary.deteriorates_outside,
                format!(
                    "m = 51: inside {:.3e}, outside {:.3e}",
                    summary.wide_inside_sup, summary.wide_outside_sup
                ),
            ));
        }
        Err(e) => {
            checks.push(check("reduced-scale improvement (n = 40, m = 41)", false, e.to_string()));
        }
    }

    timed("post", checks, start)
}

/// Outcome of the reduced-scale merge experiment used by the post
/// suite and the acceptance gate.
#[derive(Debug, Clone, Copy)]
pub struct Section5Summary {
    pub first_sup: f64,
    pub second_sup: f64,
    pub phi_inside_sup: f64,
    pub improved: bool,
    pub wide_inside_sup: f64,
    pub wide_outside_sup: f64,
    pub deteriorates_outside: bool,
}

/// Run the postprocessing experiment at degree `n` with `m = n + 1`
/// (improvement) and `m = n + 11` (outside-hull deterioration).
pub fn section5_reduced(n: usize) -> Result<Section5Summary> {
    let alpha = 1.0;
    let exact = Builtin::TwinPeaks;
    let rhs = |x: f64| -exact.derivative(2, x).expect("order 2") + alpha * exact.value(x);
    let first = colloc::solve(&colloc::CollocationProblem {
        model: Model::Model2,
        alpha,
        n,
        rhs,
    })?;
    let second = colloc::solve(&colloc::CollocationProblem {
        model: Model::Model2,
        alpha,
        n: n + 1,
        rhs,
    })?;

    let window = GridSpec::default().window(n + 1);
    let points = 4000;
    let sup_of = |sol: &colloc::CollocationSolution| {
        let mut sup = 0.0f64;
        for x in interp::linspace(window.0, window.1, points) {
            sup = sup.max((exact.value(x) - sol.expansion.evaluate(x)).abs());
        }
        sup
    };
    let first_sup = sup_of(&first);
    let second_sup = sup_of(&second);

    let merged = postprocess::merge(&first, &second, &MergeSpec::new(n, n + 1)?)?;
    let narrow = postprocess::windowed_error_report(&merged, |x| exact.value(x), window, points);

    let wide_merge = postprocess::merge(&first, &second, &MergeSpec::new(n, n + 11)?)?;
    let wide = postprocess::windowed_error_report(&wide_merge, |x| exact.value(x), window, points);

    Ok(Section5Summary {
        first_sup,
        second_sup,
        phi_inside_sup: narrow.inside_sup,
        improved: narrow.inside_sup <= first_sup.min(second_sup),
        wide_inside_sup: wide.inside_sup,
        wide_outside_sup: wide.outside_sup,
        deteriorates_outside: wide.outside_sup > wide.inside_sup,
    })
}
