//! The experiment commands behind the CLI subcommands. Each one writes
//! CSV outputs plus a manifest and returns the manifest for printing.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use hermspec::basis::{self, NormConstants};
use hermspec::colloc::{self, CollocationProblem, Model};
use hermspec::functions::RealFunction;
use hermspec::interp::{self, GridSpec};
use hermspec::postprocess::{self, MergeSpec};
use hermspec::verify::{self, Suite};
use hermspec::{Builtin, Error};

use crate::manifest::{Parameters, Results, RunManifest};
use crate::output::{sig17, Csv};

/// Command-level failure: a library error or an output I/O error.
#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "output error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    /// Exit codes: 2 for argument/input problems, 3 for numerical
    /// failures. Verification failures exit 1 from the verify command.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(
                Error::InvalidArgument(_)
                | Error::Capability { .. }
                | Error::MissingDerivative { .. }
                | Error::NonFiniteInput { .. },
            ) => 2,
            CliError::Lib(_) => 3,
            CliError::Io(_) => 2,
        }
    }
}

pub type CmdResult = Result<RunManifest, CliError>;

fn finish(
    mut manifest: RunManifest,
    stem: &str,
    outputs: Vec<PathBuf>,
    results: Option<Results>,
    started: Instant,
    out_dir: &Path,
) -> CmdResult {
    manifest.outputs = outputs
        .iter()
        .map(|p| p.to_string_lossy().into_owned())
        .collect();
    manifest.results = results;
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    let path = out_dir.join(format!("{stem}.manifest.json"));
    manifest.write(&path)?;
    manifest.outputs.push(path.to_string_lossy().into_owned());
    Ok(manifest)
}

/// `psi-norms`: sup norms of `psi_n^(k)` and their scaled columns over a
/// degree range.
pub fn cmd_psi_norms(n_min: usize, n_max: usize, k_set: &[u32], out_dir: &Path) -> CmdResult {
    let started = Instant::now();
    if n_min < 1 || n_min > n_max {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n-min <= n-max, got {n_min}..={n_max}"
        ))
        .into());
    }
    for &k in k_set {
        if k > 3 {
            return Err(Error::InvalidArgument(format!(
                "psi-norms tabulates k in 0..=3, got {k}"
            ))
            .into());
        }
    }

    // (k, sup norm, scaled sup norm) per degree.
    type NormRow = Vec<(u32, f64, f64)>;
    let rows: Vec<(usize, NormRow)> = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let per_k = k_set
                .iter()
                .map(|&k| {
                    let sup = basis::sup_norm_estimate(n, k)?;
                    let scaled = sup * (n as f64).powf(-NormConstants::exponent(k));
                    Ok((k, sup, scaled))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok((n, per_k))
        })
        .collect::<Result<Vec<_>, Error>>()?;

    let mut csv = Csv::new("n,k,sup_norm,scaled");
    for (n, per_k) in &rows {
        for (k, sup, scaled) in per_k {
            csv.raw_row(&[&n.to_string(), &k.to_string(), &sig17(*sup), &sig17(*scaled)]);
        }
    }
    let path = out_dir.join("psi_norms.csv");
    csv.write(&path)?;

    let manifest = RunManifest::new(
        "psi-norms",
        Parameters {
            n_min: Some(n_min),
            n_max: Some(n_max),
            k_set: Some(k_set.to_vec()),
            ..Parameters::default()
        },
    );
    finish(manifest, "psi_norms", vec![path], None, started, out_dir)
}

/// `supercon`: derivative error curve of the interpolant with errors
/// marked at the matching superconvergence set.
pub fn cmd_supercon(
    function: &str,
    n: usize,
    order: u32,
    grid: GridSpec,
    out_dir: &Path,
) -> CmdResult {
    let started = Instant::now();
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidArgument(format!(
            "supercon marks derivative orders 1 or 2, got {order}"
        ))
        .into());
    }
    let f = Builtin::from_id(function)?;
    let curve = interp::error_curve(&f, order, n, &grid)?;

    let stem = format!("supercon_{function}_n{n}_m{order}");
    let mut curve_csv = Csv::new("x,error");
    for (&x, &e) in curve.abscissae.iter().zip(&curve.values) {
        curve_csv.row(&[x, e]);
    }
    let curve_path = out_dir.join(format!("{stem}_curve.csv"));
    curve_csv.write(&curve_path)?;

    let mut marks_csv = Csv::new("point,kind,error");
    for &(x, e) in &curve.marked {
        marks_csv.raw_row(&[&sig17(x), curve.mark_kind.as_str(), &sig17(e)]);
    }
    let marks_path = out_dir.join(format!("{stem}_marks.csv"));
    marks_csv.write(&marks_path)?;

    let max_marked = curve
        .marked
        .iter()
        .map(|(_, e)| e.abs())
        .fold(0.0f64, f64::max);
    let ratio = if curve.sup_estimate > 0.0 {
        Some(max_marked / curve.sup_estimate)
    } else {
        None
    };
    let manifest = RunManifest::new(
        "supercon",
        Parameters {
            function: Some(function.to_owned()),
            n: Some(n),
            derivative_order: Some(order),
            grid_points: Some(grid.points),
            window_pad: Some(grid.window_pad),
            ..Parameters::default()
        },
    );
    finish(
        manifest,
        &stem,
        vec![curve_path, marks_path],
        Some(Results {
            sup_error: Some(curve.sup_estimate),
            max_marked_error: Some(max_marked),
            marked_to_sup_ratio: ratio,
            ..Results::default()
        }),
        started,
        out_dir,
    )
}

/// `supercon --ratios`: the superconvergence ratio series over a degree
/// range.
pub fn cmd_ratios(
    function: &str,
    n_min: usize,
    n_max: usize,
    grid: GridSpec,
    out_dir: &Path,
) -> CmdResult {
    let started = Instant::now();
    let f = Builtin::from_id(function)?;
    let series = interp::ratio_series(&f, n_min, n_max, &grid)?;

    let mut csv = Csv::new("n,r1,r2,sqrt_n_r1,sqrt_n_r2");
    for entry in &series.entries {
        let root = (entry.n as f64).sqrt();
        csv.raw_row(&[
            &entry.n.to_string(),
            &sig17(entry.r1),
            &sig17(entry.r2),
            &sig17(root * entry.r1),
            &sig17(root * entry.r2),
        ]);
    }
    let stem = format!("ratios_{function}_n{n_min}-{n_max}");
    let path = out_dir.join(format!("{stem}.csv"));
    csv.write(&path)?;

    let manifest = RunManifest::new(
        "supercon",
        Parameters {
            function: Some(function.to_owned()),
            n_min: Some(n_min),
            n_max: Some(n_max),
            ratios: Some(true),
            grid_points: Some(grid.points),
            window_pad: Some(grid.window_pad),
            ..Parameters::default()
        },
    );
    finish(manifest, &stem, vec![path], None, started, out_dir)
}

fn manufactured_rhs(model: Model, alpha: f64, exact: Builtin) -> impl Fn(f64) -> f64 {
    move |x| {
        let second = exact
            .derivative(2, x)
            .expect("built-ins carry second derivatives");
        match model {
            Model::Model1 => second + (alpha - x * x) * exact.value(x),
            Model::Model2 => -second + alpha * exact.value(x),
        }
    }
}

/// `collocate`: solve a model with a manufactured right-hand side and
/// emit the error curve with node marks and the first-derivative error
/// with tau marks.
pub fn cmd_collocate(
    model: Model,
    alpha: f64,
    function: &str,
    n: usize,
    grid: GridSpec,
    out_dir: &Path,
) -> CmdResult {
    let started = Instant::now();
    let exact = Builtin::from_id(function)?;
    let solution = colloc::solve(&CollocationProblem {
        model,
        alpha,
        n,
        rhs: manufactured_rhs(model, alpha, exact),
    })?;
    let derivative = solution.expansion.differentiate();

    let stem = format!("collocate_{}_{function}_alpha{alpha}_n{n}", model.id());
    let mut curve_csv = Csv::new("x,error,error_d1");
    let mut sup_error = 0.0f64;
    for x in grid.abscissae(n) {
        let e0 = exact.value(x) - solution.expansion.evaluate(x);
        let e1 = exact.derivative(1, x).expect("built-in") - derivative.evaluate(x);
        sup_error = sup_error.max(e0.abs());
        curve_csv.row(&[x, e0, e1]);
    }
    let curve_path = out_dir.join(format!("{stem}_curve.csv"));
    curve_csv.write(&curve_path)?;

    let mut marks_csv = Csv::new("point,kind,error");
    let mut max_node_error = 0.0f64;
    for &x in &solution.nodes.nodes {
        let e = exact.value(x) - solution.expansion.evaluate(x);
        max_node_error = max_node_error.max(e.abs());
        marks_csv.raw_row(&[&sig17(x), "node", &sig17(e)]);
    }
    for &t in &hermspec::nodes::tau_points(n)? {
        let e = exact.derivative(1, t).expect("built-in") - derivative.evaluate(t);
        marks_csv.raw_row(&[&sig17(t), "tau", &sig17(e)]);
    }
    let marks_path = out_dir.join(format!("{stem}_marks.csv"));
    marks_csv.write(&marks_path)?;

    let manifest = RunManifest::new(
        "collocate",
        Parameters {
            model: Some(model.id().to_owned()),
            alpha: Some(alpha),
            function: Some(function.to_owned()),
            n: Some(n),
            grid_points: Some(grid.points),
            window_pad: Some(grid.window_pad),
            ..Parameters::default()
        },
    );
    finish(
        manifest,
        &stem,
        vec![curve_path, marks_path],
        Some(Results {
            condition: Some(solution.condition),
            residual: Some(solution.residual),
            sup_error: Some(sup_error),
            max_marked_error: Some(max_node_error),
            marked_to_sup_ratio: if sup_error > 0.0 {
                Some(max_node_error / sup_error)
            } else {
                None
            },
            ..Results::default()
        }),
        started,
        out_dir,
    )
}

/// `postprocess`: solve Model 2 at degrees `n` and `n + 1`, merge into
/// degree `m`, and emit the aligned error columns plus the
/// inside/outside-hull summary.
pub fn cmd_postprocess(
    alpha: f64,
    function: &str,
    n: usize,
    m: usize,
    grid: GridSpec,
    out_dir: &Path,
) -> CmdResult {
    let started = Instant::now();
    let exact = Builtin::from_id(function)?;
    let spec = MergeSpec::new(n, m)?;
    let rhs = manufactured_rhs(Model::Model2, alpha, exact);
    let first = colloc::solve(&CollocationProblem {
        model: Model::Model2,
        alpha,
        n,
        rhs: &rhs,
    })?;
    let second = colloc::solve(&CollocationProblem {
        model: Model::Model2,
        alpha,
        n: n + 1,
        rhs: &rhs,
    })?;
    let merged = postprocess::merge(&first, &second, &spec)?;

    let window = grid.window(n + 1);
    let mut csv = Csv::new("x,err_u_n,err_u_n1,err_phi");
    for x in interp_linspace(window, grid.points) {
        csv.row(&[
            x,
            exact.value(x) - first.expansion.evaluate(x),
            exact.value(x) - second.expansion.evaluate(x),
            exact.value(x) - merged.phi.evaluate(x),
        ]);
    }
    let stem = format!("postprocess_{function}_alpha{alpha}_n{n}_m{m}");
    let path = out_dir.join(format!("{stem}.csv"));
    csv.write(&path)?;

    let report = postprocess::windowed_error_report(
        &merged,
        |x| exact.value(x),
        window,
        grid.points,
    );
    let manifest = RunManifest::new(
        "postprocess",
        Parameters {
            alpha: Some(alpha),
            function: Some(function.to_owned()),
            model: Some(Model::Model2.id().to_owned()),
            n: Some(n),
            m: Some(m),
            grid_points: Some(grid.points),
            window_pad: Some(grid.window_pad),
            ..Parameters::default()
        },
    );
    finish(
        manifest,
        &stem,
        vec![path],
        Some(Results {
            condition: Some(first.condition),
            residual: Some(first.residual),
            condition_second: Some(second.condition),
            residual_second: Some(second.residual),
            inside_hull_sup: Some(report.inside_sup),
            outside_hull_sup: Some(report.outside_sup),
            merge_residual_norm: Some(merged.residual_norm),
            ..Results::default()
        }),
        started,
        out_dir,
    )
}

fn interp_linspace((lo, hi): (f64, f64), points: usize) -> Vec<f64> {
    let count = points.max(2);
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + step * i as f64).collect()
}

/// `verify`: run a suite and produce the machine-readable report.
pub fn cmd_verify(suite: Suite, seed: u64) -> (String, bool) {
    let reports = verify::run_suite(suite, seed);
    let passed = reports.iter().all(|r| r.passed());
    let json = serde_json::json!({
        "command": "verify",
        "suite": suite.id(),
        "seed": seed,
        "passed": passed,
        "version": env!("CARGO_PKG_VERSION"),
        "suites": reports.iter().map(|r| {
            serde_json::json!({
                "suite": r.suite,
                "passed": r.passed(),
                "elapsed_seconds": r.elapsed_seconds,
                "checks": r.checks.iter().map(|c| {
                    serde_json::json!({
                        "name": c.name,
                        "passed": c.passed,
                        "detail": c.detail,
                    })
                }).collect::<Vec<_>>(),
            })
        }).collect::<Vec<_>>(),
    });
    (
        serde_json::to_string_pretty(&json).expect("report serializes"),
        passed,
    )
}
