//! Frozen numerical baselines. The exact values were produced by this
//! implementation on its first verified run and guard against silent
//! drift; bands are wide enough for cross-platform libm differences.

use hermspec::colloc::{self, CollocationProblem, Model};
use hermspec::functions::RealFunction;
use hermspec::interp::{self, GridSpec};
use hermspec::verify;
use hermspec::Builtin;

#[test]
fn pole_ratio_baseline_at_n_100() {
    let series = interp::ratio_series(&Builtin::Pole, 100, 100, &GridSpec::default()).unwrap();
    let entry = series.entries[0];
    assert!(!entry.degenerate);
    let r1_baseline = 0.13624662215763447;
    let r2_baseline = 0.280_531_007_944_958_9;
    assert!(
        ((entry.r1 - r1_baseline) / r1_baseline).abs() <= 1e-6,
        "R1(100) drifted: {} vs {}",
        entry.r1,
        r1_baseline
    );
    assert!(
        ((entry.r2 - r2_baseline) / r2_baseline).abs() <= 1e-6,
        "R2(100) drifted: {} vs {}",
        entry.r2,
        r2_baseline
    );
}

#[test]
fn reduced_scale_postprocess_baselines() {
    let summary = verify::section5_reduced(40).unwrap();
    assert!(summary.improved);
    assert!(summary.deteriorates_outside);

    let in_band = |value: f64, baseline: f64| value >= baseline / 1.5 && value <= baseline * 1.5;
    assert!(
        in_band(summary.phi_inside_sup, 5.460545924030558e-3),
        "m=41 inside-hull sup drifted: {:e}",
        summary.phi_inside_sup
    );
    assert!(
        in_band(summary.wide_inside_sup, 2.970499694791018e-3),
        "m=51 inside-hull sup drifted: {:e}",
        summary.wide_inside_sup
    );
    assert!(
        in_band(summary.wide_outside_sup, 4.8606455627769704e-2),
        "m=51 outside-hull sup drifted: {:e}",
        summary.wide_outside_sup
    );
}

#[test]
fn full_scale_postprocess_improves_inside_the_hull() {
    // n = 90 with m = 91 and m = 101: the merged solution beats both
    // inputs inside the hull; raising m improves the hull interior
    // further but deteriorates outside it.
    let summary = verify::section5_reduced(90).unwrap();
    assert!(
        summary.improved,
        "m=91: phi inside {:e} vs inputs ({:e}, {:e})",
        summary.phi_inside_sup, summary.first_sup, summary.second_sup
    );
    assert!(
        summary.wide_inside_sup < summary.phi_inside_sup,
        "m=101 should improve the hull interior: {:e} vs {:e}",
        summary.wide_inside_sup,
        summary.phi_inside_sup
    );
    assert!(
        summary.deteriorates_outside,
        "m=101 outside {:e} vs inside {:e}",
        summary.wide_outside_sup,
        summary.wide_inside_sup
    );
}

#[test]
fn collocation_node_errors_stay_below_sup() {
    // The paper's figure configurations: node errors strictly below the
    // sup error for solutions outside H_(n+1).
    for (model, alpha, exact) in [
        (Model::Model1, 0.5, Builtin::Pole2),
        (Model::Model2, 2.0, Builtin::GaussLog),
    ] {
        let n = 45;
        let solution = colloc::solve(&CollocationProblem {
            model,
            alpha,
            n,
            rhs: |x| match model {
                Model::Model1 => {
                    exact.derivative(2, x).unwrap() + (alpha - x * x) * exact.value(x)
                }
                Model::Model2 => -exact.derivative(2, x).unwrap() + alpha * exact.value(x),
            },
        })
        .unwrap();

        let grid = GridSpec::default();
        let mut sup = 0.0f64;
        for x in grid.abscissae(n) {
            sup = sup.max((exact.value(x) - solution.expansion.evaluate(x)).abs());
        }
        let node_max = solution
            .nodes
            .nodes
            .iter()
            .map(|&x| (exact.value(x) - solution.expansion.evaluate(x)).abs())
            .fold(0.0f64, f64::max);
        assert!(
            node_max < sup,
            "{}: node errors {node_max:e} not below sup {sup:e}",
            model.id()
        );
    }
}
