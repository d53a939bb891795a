//! Minimal tour: nodes, superconvergence points, and an error curve.
//! Run with `cargo run -p hermspec --example quickstart`.

use hermspec::{interp, nodes, Builtin, GridSpec};

fn main() -> Result<(), hermspec::Error> {
    let n = 24;
    let node_set = nodes::gauss_hermite_nodes(n)?;
    let points = nodes::supercon_points(n)?;
    println!(
        "degree {n}: {} nodes in [{:.4}, {:.4}], {} tau points, {} eta points",
        node_set.nodes.len(),
        node_set.nodes[0],
        node_set.nodes[n],
        points.tau.len(),
        points.eta.len()
    );

    let curve = interp::error_curve(&Builtin::Pole, 1, n, &GridSpec::default())?;
    let max_marked = curve
        .marked
        .iter()
        .map(|(_, e)| e.abs())
        .fold(0.0f64, f64::max);
    println!(
        "first-derivative interpolation error: sup {:.3e}, worst tau-point error {:.3e} ({:.1}x smaller)",
        curve.sup_estimate,
        max_marked,
        curve.sup_estimate / max_marked
    );
    Ok(())
}
