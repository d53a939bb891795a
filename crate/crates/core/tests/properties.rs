//! Property tests for the structural invariants.

use proptest::prelude::*;

use hermspec::basis;
use hermspec::interp::HermiteExpansion;
use hermspec::numkit::{lstsq, DenseMatrix, SymTridiag};

proptest! {
    // psi_n(-x) = (-1)^n psi_n(x), bit-exact through the recurrence.
    #[test]
    fn psi_mirror_symmetry(n in 0usize..120, x in 0.0f64..12.0) {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(basis::psi(n, -x), sign * basis::psi(n, x));
    }

    // Clenshaw evaluation agrees with direct summation against a basis row.
    #[test]
    fn clenshaw_matches_direct_sum(
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..40),
        x in -8.0f64..8.0,
    ) {
        let e = HermiteExpansion::new(coeffs.clone());
        let row = basis::psi_row(coeffs.len() - 1, x);
        let direct: f64 = coeffs.iter().zip(&row).map(|(a, p)| a * p).sum();
        prop_assert!((e.evaluate(x) - direct).abs() <= 1e-12 * direct.abs().max(1.0));
    }

    // The derivative ladder is linear: d/dx (a f + b g) = a f' + b g'.
    #[test]
    fn differentiation_is_linear(
        f in prop::collection::vec(-1.0f64..1.0, 1..20),
        g in prop::collection::vec(-1.0f64..1.0, 1..20),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
    ) {
        let len = f.len().max(g.len());
        let pad = |v: &[f64]| {
            let mut out = v.to_vec();
            out.resize(len, 0.0);
            out
        };
        let (f, g) = (pad(&f), pad(&g));
        let combo: Vec<f64> = f.iter().zip(&g).map(|(p, q)| a * p + b * q).collect();
        let d_combo = HermiteExpansion::new(combo).differentiate();
        let df = HermiteExpansion::new(f).differentiate();
        let dg = HermiteExpansion::new(g).differentiate();
        for k in 0..=len {
            let expect = a * df.coeffs()[k] + b * dg.coeffs()[k];
            prop_assert!((d_combo.coeffs()[k] - expect).abs() <= 1e-12);
        }
    }

    // Hermite Jacobi spectra pair off symmetrically about the origin.
    #[test]
    fn jacobi_spectrum_symmetry(size in 1usize..80) {
        let ev = SymTridiag::hermite_jacobi(size).eigenvalues().unwrap();
        let scale = ev.last().unwrap().abs().max(1.0);
        for j in 0..size / 2 {
            prop_assert!((ev[j] + ev[size - 1 - j]).abs() <= 1e-13 * scale);
        }
    }

    // Least-squares residuals are orthogonal to the column span.
    #[test]
    fn lstsq_residual_orthogonality(
        seed_rows in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 4), 8..20),
        b in prop::collection::vec(-1.0f64..1.0, 20),
    ) {
        let m = seed_rows.len();
        let a = DenseMatrix::from_rows(&seed_rows).unwrap();
        let b = &b[..m];
        let out = lstsq(&a, b).unwrap();
        prop_assume!(out.rank == 4);
        let ax = a.mul_vec(&out.solution);
        let resid: Vec<f64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
        let scale = a.one_norm() * b.iter().map(|v| v.abs()).fold(0.0f64, f64::max).max(1.0);
        for j in 0..4 {
            let dot: f64 = (0..m).map(|i| a[(i, j)] * resid[i]).sum();
            prop_assert!(dot.abs() <= 1e-8 * scale);
        }
    }
}
