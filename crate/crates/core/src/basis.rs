//! Overflow-safe evaluation of Hermite polynomials `H_n`, Hermite functions
//! `psi_n`, their derivatives, and sup-norm estimation over the real line.
//!
//! Hermite functions are evaluated through the normalized three-term
//! recurrence seeded with the Gaussian, so the polynomial and the
//! exponential factor are never formed separately. Derivatives use the
//! exact ladder expansion in neighbouring Hermite functions.

use std::f64::consts::{LN_2, PI, SQRT_2};

use crate::error::{Error, Result};

/// `pi^(-1/4)`: the value of `psi_0(0)` and the sharp bound of `|psi_n|`.
pub const PI_POW_NEG_QUARTER: f64 = 0.7511255444649425;

/// Rescaling threshold for the exponent-carrying recurrence branch.
const RESCALE_LIMIT: f64 = 3.273390607896142e150; // 2^500
const RESCALE_SHIFT: f64 = 500.0 * LN_2;

/// Capability bounds for basis evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_degree: usize,
    pub max_derivative: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: 2000,
            max_derivative: 4,
        }
    }
}

/// Identifies an evaluation of `psi_n^(k)` at a list of abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRequest {
    pub n: usize,
    pub k: u32,
    pub xs: Vec<f64>,
}

impl EvalRequest {
    /// Validate a request against the default capability bounds.
    pub fn new(n: usize, k: u32, xs: Vec<f64>) -> Result<Self> {
        Self::with_limits(n, k, xs, Limits::default())
    }

    pub fn with_limits(n: usize, k: u32, xs: Vec<f64>, limits: Limits) -> Result<Self> {
        if n > limits.max_degree {
            return Err(Error::Capability {
                what: "degree",
                requested: n,
                max: limits.max_degree,
            });
        }
        if k > limits.max_derivative {
            return Err(Error::Capability {
                what: "derivative order",
                requested: k as usize,
                max: limits.max_derivative as usize,
            });
        }
        for (index, &x) in xs.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFiniteInput {
                    what: "abscissa",
                    index,
                    at: x,
                });
            }
        }
        Ok(EvalRequest { n, k, xs })
    }
}

/// The sharp sup-norm constants of `psi_n^(k)` scaled by `n^(-exponent(k))`.
///
/// These are the smallest constants `C_k` with
/// `||psi_n^(k)||_inf <= C_k * n^(exponent(k))` for all `n >= 1`.
#[derive(Debug, Clone, Copy)]
pub struct NormConstants;

impl NormConstants {
    /// `C_k` for `k = 0..=3`. Panics for larger `k`.
    pub fn constant(k: u32) -> f64 {
        let q = PI.powf(0.25);
        match k {
            0 => 2f64.powf(19.0 / 12.0) * (-1.25f64).exp() / q, // attained at n = 2
            1 => SQRT_2 / q,                                    // attained at n = 1
            2 => 5.0 / (2f64.powf(1.25) * q),                   // attained at n = 2
            3 => 3.0 * SQRT_2 / q,                              // attained at n = 1
            _ => panic!("sup-norm constants are tabulated for k <= 3"),
        }
    }

    /// Growth exponent of `||psi_n^(k)||_inf` in `n`.
    pub fn exponent(k: u32) -> f64 {
        if k == 0 {
            -1.0 / 12.0
        } else {
            k as f64 / 2.0 - 0.25
        }
    }
}

/// The turning point `xi = sqrt(2n + 1)` separating the oscillatory and
/// decaying ranges of `psi_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPointInfo {
    pub n: usize,
    pub xi: f64,
}

pub fn turning_point(n: usize) -> TurningPointInfo {
    TurningPointInfo {
        n,
        xi: (2.0 * n as f64 + 1.0).sqrt(),
    }
}

/// Evaluate `psi_0 .. psi_n` at a single point.
///
/// For moderate `|x|` the iterates are the Hermite-function values
/// themselves, all bounded by `pi^(-1/4)`, so the loop cannot overflow.
/// When the Gaussian seed would underflow, the recurrence runs on
/// `psi_m * e^(x^2/2)` with power-of-two rescaling and the exponent is
/// reattached per entry.
pub fn psi_row(n: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    let half_sq = 0.5 * x * x;
    if half_sq < 700.0 {
        let g = (-half_sq).exp() * PI_POW_NEG_QUARTER;
        out[0] = g;
        if n == 0 {
            return out;
        }
        out[1] = SQRT_2 * x * g;
        for m in 1..n {
            let mf = m as f64;
            out[m + 1] =
                (2.0 / (mf + 1.0)).sqrt() * x * out[m] - (mf / (mf + 1.0)).sqrt() * out[m - 1];
        }
        return out;
    }

    let mut log_scale = -half_sq;
    let mut prev = PI_POW_NEG_QUARTER;
    let mut cur = SQRT_2 * x * PI_POW_NEG_QUARTER;
    out[0] = attach_scale(prev, log_scale);
    if n == 0 {
        return out;
    }
    out[1] = attach_scale(cur, log_scale);
    for m in 1..n {
        let mf = m as f64;
        let next = (2.0 / (mf + 1.0)).sqrt() * x * cur - (mf / (mf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_LIMIT || prev.abs() > RESCALE_LIMIT {
            prev /= RESCALE_LIMIT;
            cur /= RESCALE_LIMIT;
            log_scale += RESCALE_SHIFT;
        }
        out[m + 1] = attach_scale(cur, log_scale);
    }
    out
}

fn attach_scale(v: f64, log_scale: f64) -> f64 {
    if log_scale == 0.0 {
        v
    } else {
        v * log_scale.exp()
    }
}

/// `psi_n(x)` at a single point.
pub fn psi(n: usize, x: f64) -> f64 {
    psi_row(n, x)[n]
}

/// Ladder coefficients of `psi_n^(k)` as an expansion in `psi_0 .. psi_(n+k)`.
pub(crate) fn derivative_ladder(n: usize, k: u32) -> Vec<f64> {
    let mut c = vec![0.0; n + k as usize + 1];
    c[n] = 1.0;
    for _ in 0..k {
        let mut d = vec![0.0; c.len()];
        for (m, &a) in c.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let mf = m as f64;
            if m > 0 {
                d[m - 1] += a * (mf / 2.0).sqrt();
            }
            d[m + 1] -= a * ((mf + 1.0) / 2.0).sqrt();
        }
        c = d;
    }
    c
}

/// `psi_n^(k)(x)` via the ladder expansion.
pub fn psi_derivative(n: usize, k: u32, x: f64) -> f64 {
    if k == 0 {
        return psi(n, x);
    }
    let coeffs = derivative_ladder(n, k);
    let row = psi_row(n + k as usize, x);
    dot(&coeffs, &row)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Evaluate `psi_n` at the requested abscissae (`k` must be 0).
pub fn eval_psi(req: &EvalRequest) -> Result<Vec<f64>> {
    if req.k != 0 {
        return Err(Error::InvalidArgument(format!(
            "eval_psi expects derivative order 0, got {}",
            req.k
        )));
    }
    Ok(req.xs.iter().map(|&x| psi(req.n, x)).collect())
}

/// Evaluate `psi_n^(k)` for `k >= 1` at the requested abscissae.
pub fn eval_psi_derivative(req: &EvalRequest) -> Result<Vec<f64>> {
    if req.k == 0 {
        return Err(Error::InvalidArgument(
            "eval_psi_derivative expects derivative order >= 1".into(),
        ));
    }
    let coeffs = derivative_ladder(req.n, req.k);
    Ok(req
        .xs
        .iter()
        .map(|&x| dot(&coeffs, &psi_row(req.n + req.k as usize, x)))
        .collect())
}

/// Maximum degree for raw Hermite polynomial values before they overflow
/// any reasonable working range; `psi_n` is the production path.
pub const MAX_HERMITE_POLY_DEGREE: usize = 60;

/// Raw Hermite polynomial values `H_n(x)` by the classical recurrence.
/// Only intended for cross-checks against `eval_psi` at small degree.
pub fn eval_hermite_poly(n: usize, xs: &[f64]) -> Result<Vec<f64>> {
    if n > MAX_HERMITE_POLY_DEGREE {
        return Err(Error::Capability {
            what: "Hermite polynomial degree",
            requested: n,
            max: MAX_HERMITE_POLY_DEGREE,
        });
    }
    Ok(xs
        .iter()
        .map(|&x| {
            let mut prev = 1.0;
            if n == 0 {
                return prev;
            }
            let mut cur = 2.0 * x;
            for m in 1..n {
                let next = 2.0 * x * cur - 2.0 * m as f64 * prev;
                prev = cur;
                cur = next;
            }
            cur
        })
        .collect())
}

/// Estimate `||psi_n^(k)||_inf` over the real line.
///
/// All extrema lie inside the outermost turning point, so the search grid
/// `[-L, L]` with `L = sqrt(2n + 3) + 2` and `20(n + 1) + 1` points covers
/// them; a golden-section refinement around the grid argmax sharpens the
/// value. The returned estimate is a true function value, hence never
/// larger than the sup norm and never smaller than the grid maximum.
pub fn sup_norm_estimate(n: usize, k: u32) -> Result<f64> {
    let limits = Limits::default();
    if n > limits.max_degree {
        return Err(Error::Capability {
            what: "degree",
            requested: n,
            max: limits.max_degree,
        });
    }
    if k > limits.max_derivative {
        return Err(Error::Capability {
            what: "derivative order",
            requested: k as usize,
            max: limits.max_derivative as usize,
        });
    }

    let coeffs = derivative_ladder(n, k);
    let top = n + k as usize;
    let eval = |x: f64| dot(&coeffs, &psi_row(top, x)).abs();

    let half_width = (2.0 * n as f64 + 3.0).sqrt() + 2.0;
    let points = 20 * (n + 1) + 1;
    let step = 2.0 * half_width / (points - 1) as f64;

    let mut best = 0.0;
    let mut best_x = -half_width;
    for i in 0..points {
        let x = -half_width + step * i as f64;
        let v = eval(x);
        if v > best {
            best = v;
            best_x = x;
        }
    }

    let refined = golden_section_max(&eval, best_x - step, best_x + step);
    Ok(best.max(refined))
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
fn golden_section_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..120 {
        if b - a <= 1e-14 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pi_power_constant_matches_powf() {
        assert!((PI.powf(-0.25) - PI_POW_NEG_QUARTER).abs() < 1e-16);
    }

    #[test]
    fn psi_at_origin() {
        // psi_0(0) = pi^(-1/4); psi_1 is odd; psi_2(0) = -1/(sqrt(2) pi^(1/4)).
        assert_abs_diff_eq!(psi(0, 0.0), 0.7511255444649425, epsilon = 1e-15);
        assert_abs_diff_eq!(psi(1, 0.0), 0.0, epsilon = 1e-300);
        assert_abs_diff_eq!(psi(2, 0.0), -0.5311259660135985, epsilon = 1e-15);
    }

    #[test]
    fn psi_sharp_bound() {
        for n in [0usize, 1, 3, 7, 20, 151, 600] {
            let xi = turning_point(n).xi;
            for i in 0..400 {
                let x = -xi - 2.0 + (2.0 * xi + 4.0) * i as f64 / 399.0;
                assert!(psi(n, x).abs() <= PI_POW_NEG_QUARTER * (1.0 + 1e-14));
            }
        }
    }

    #[test]
    fn psi_derivative_examples() {
        // ||psi_1'||_inf is attained at 0 with value sqrt(2) pi^(-1/4).
        assert_abs_diff_eq!(psi_derivative(1, 1, 0.0), 1.062251932027197, epsilon = 1e-14);
        // psi_0' = -x psi_0.
        assert_abs_diff_eq!(
            psi_derivative(0, 1, 1.0),
            -(-0.5f64).exp() * PI_POW_NEG_QUARTER,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            psi_derivative(0, 1, 1.0),
            -0.4555806720113325,
            epsilon = 1e-14
        );
    }

    #[test]
    fn second_derivative_vanishes_at_zeros_scaled_by_identity() {
        // psi_3'' = (x^2 - 7) psi_3 vanishes at every zero of psi_3:
        // x = 0, +-sqrt(3/2).
        for x in [0.0, (1.5f64).sqrt(), -(1.5f64).sqrt()] {
            assert_abs_diff_eq!(psi_derivative(3, 2, x), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn fourth_derivative_of_the_gaussian_mode() {
        // psi_0'''' = (x^4 - 6x^2 + 3) psi_0.
        for &x in &[0.0, 0.7, -2.3, 4.1] {
            let expected = (x * x * x * x - 6.0 * x * x + 3.0) * psi(0, x);
            assert_abs_diff_eq!(psi_derivative(0, 4, x), expected, epsilon = 1e-13);
        }
    }

    #[test]
    fn hermite_poly_examples() {
        assert_eq!(eval_hermite_poly(1, &[3.0]).unwrap()[0], 6.0);
        assert_eq!(eval_hermite_poly(2, &[0.0]).unwrap()[0], -2.0);
        let root = (1.5f64).sqrt();
        assert_abs_diff_eq!(eval_hermite_poly(3, &[root]).unwrap()[0], 0.0, epsilon = 1e-13);
        assert!(matches!(
            eval_hermite_poly(61, &[0.0]),
            Err(Error::Capability { .. })
        ));
    }

    #[test]
    fn cross_check_psi_against_raw_hermite() {
        // psi_n = e^(-x^2/2) H_n / sqrt(2^n n! sqrt(pi)) for n <= 30.
        for n in 0..=30usize {
            let mut gamma = PI.sqrt();
            for m in 1..=n {
                gamma *= 2.0 * m as f64;
            }
            for i in 0..60 {
                let x = -6.0 + 12.0 * i as f64 / 59.0;
                let h = eval_hermite_poly(n, &[x]).unwrap()[0];
                let reference = (-0.5 * x * x).exp() * h / gamma.sqrt();
                let value = psi(n, x);
                if value.abs() > 1e-8 {
                    assert!(
                        ((value - reference) / reference).abs() < 1e-11,
                        "n={n} x={x}: {value} vs {reference}"
                    );
                }
            }
        }
    }

    #[test]
    fn ladder_consistency() {
        // psi_n' = sqrt(n/2) psi_(n-1) - sqrt((n+1)/2) psi_(n+1).
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 20.0 - 10.0
        };
        for n in 1..=40usize {
            for _ in 0..100 {
                let x = next();
                let row = psi_row(n + 1, x);
                let ladder =
                    (n as f64 / 2.0).sqrt() * row[n - 1] - ((n as f64 + 1.0) / 2.0).sqrt() * row[n + 1];
                assert!((psi_derivative(n, 1, x) - ladder).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn harmonic_oscillator_identity() {
        // -psi_n'' + x^2 psi_n = (2n + 1) psi_n.
        for n in 0..=40usize {
            let bound = 1e-9 * (2.0 * n as f64 + 1.0);
            for i in 0..200 {
                let x = -10.0 + 20.0 * i as f64 / 199.0;
                let value = psi(n, x);
                let second = psi_derivative(n, 2, x);
                let defect = -second + x * x * value - (2.0 * n as f64 + 1.0) * value;
                assert!(defect.abs() <= bound, "n={n} x={x} defect={defect:e}");
            }
        }
    }

    #[test]
    fn sup_norm_examples() {
        assert_abs_diff_eq!(
            sup_norm_estimate(0, 0).unwrap(),
            PI_POW_NEG_QUARTER,
            epsilon = 1e-12
        );
        // ||psi_2||_inf = C0 * 2^(-1/12).
        assert_abs_diff_eq!(
            sup_norm_estimate(2, 0).unwrap(),
            0.6086805,
            epsilon = 1e-6
        );
        // ||psi_2''||_inf = 5 / (sqrt(2) pi^(1/4)).
        assert_abs_diff_eq!(
            sup_norm_estimate(2, 2).unwrap(),
            2.6556297,
            epsilon = 1e-6
        );
    }

    #[test]
    fn norm_constants_match_tabulated_values() {
        assert_abs_diff_eq!(NormConstants::constant(0), 0.644874576859960, epsilon = 1e-14);
        assert_abs_diff_eq!(NormConstants::constant(1), 1.062251932027197, epsilon = 1e-14);
        assert_abs_diff_eq!(NormConstants::constant(2), 1.579046944365162, epsilon = 1e-14);
        assert_abs_diff_eq!(NormConstants::constant(3), 3.186755796081591, epsilon = 1e-14);
        assert_eq!(NormConstants::exponent(0), -1.0 / 12.0);
        assert_eq!(NormConstants::exponent(2), 0.75);
    }

    #[test]
    fn optimal_constants_attained() {
        let scaled = |n: usize, k: u32| {
            sup_norm_estimate(n, k).unwrap() * (n as f64).powf(-NormConstants::exponent(k))
        };
        assert_abs_diff_eq!(scaled(2, 0), NormConstants::constant(0), epsilon = 1e-10);
        assert_abs_diff_eq!(scaled(1, 1), NormConstants::constant(1), epsilon = 1e-10);
        assert_abs_diff_eq!(scaled(2, 2), NormConstants::constant(2), epsilon = 1e-10);
        assert_abs_diff_eq!(scaled(1, 3), NormConstants::constant(3), epsilon = 1e-10);
    }

    #[test]
    fn request_validation() {
        assert!(EvalRequest::new(2001, 0, vec![0.0]).is_err());
        assert!(EvalRequest::new(10, 5, vec![0.0]).is_err());
        assert!(matches!(
            EvalRequest::new(10, 1, vec![0.0, f64::NAN]),
            Err(Error::NonFiniteInput { index: 1, .. })
        ));
        assert!(EvalRequest::new(2000, 4, vec![0.0]).is_ok());
    }

    #[test]
    fn scaled_branch_handles_large_arguments() {
        // Deep in the underflow regime of the Gaussian seed the returned
        // value should still match the turning-point-scale amplitude for a
        // degree whose oscillatory range reaches that far out.
        let n = 1200usize;
        // e^(-x^2/2) underflows near x = 45 while the turning point of
        // psi_1200 is ~49, so the true values there are order n^(-1/4).
        let mut amplitude = 0.0f64;
        for i in 0..40 {
            let x = 45.0 + 0.01 * i as f64;
            let v = psi(n, x);
            assert!(v.is_finite());
            assert!(v.abs() < PI_POW_NEG_QUARTER);
            // Mirror symmetry survives the scaled branch bit-for-bit.
            assert_eq!(psi(n, -x), v);
            amplitude = amplitude.max(v.abs());
        }
        assert!(amplitude > 1e-2, "lost amplitude: {amplitude:e}");
    }

    #[test]
    fn turning_point_square() {
        let info = turning_point(17);
        assert_abs_diff_eq!(info.xi * info.xi, 35.0, epsilon = 35.0 * 1e-15);
    }
}
