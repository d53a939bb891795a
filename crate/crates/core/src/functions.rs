//! Built-in test functions with hand-coded closed-form derivatives.
//!
//! Derivative samplers are test-critical: error curves for derivative
//! orders 1 and 2 and manufactured collocation right-hand sides all rely
//! on them being exact, so there is no runtime expression parser and no
//! numerical differentiation of user callables.

use crate::error::{Error, Result};

/// A real-valued function with optional exact derivatives.
pub trait RealFunction {
    fn value(&self, x: f64) -> f64;

    /// Exact `order`-th derivative when available; order 0 is the value.
    fn derivative(&self, order: u32, x: f64) -> Option<f64> {
        if order == 0 {
            Some(self.value(x))
        } else {
            None
        }
    }
}

/// Plain closures are functions without derivative samplers.
impl<F: Fn(f64) -> f64> RealFunction for F {
    fn value(&self, x: f64) -> f64 {
        self(x)
    }
}

/// The built-in test functions used throughout the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// `e^(-x^2/2) / (x^2 + 1)`: complex-conjugate poles at `+-i`.
    Pole,
    /// `e^(-x^2) cos(5x)`: entire wave packet.
    Wavepacket,
    /// `e^(-x^2/2) / (x^2 + 2)`: poles at `+-i sqrt(2)`.
    Pole2,
    /// `e^(-x^2) ln(x^2 + 1)`: logarithmic branch points at `+-i`.
    GaussLog,
    /// `(e^(-(x-1)^2) + e^(-(x+1)^2)) / (4x^2 + 1)`: poles at `+-i/2`.
    TwinPeaks,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [
        Builtin::Pole,
        Builtin::Wavepacket,
        Builtin::Pole2,
        Builtin::GaussLog,
        Builtin::TwinPeaks,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Builtin::Pole => "pole",
            Builtin::Wavepacket => "wavepacket",
            Builtin::Pole2 => "pole2",
            Builtin::GaussLog => "gausslog",
            Builtin::TwinPeaks => "twinpeaks",
        }
    }

    pub fn from_id(id: &str) -> Result<Builtin> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.id() == id)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown function id {id:?}; built-ins are {}",
                    Builtin::ALL.map(Builtin::id).join(", ")
                ))
            })
    }

    /// Human-readable formula, used in manifests.
    pub fn formula(self) -> &'static str {
        match self {
            Builtin::Pole => "exp(-x^2/2) / (x^2 + 1)",
            Builtin::Wavepacket => "exp(-x^2) * cos(5x)",
            Builtin::Pole2 => "exp(-x^2/2) / (x^2 + 2)",
            Builtin::GaussLog => "exp(-x^2) * ln(x^2 + 1)",
            Builtin::TwinPeaks => "(exp(-(x-1)^2) + exp(-(x+1)^2)) / (4x^2 + 1)",
        }
    }
}

impl RealFunction for Builtin {
    fn value(&self, x: f64) -> f64 {
        match self {
            Builtin::Pole => (-0.5 * x * x).exp() / (x * x + 1.0),
            Builtin::Wavepacket => (-x * x).exp() * (5.0 * x).cos(),
            Builtin::Pole2 => (-0.5 * x * x).exp() / (x * x + 2.0),
            Builtin::GaussLog => (-x * x).exp() * (x * x + 1.0).ln(),
            Builtin::TwinPeaks => {
                let s = (-(x - 1.0) * (x - 1.0)).exp() + (-(x + 1.0) * (x + 1.0)).exp();
                s / (4.0 * x * x + 1.0)
            }
        }
    }

    fn derivative(&self, order: u32, x: f64) -> Option<f64> {
        if order == 0 {
            return Some(self.value(x));
        }
        if order > 2 {
            return None;
        }
        let x2 = x * x;
        Some(match self {
            Builtin::Pole => {
                let g = (-0.5 * x2).exp();
                let q = x2 + 1.0;
                if order == 1 {
                    -x * (x2 + 3.0) * g / (q * q)
                } else {
                    (x2 * x2 * x2 + 5.0 * x2 * x2 + 9.0 * x2 - 3.0) * g / (q * q * q)
                }
            }
            Builtin::Wavepacket => {
                let g = (-x2).exp();
                let (s, c) = (5.0 * x).sin_cos();
                if order == 1 {
                    g * (-2.0 * x * c - 5.0 * s)
                } else {
                    g * ((4.0 * x2 - 27.0) * c + 20.0 * x * s)
                }
            }
            Builtin::Pole2 => {
                let g = (-0.5 * x2).exp();
                let q = x2 + 2.0;
                if order == 1 {
                    -x * (x2 + 4.0) * g / (q * q)
                } else {
                    (x2 * x2 * x2 + 7.0 * x2 * x2 + 14.0 * x2 - 8.0) * g / (q * q * q)
                }
            }
            Builtin::GaussLog => {
                let g = (-x2).exp();
                let q = x2 + 1.0;
                let l = q.ln();
                if order == 1 {
                    g * 2.0 * x * (1.0 / q - l)
                } else {
                    g * ((4.0 * x2 - 2.0) * l + (2.0 - 8.0 * x2) / q - 4.0 * x2 / (q * q))
                }
            }
            Builtin::TwinPeaks => {
                let g1 = (-(x - 1.0) * (x - 1.0)).exp();
                let g2 = (-(x + 1.0) * (x + 1.0)).exp();
                let s = g1 + g2;
                let s1 = -2.0 * (x - 1.0) * g1 - 2.0 * (x + 1.0) * g2;
                let q = 4.0 * x2 + 1.0;
                if order == 1 {
                    s1 / q - 8.0 * x * s / (q * q)
                } else {
                    let s2 = (4.0 * (x - 1.0) * (x - 1.0) - 2.0) * g1
                        + (4.0 * (x + 1.0) * (x + 1.0) - 2.0) * g2;
                    s2 / q - 16.0 * x * s1 / (q * q) - 8.0 * s / (q * q)
                        + 128.0 * x2 * s / (q * q * q)
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sixth-order central difference, the independent oracle for the
    /// hand-coded derivative formulas.
    fn central_diff(f: &dyn RealFunction, x: f64, h: f64) -> f64 {
        (45.0 * (f.value(x + h) - f.value(x - h)) - 9.0 * (f.value(x + 2.0 * h) - f.value(x - 2.0 * h))
            + (f.value(x + 3.0 * h) - f.value(x - 3.0 * h)))
            / (60.0 * h)
    }

    fn central_diff2(f: &dyn RealFunction, x: f64, h: f64) -> f64 {
        (-490.0 * f.value(x) + 270.0 * (f.value(x + h) + f.value(x - h))
            - 27.0 * (f.value(x + 2.0 * h) + f.value(x - 2.0 * h))
            + 2.0 * (f.value(x + 3.0 * h) + f.value(x - 3.0 * h)))
            / (180.0 * h * h)
    }

    #[test]
    fn closed_form_derivatives_match_finite_differences() {
        let h = 1e-2;
        for b in Builtin::ALL {
            for i in 0..81 {
                let x = -4.0 + 8.0 * i as f64 / 80.0;
                let d1 = b.derivative(1, x).unwrap();
                let d2 = b.derivative(2, x).unwrap();
                let fd1 = central_diff(&b, x, h);
                let fd2 = central_diff2(&b, x, h);
                assert!(
                    (d1 - fd1).abs() < 2e-8,
                    "{} d1 at {x}: {d1} vs {fd1}",
                    b.id()
                );
                assert!(
                    (d2 - fd2).abs() < 2e-6,
                    "{} d2 at {x}: {d2} vs {fd2}",
                    b.id()
                );
            }
        }
    }

    #[test]
    fn derivative_defaults() {
        let b = Builtin::Pole;
        assert_eq!(b.derivative(0, 0.5), Some(b.value(0.5)));
        assert_eq!(b.derivative(3, 0.5), None);
        let closure = |x: f64| x * x;
        assert_eq!(closure.derivative(1, 1.0), None);
        assert_eq!(closure.value(2.0), 4.0);
    }

    #[test]
    fn ids_round_trip() {
        for b in Builtin::ALL {
            assert_eq!(Builtin::from_id(b.id()).unwrap(), b);
        }
        assert!(Builtin::from_id("nope").is_err());
    }

    #[test]
    fn second_derivative_spot_values() {
        // From expanding each function around the origin.
        assert!((Builtin::Pole.derivative(2, 0.0).unwrap() + 3.0).abs() < 1e-14);
        assert!((Builtin::Wavepacket.derivative(2, 0.0).unwrap() + 27.0).abs() < 1e-14);
        assert!((Builtin::Pole2.derivative(2, 0.0).unwrap() + 1.0).abs() < 1e-14);
        assert!((Builtin::GaussLog.derivative(2, 0.0).unwrap() - 2.0).abs() < 1e-14);
        let twin = Builtin::TwinPeaks.derivative(2, 0.0).unwrap();
        assert!((twin + 12.0 * (-1.0f64).exp()).abs() < 1e-14);
    }
}
