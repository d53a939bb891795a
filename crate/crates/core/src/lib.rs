//! Hermite-function spectral methods on the whole real line: stable
//! evaluation of the basis, Gauss-Hermite nodes and superconvergence
//! point sets, spectral interpolation and differentiation, collocation
//! for two second-order models, and least-squares post-processing of
//! collocation solutions.
//!
//! Everything is plain `f64`; the small linear-algebra kernels the
//! solvers need live in [`numkit`].

pub mod basis;
pub mod colloc;
mod error;
pub mod functions;
pub mod interp;
pub mod nodes;
pub mod numkit;
pub mod postprocess;
pub mod verify;

pub use basis::{EvalRequest, Limits, NormConstants, TurningPointInfo};
pub use colloc::{CollocationProblem, CollocationSolution, DiffMatrix, Model};
pub use error::{Error, Result};
pub use functions::{Builtin, RealFunction};
pub use interp::{ErrorCurve, GridSpec, HermiteExpansion, PointKind, RatioSeries};
pub use nodes::{NodeSet, SuperconPoints};
pub use postprocess::{MergeResult, MergeSpec, WindowReport};
