use std::fmt;

/// Errors returned by the evaluation, point-set, and solver routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Requested degree or derivative order exceeds the configured capability bound.
    Capability {
        what: &'static str,
        requested: usize,
        max: usize,
    },
    /// An abscissa or sampled value was not finite.
    NonFiniteInput {
        what: &'static str,
        index: usize,
        at: f64,
    },
    /// The function was asked for a derivative order it cannot supply exactly.
    MissingDerivative { order: u32 },
    /// Root bracketing failed while locating a point set.
    BracketFailure {
        target: &'static str,
        index: usize,
    },
    /// An iterative eigenvalue computation did not converge.
    EigenNonConvergence {
        what: &'static str,
        index: usize,
        sweeps: usize,
    },
    /// Exact pivot breakdown in an LU factorization.
    SingularMatrix { pivot: usize },
    /// A collocation system is singular or too ill-conditioned to trust,
    /// typically because the model parameter sits at a forbidden value.
    Solvability { condition: f64 },
    /// A least-squares design matrix is numerically rank deficient.
    RankDeficient { rank: usize, columns: usize },
    /// A constructed point set failed its verification pass.
    VerificationFailure {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },
    /// Invalid argument: inadmissible model parameter, inconsistent sizes,
    /// unknown function id, and similar caller mistakes.
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Capability {
                what,
                requested,
                max,
            } => write!(f, "{what} {requested} exceeds the configured maximum {max}"),
            Error::NonFiniteInput { what, index, at } => {
                write!(f, "non-finite {what} at index {index} (x = {at})")
            }
            Error::MissingDerivative { order } => {
                write!(f, "no exact derivative sampler of order {order} is available")
            }
            Error::BracketFailure { target, index } => {
                write!(f, "failed to bracket {target} root {index}")
            }
            Error::EigenNonConvergence {
                what,
                index,
                sweeps,
            } => write!(
                f,
                "{what} eigenvalue {index} did not converge after {sweeps} sweeps"
            ),
            Error::SingularMatrix { pivot } => {
                write!(f, "exact pivot breakdown at column {pivot}")
            }
            Error::Solvability { condition } => write!(
                f,
                "collocation system is not reliably solvable (condition estimate {condition:.3e})"
            ),
            Error::RankDeficient { rank, columns } => write!(
                f,
                "design matrix has numerical rank {rank} < {columns} columns"
            ),
            Error::VerificationFailure {
                what,
                residual,
                tolerance,
            } => write!(
                f,
                "{what} verification failed: residual {residual:.3e} exceeds {tolerance:.3e}"
            ),
            Error::InvalidArgument(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
