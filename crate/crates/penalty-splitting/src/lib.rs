//! Backward penalty splitting for monotone inclusions.
//!
//! This crate solves inclusion problems of the form
//!
//! ```text
//!     0 ∈ Ax + Dx + N_C(x),        C = zer B ≠ ∅,
//! ```
//!
//! where `A` and `B` are maximally monotone set-valued operators on ℝ^d
//! (accessed purely through their resolvents), `D` is a single-valued
//! monotone operator, and `N_C` is the normal cone to the zero set of the
//! penalty operator `B`. Instead of projecting onto `C`, each iteration
//! applies the resolvent `J_{λβB}` with a growing penalty parameter `β`.
//!
//! Two solvers are provided:
//!
//! - [`fbb`] — one forward step for a *cocoercive* `D`, then backward steps
//!   on `A` and the penalized `B`;
//! - [`fbfb`] — two forward steps (Tseng-style) for a `D` that is only
//!   *monotone and Lipschitz*, same backward treatment of `A` and `B`.
//!
//! On top of [`fbfb`], the [`primal_dual`] module assembles structured
//! inclusions with linear compositions of parallel sums
//! `0 ∈ Ax + Σᵢ Lᵢ*(Aᵢ □ Dᵢ)(Lᵢx) + Dx + N_C(x)` into a product-space
//! problem and runs the matching primal-dual scheme.
//!
//! Convergence of all three schemes hinges on a summability condition for
//! the Fitzpatrick gap of `B` over `C` together with an ℓ²\ℓ¹ step-size
//! sequence; [`schedules`] classifies those conditions per penalty class
//! and [`penalty`] evaluates the gaps in closed form.
//!
//! See the `examples/` directory for one runnable program per capability,
//! and the `penalty-splitting` binary for config-driven runs.

pub mod benchmarks;
pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod fbb;
pub mod fbfb;
pub mod operators;
pub mod penalty;
pub mod primal_dual;
pub mod problem;
pub mod schedules;
pub mod space;

pub use problem::{InclusionProblem, RunOptions, SolutionCertificate};
pub use space::{ConvexSet, ExtReal, Point};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty or inconsistent set: {0}")]
    BadSet(String),

    #[error("matrix is not antisymmetric: max |K + Kᵀ| entry is {0:.3e}")]
    NotSkew(f64),

    #[error("solver admission: {0}")]
    Admission(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("non-finite iterate at n = {n} ({what}); the schedule may be too aggressive")]
    NonFinite { n: usize, what: String },

    #[error("certificate rejected: {0}")]
    BadCertificate(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(expected: usize, got: usize) -> Self {
        Error::DimensionMismatch { expected, got }
    }
}
