//! Adaptive least-squares space-time finite element solver.
//!
//! The library discretizes the first-order optimality system of the
//! least-squares functional for `B u = f` as the saddle-point problem
//!
//! ```text
//! | A  B | | p |   | f |
//! | Bᵀ   | | u | = | 0 |
//! ```
//!
//! on a pair of nested P1 spaces: the trial space lives on a coarse
//! triangulation of the (space-time) domain, the test space on a uniformly
//! refined copy. The saddle system is solved through the Schur complement,
//! the Y-norm of the adjoint `p_h` acts as a posteriori error estimator, and
//! Dörfler marking with newest vertex bisection drives mesh adaptivity.
//!
//! Instantiations for the Poisson equation (2D), the heat equation, and the
//! wave equation (both on 1D space x time domains) live in [`problems`].

pub mod adapt;
pub mod assemble;
pub mod mesh;
pub mod problems;
pub mod solver;
pub mod space;
pub mod sparse;

pub use adapt::{
    adaptive_solve, dorfler_mark, fit_log_slope, local_indicators, run_study, uniform_solve,
    AdaptiveConfig, IndicatorField, Mode, RefineRatio, RunRecord, StudyError,
};
pub use assemble::{
    assemble_system, local_a, local_b, quad_rule, AssembledSystem, ProblemDef, ProblemKind,
    QuadRule,
};
pub use mesh::{
    bisect, make_lshape_mesh, make_rect_mesh, uniform_refine, BoundaryEdge, BoundaryTag,
    ParentMap, Point, TriMesh, Triangle, VertexOrigin,
};
pub use problems::{compute_errors, ExactSolution};
pub use solver::{
    factor_spd, infsup_constant, solve_saddle, y_norm, SaddleSolution, SaddleSolver, SpdFactor,
    SymmetricOp,
};
pub use space::{build_prolongation, build_space, BcSelector, FeSpace, Prolongation};
pub use sparse::SparseMatrix;

/// Scalar field over the computational domain, `(x, y)` for the Poisson
/// problem and `(x, t)` for the space-time problems.
pub type ScalarFn = dyn Fn(Point) -> f64 + Send + Sync;

/// Vector field (gradients of exact solutions).
pub type GradientFn = dyn Fn(Point) -> [f64; 2] + Send + Sync;

/// Errors shared across the solver pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied value violates an operation's contract.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Cholesky factorization hit a non-positive pivot.
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    /// The Schur-complement CG stalled; the best iterate is retained.
    #[error("conjugate gradient stalled after {iterations} iterations (residual {residual:.3e})")]
    CgStall {
        iterations: usize,
        residual: f64,
        best: Box<SaddleSolution>,
    },
    /// An iterative diagnostic exceeded its iteration cap.
    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
