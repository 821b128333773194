//! Component-wise eigenpairs for systems of compact operators on cones.
//!
//! `bkeig` computes quadruples `(lambda1, lambda2, x0, y0)` solving
//!
//! ```text
//! x0 = lambda1 T1(x0, y0),    |x0| = r1,
//! y0 = lambda2 T2(x0, y0),    |y0| = r2,
//! ```
//!
//! where `T1`, `T2` are Hammerstein integral operators
//! `T_i(u, v) = integral k_i(., s) f_i(s, u(s), v(s)) ds` acting on
//! products of cones (nonnegative functions, Guo-type cones with a
//! pointwise lower bound over a window) and whole spaces, under the
//! sup-norm. This is the constructive counterpart of Birkhoff-Kellogg
//! invariant-direction theory for operator systems: each equation gets
//! its own eigenvalue, and each eigenvector component is nontrivial with
//! a prescribed norm. A sign pattern chooses among up to four auxiliary
//! maps, yielding negative eigenvalues for whole-space components.
//!
//! The pipeline is: discretize the integral operators by Nystrom
//! quadrature ([`kernels`]), build the normalized auxiliary map from the
//! explicit cone retraction ([`solver`]), iterate damped Picard until the
//! eigen-residuals vanish, and re-verify every claim of the result
//! ([`verify`]).
//!
//! Two example systems are built in (see [`config::RunConfig::preset`]):
//! an interval system with Dirichlet/mixed boundary kernels solved in a
//! Guo cone times the whole space, and a Dirichlet system on the unit
//! disk solved in a product of positive cones.
//!
//! ```
//! use bkeig::config::RunConfig;
//! use bkeig::cone::SignPattern;
//! use bkeig::solver::SolverOptions;
//!
//! let problem = RunConfig::preset("ode-example")?
//!     .build_problem()?;
//! let pair = problem.solve(SignPattern::PP, &SolverOptions::default())?;
//! assert!(pair.converged && pair.lambda1 > 0.0 && pair.lambda2 > 0.0);
//! # Ok::<(), bkeig::error::Error>(())
//! ```
//!
//! The `examples/` directory walks through each capability; the `bkeig`
//! binary exposes the same workflows as config-driven subcommands
//! (`solve`, `verify`, `sweep`, `kernel-table`, `demo-remark`).

pub mod cli;
pub mod cone;
pub mod config;
pub mod error;
pub mod expr;
pub mod grid;
pub mod kernels;
pub mod problem;
pub mod solver;
pub mod verify;

pub use cone::{ConeSpec, SignPattern};
pub use error::{Error, Result};
pub use expr::{EvalEnv, Expr};
pub use grid::{DiskGrid, Grid, Grid1D, GridFn, Point2};
pub use kernels::{KernelId, NystromOp, QuadratureRule};
pub use problem::{HammersteinProblem, ProblemSpec};
pub use solver::{EigenPairResult, SolverOptions};
