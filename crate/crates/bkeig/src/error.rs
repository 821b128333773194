//! Crate-wide error type.

use crate::solver::EigenPairResult;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unbound variable `{name}` (not supplied by this evaluation context)")]
    UnboundVariable { name: &'static str },

    #[error("domain error: {what} in `{expr}`")]
    EvalDomain { what: String, expr: String },

    #[error("expression `{expr}` produced a non-finite value")]
    NonFinite { expr: String },

    #[error("{0}")]
    InvalidInput(String),

    #[error("grid mismatch: operands live on different grids")]
    GridMismatch,

    #[error("kernel argument outside [0,1]: ({0}, {1})")]
    KernelOutOfRange(f64, f64),

    #[error("point outside the closed unit disk: ({0}, {1})")]
    OutsideDisk(f64, f64),

    #[error("singular kernel evaluation requested (coincident points)")]
    SingularKernel,

    #[error("kernel {0:?} cannot be paired with this grid kind")]
    KernelGridMismatch(crate::kernels::KernelId),

    #[error("grid too coarse: {0}")]
    CoarseGrid(String),

    #[error("sign pattern {pattern} is illegal: component {component} has cone {cone}, \
             negative signs require a whole-space component")]
    IllegalSignPattern {
        pattern: String,
        component: usize,
        cone: String,
    },

    #[error("operator norm vanished (|T{component}| < {floor:e}); the boundary inf-condition fails numerically")]
    VanishingOperator { component: usize, floor: f64 },

    #[error("degenerate retraction: denominator below 1e-12 for both the configured and the fallback direction")]
    DegenerateRetraction,

    #[error("damped iterate collapsed to zero; cannot renormalize")]
    DegenerateIterate,

    #[error(
        "no convergence within {max_iter} iterations (best residuals {residual1:.3e}, {residual2:.3e})",
        max_iter = .0.iterations,
        residual1 = .0.residual1,
        residual2 = .0.residual2
    )]
    NonConvergence(Box<EigenPairResult>),

    #[error("expression evaluation failed at node {index} ({location}): {source}")]
    EvalAtNode {
        index: usize,
        location: String,
        #[source]
        source: Box<Error>,
    },

    #[error("computed solution failed verification: {0}")]
    VerificationFailed(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("hypothesis check: {0}")]
    Hypothesis(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
