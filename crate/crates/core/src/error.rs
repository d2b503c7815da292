//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    /// Evaluation hit an exact singularity (division by zero, log of zero).
    /// Reported distinctly from floating-point overflow.
    #[error("singular evaluation: {0}")]
    Singularity(String),

    #[error("overflow in {0}")]
    Overflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A flow step left the guarded domain and step halving did not recover.
    #[error("boundary guard violated at t={t}: witness {witness}")]
    GuardViolation { t: f64, witness: f64 },

    #[error("step size underflow at t={t}")]
    StepUnderflow { t: f64 },

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("aliasing bound {bound:e} exceeds tolerance {tol:e}")]
    AliasingTooLarge { bound: f64, tol: f64 },

    /// A model-flow evaluation left the conformal image domain.
    #[error("model round-trip failed: {0}")]
    ModelDomain(String),

    /// A precondition of a characterization theorem is violated
    /// (for example `Te₀ ≡ 0` in the weighted composition check).
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// No finite non-zero angular limit: the composition operator is
    /// unbounded on the half-plane Hardy space.
    #[error("unbounded operator: {0}")]
    Unbounded(String),

    #[error("not a half-plane group generator: {0}")]
    NotGroup(String),

    #[error("linear algebra failure: {0}")]
    Linalg(String),
}
