//! Numerical laboratory for semigroups of composition operators induced by
//! holomorphic semiflows on the unit disc and on the right half-plane.
//!
//! Given a closed-form generator symbol `G`, the crate
//!
//! * parses and evaluates the symbol ([`expr`]),
//! * samples boundary profiles `z̄·G(z)` and classifies the induced semigroup
//!   (quasicontractive generation, analyticity sector, group property,
//!   compactness criteria — [`genclass`]),
//! * integrates the semiflow ODE `∂φ_t/∂t = G∘φ_t`, locates the Denjoy–Wolff
//!   point and checks closed-form / conjugation models ([`semiflow`]),
//! * builds truncated matrices of `C_φ` and of `A f = G f′` on weighted Hardy
//!   spaces `H²(β)` with spectral, Hilbert–Schmidt and trace diagnostics
//!   ([`opmatrix`]),
//! * runs the half-plane theory, where the answers are very different
//!   ([`halfplane`]),
//! * and ships a catalogue of worked examples with known verdicts
//!   ([`registry`]).
//!
//! All numerics are plain `f64`/[`num_complex::Complex64`]; everything is
//! deterministic for fixed inputs.

pub mod error;
pub mod expr;
pub mod genclass;
pub mod halfplane;
pub mod opmatrix;
pub mod registry;
pub mod semiflow;
pub mod series;

pub use error::Error;
pub use expr::Expr;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
