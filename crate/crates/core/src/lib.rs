//! Exact symbolic engine for centrally extended conformal Galilei algebras with
//! half-integer spin, their jet-space realization and differential invariants.
//!
//! Everything is generic over the coefficient field through [`scalar::Scalar`];
//! the aliases below fix it to exact rationals.

pub mod arith;
pub mod cga;
pub mod emit;
pub mod error;
pub mod expr_io;
pub mod invariants;
pub mod jet;
pub mod linalg;
pub mod prolong;
pub mod report;
pub mod scalar;
pub mod stats;
pub mod treecoef;

pub use arith::{HalfInt, Rat};
pub use error::{Error, Result};
pub use jet::{Jet, JetCoord, LaurentPoly, Monomial, RatExpr};

/// Laurent polynomial over the jet space with rational coefficients.
pub type Poly = LaurentPoly<Rat>;
/// Rational function over the jet space with rational coefficients.
pub type Expr = RatExpr<Rat>;
/// Point vector field with rational coefficients.
pub type Field = prolong::VectorField<Rat>;
/// Operator on second-order jet space with rational coefficients.
pub type Prolonged = prolong::ProlongedField<Rat>;
