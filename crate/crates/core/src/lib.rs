//! Exact-rational toolkit for graded Frobenius algebras, their sl₂-triples
//! and the Lie algebras of operators they generate.

pub mod error;
pub mod exactla;
pub mod graded;
pub mod lefschetz;
pub mod liealg;
pub mod models;
pub mod par;
pub mod rep;
pub mod verbitsky;

pub use error::{LlvError, Result};
pub use exactla::{rat, ratio, Inertia, Rational, RationalMatrix, Subspace};
pub use graded::{GradedFrobeniusAlgebra, GradedOperator, GradedVectorSpace};
pub use lefschetz::Sl2Triple;
pub use liealg::{lie_closure, lie_closure_with, LieOperatorAlgebra, QuadraticSpace};
pub use par::Execution;
