//! Euclidean Jordan algebras presented concretely: each object is a real
//! subspace of hermitian elements inside a finite-dimensional complex
//! ⋆-algebra (a direct sum of full matrix blocks), closed under the
//! symmetrized product a∘b = (ab+ba)/2 and containing the ambient unit.
//!
//! On top of that representation the crate builds the canonical composite
//! A⊙B of two such objects (the smallest Jordan subalgebra of the tensor
//! ambient containing all product elements a⊗b), classifies the result,
//! equips objects with cups and counits, and runs the numerical checks
//! exposed by the `jordanc` command-line tool.

pub mod algebra;
pub mod antiauto;
pub mod composites;
pub mod eja;
pub mod error;
pub mod linalg;
pub mod morphisms;
pub mod report;
pub mod spin;
pub mod suites;

pub use algebra::{AlgebraElement, StarAlgebra};
pub use antiauto::AntiAutomorphism;
pub use composites::{CompositeResult, Session};
pub use eja::{EmbeddedJordanAlgebra, Family};
pub use error::JordanError;
pub use morphisms::MorphismMap;
pub use report::{Entry, Report, Status, Tolerances};

/// Default numerical tolerance for membership / residual checks.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Eigenvalue grouping width used when clustering ambient spectra.
pub const GROUP_TOL: f64 = 1e-7;
