//! Exact finite-truncation model of holomorphic duality for locally finite and
//! profinite groups.
//!
//! Locally finite groups are modelled as ind-towers of finite groups with
//! injective transitions, profinite groups as pro-towers with surjective
//! transitions. Every object at every level is finite, so all duality and
//! reflexivity statements reduce to exact integer, rational or cyclotomic
//! computations.
//!
//! Layout:
//!
//! * [`finab`]: finite abelian groups in invariant-factor form, homomorphisms,
//!   Smith normal form and the Q/Z-valued character pairing.
//! * [`cyclo`]: exact arithmetic in cyclotomic fields.
//! * [`towers`]: ind/pro towers of finite abelian groups and their duals.
//! * [`locfun`]: locally constant functions on pro-towers and their character
//!   decomposition.
//! * [`hopf`]: finite groups and finite-dimensional Hopf algebras by structure
//!   tensors.
//! * [`hopftowers`]: towers of Hopf algebras, duality and reflexivity diagrams.
//! * [`report`]: structured check reports shared by all of the above.

pub mod cyclo;
pub mod finab;
pub mod hopf;
pub mod hopftowers;
pub mod linalg;
pub mod locfun;
pub mod report;
pub mod towers;

/// Exact rational scalar used for structure tensors and function values.
pub type Rational = num_rational::BigRational;

pub use cyclo::Cyclotomic;
pub use finab::{DualGroup, Element, FiniteAbelianGroup, Hom, QmodZ};
pub use report::{CheckRecord, Report, Verdict};
