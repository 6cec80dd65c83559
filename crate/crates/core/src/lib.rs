//! Numerical calculus of distribution frames at desk scale.
//!
//! Weakly measurable families of distributions over a measure space are
//! represented as pairing matrices against a truncated orthonormal Hermite
//! test-function basis. On that finite model the continuous-frame
//! constructions become testable matrix computations: frame operator and
//! bounds, Parseval / Gel'fand / Riesz classification, canonical duals and
//! reconstruction, frame multipliers and atomic maps, and mixed-operator
//! compatibility of pairs.
//!
//! Layering, bottom up:
//! - [`numerics`]: dense complex linear algebra with tolerance contracts
//! - [`quadrature`]: nodes and weights standing in for the measure space
//! - [`testspace`]: the truncated Hermite basis and coefficient vectors
//! - [`distmap`]: pairing matrices, built-in kernels, analysis/synthesis
//! - [`frameops`]: frame operator, bounds, classification, canonical dual
//! - [`opcalc`]: operators built from frames and spectral comparisons
//! - [`pairs`]: mixed operators, compatible pairs, coefficient spaces
//! - [`scenario`]: batch scenarios and machine-readable reports

pub mod distmap;
pub mod frameops;
pub mod numerics;
pub mod opcalc;
pub mod pairs;
pub mod quadrature;
pub mod report;
pub mod scenario;
pub mod testspace;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
