//! Numerical laboratory for Fekete configurations on projective model
//! geometries.
//!
//! The crate works on two closed-form Kähler models, the Riemann sphere
//! `CP1` with the Fubini–Study metric and the product `CP1 x CP1`, with the
//! hyperplane bundle and its tensor powers. Holomorphic sections are
//! homogeneous polynomials evaluated on unit representatives, so pointwise
//! norms are plain moduli and no local frames are needed.
//!
//! Modules, bottom-up:
//!
//! - [`geometry`]: points, distances, cap measures, sampling and exact quadrature.
//! - [`sections`]: orthonormal bases, evaluation, sup-norms, the Bergman kernel,
//!   peak sections and Vandermonde determinants.
//! - [`fekete`]: maximization of the Vandermonde norm and configuration diagnostics.
//! - [`interpolation`]: Lagrange sections, Lebesgue constants and witness sections.
//! - [`random`]: the Gaussian ensemble and Monte Carlo experiments.
//! - [`cache`]: on-disk configuration cache.
//! - [`cli`]: the `fekete-lab` command-line front end.

// `!(x > 0.0)` style guards reject NaN on purpose; triangular solves index by hand.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cache;
pub mod cli;
pub mod constants;
pub mod error;
pub mod fekete;
pub mod geometry;
pub mod interpolation;
pub mod linalg;
pub mod quad;
pub mod random;
pub mod report;
pub mod search;
pub mod sections;

pub use error::{Error, Result};
pub use fekete::{Certificate, Configuration, SolverMeta, SolverOptions};
pub use geometry::{Model, Point, ProjPoint};
pub use interpolation::LagrangeBasis;
pub use random::GaussianEnsemble;
pub use report::ExperimentReport;
pub use sections::{Section, SectionSpace};

pub use num_complex::Complex64;
