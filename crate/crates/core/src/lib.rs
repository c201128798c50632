//! Norm derivatives and orthogonality in finite-dimensional real normed
//! spaces.
//!
//! The crate computes the one-sided norm derivatives rho_-, rho_+, their mean
//! rho and product rho_star for l1, lp, l-infinity, weighted-lp and
//! polyhedral norms, decides the associated orthogonality relations
//! (Birkhoff-James, isosceles, rho family, semi-inner product), constructs
//! rho_star-orthogonal decompositions, and analyzes linear maps for
//! orthogonality preservation, similarity and smoothness. Everything is
//! deterministic given a seed, and every numeric decision carries its
//! residual, normalizer and tolerance.

pub mod analysis;
pub mod cli;
pub mod constructions;
pub mod derivatives;
pub mod error;
mod linalg;
pub mod norms;
pub mod orthogonality;
pub mod report;
pub mod sampling;
pub mod suite;
pub mod vector;

pub use error::{Error, Result};
pub use norms::{NormSpec, NormedSpace};
pub use vector::{approx_zero, Seed, Tolerance, Vector};
