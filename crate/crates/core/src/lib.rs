//! Piecewise-linear finite elements for Neumann problems `-Δy + y (+ d(y)) = f`,
//! `∂ₙy = g` on polygonal sector domains with corner-graded triangulations.
//!
//! The crate is organized bottom-up:
//!
//! * [`geometry`]: sector domains, coarse fan meshes, red refinement, radial
//!   grading towards a corner, mesh-size audits and the ASCII mesh format.
//! * [`quadrature`]: triangle and edge rules.
//! * [`linalg`]: CSR storage and Jacobi-preconditioned conjugate gradients.
//! * [`assembly`]: stiffness-plus-mass matrices and load vectors.
//! * [`solver`]: linear solves, Newton for the semilinear problem, Ritz projection.
//! * [`benchmark`]: the `r^λ cos(λφ)` benchmark, error norms, EOC and studies.
//!
//! Element loops, row-wise products and study levels run on rayon when the
//! `parallel` feature is enabled (the default). See [`Exec`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod benchmark;
mod error;
mod exec;
pub mod geometry;
pub mod linalg;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result};
pub use exec::Exec;
pub use geometry::Point;
