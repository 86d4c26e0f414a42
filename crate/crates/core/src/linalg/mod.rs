//! Sparse symmetric linear algebra.

mod cg;
mod csr;

pub use cg::{cg_solve, CgOptions, CgReport};
pub use csr::SparseMatrixCsr;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_max(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}
