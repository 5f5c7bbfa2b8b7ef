//! Sparse symmetric matrices with chordal structure.
//!
//! A symmetric matrix whose nonzero pattern is a chordal graph admits two
//! complementary decompositions. If it is PSD, a zero-fill Cholesky factor
//! along a perfect elimination ordering splits it into a sum of PSD terms
//! supported on the maximal cliques of the pattern. Conversely, a partial
//! matrix whose clique submatrices are all PSD can be filled in to a full
//! PSD matrix, and the maximum-determinant completion is computable clique
//! by clique down the clique tree. This crate implements both directions
//! together with the factorization, barrier, and projection primitives
//! the solver layers build on.
//!
//! Matrices here store the upper triangle of their pattern explicitly;
//! reads outside the pattern return zero, writes outside it are errors.

mod chol;
mod complete;
mod decompose;
mod error;
mod matrix;
mod ops;
mod pattern;

pub use chol::{barrier_value, projected_inverse, sparse_cholesky, CholeskyFactor};
pub use complete::{
    completion_check, max_det_complete, max_det_complete_with_tolerance, CompletionReport,
};
pub use decompose::{chordal_decompose, CliqueDecomposition};
pub use error::Error;
pub use matrix::SparseSymMatrix;
pub use ops::{add_inflated, extract, inflate, min_eigenvalue, project_pattern, psd_tolerance};
pub use pattern::SparsityPattern;
