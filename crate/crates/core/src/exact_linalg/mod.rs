//! Exact integer and rational linear algebra: Hermite and Smith normal
//! forms, integral solving, and complete enumeration of vectors of a given
//! norm in a definite lattice. Nothing here touches floating point.

mod enumerate;
mod hnf;
mod lll;
mod matrix;
mod snf;

use thiserror::Error;

pub use enumerate::{enumerate_norm_vectors, is_positive_definite};
pub use hnf::{echelon_rank, hnf, left_kernel, row_lattice_basis, solve_integral};
pub use matrix::{IntMatrix, RatMatrix};
pub use snf::{snf, Snf};

pub(crate) use hnf::solve_echelon;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("no integral solution")]
    NoSolution,
    #[error("form is not definite")]
    IndefiniteForm,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("target norm must be negative for a negative definite form")]
    NonNegativeTarget,
    #[error("dimension mismatch")]
    DimensionMismatch,
}
