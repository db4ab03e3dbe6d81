//! Dense real linear algebra at desk scale.
//!
//! Everything here is row-major `f64`. The module is self-contained: the
//! simulators only need products, a Cholesky factor for the positive-definite
//! mass matrix, a pivoted LU for the general case, and a cyclic Jacobi
//! eigensolver for the spectral quantities (minimum eigenvalues, modal rates,
//! numerical rank, least-squares and null-space oracles).

mod cholesky;
mod eigen;
mod lu;
mod matrix;
mod spectral;
mod vector;

pub use cholesky::Cholesky;
pub use eigen::SymEigen;
pub use lu::Lu;
pub use matrix::DenseMatrix;
pub use spectral::{
    default_rank_tol, least_squares, null_space, numerical_rank, orthonormalize_columns, rank,
    LeastSquares,
};
pub use vector::DenseVector;

use thiserror::Error;

/// Relative tolerance used for symmetry checks before symmetric factorizations.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("matrix is singular to working precision (pivot {index})")]
    Singular { index: usize },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
}

pub type Result<T, E = LinalgError> = std::result::Result<T, E>;

pub(crate) fn check_dim(op: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch {
            op,
            expected,
            found,
        })
    }
}
