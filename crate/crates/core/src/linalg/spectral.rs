//! Rank, null space and least squares, all read off the spectrum of `AᵀA`.

use serde::Serialize;

use super::{check_dim, DenseMatrix, DenseVector, LinalgError, Result, SymEigen};

/// Default relative tolerance on singular values for [`rank`].
///
/// An eigenvalue `λ` of `AᵀA` counts when `λ > tol²·λ_max`, and this default
/// makes that threshold `n·ε·λ_max` with `n = max(rows, cols)`, the attainable
/// accuracy of eigenvalues of a formed Gram matrix.
pub fn default_rank_tol(a: &DenseMatrix) -> f64 {
    let n = a.rows().max(a.cols()).max(1) as f64;
    (n * f64::EPSILON).sqrt()
}

fn threshold(eig: &SymEigen, tol: f64) -> f64 {
    tol * tol * eig.max().max(0.0)
}

/// Number of eigenvalues of `AᵀA` above `tol²·λ_max`.
pub fn rank(a: &DenseMatrix, tol: f64) -> Result<usize> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(LinalgError::InvalidTolerance(tol));
    }
    let eig = SymEigen::new(&a.gram())?;
    Ok(count_above(&eig, tol))
}

/// [`rank`] with [`default_rank_tol`].
pub fn numerical_rank(a: &DenseMatrix) -> Result<usize> {
    rank(a, default_rank_tol(a))
}

fn count_above(eig: &SymEigen, tol: f64) -> usize {
    if eig.max() <= 0.0 {
        return 0;
    }
    let thr = threshold(eig, tol);
    eig.eigenvalues.iter().filter(|&&l| l > thr).count()
}

/// Orthonormal basis of `null(A)`, from the eigenvectors of `AᵀA` whose
/// eigenvalues fall at or below the default rank threshold.
pub fn null_space(a: &DenseMatrix) -> Result<Vec<DenseVector>> {
    let eig = SymEigen::new(&a.gram())?;
    let rank = count_above(&eig, default_rank_tol(a));
    let nullity = a.cols() - rank;
    // ascending order puts the null directions first
    Ok((0..nullity).map(|j| eig.eigenvectors.column(j)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeastSquares {
    /// Minimum-norm minimizer of `‖Ax − b‖₂`.
    pub solution: DenseVector,
    pub min_residual: f64,
}

/// Minimum-norm least-squares solution through the eigen-decomposition
/// pseudo-inverse of `AᵀA`: `x = Σ qᵢ (qᵢᵀAᵀb)/λᵢ` over the retained modes.
pub fn least_squares(a: &DenseMatrix, b: &DenseVector) -> Result<LeastSquares> {
    check_dim("least_squares", a.rows(), b.dim())?;
    let eig = SymEigen::new(&a.gram())?;
    let atb = a.transpose_mat_vec(b)?;
    let n = a.cols();
    let thr = threshold(&eig, default_rank_tol(a));
    let mut x = vec![0.0; n];
    if eig.max() > 0.0 {
        for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= thr {
                continue;
            }
            let q = eig.eigenvectors.column(j);
            let coeff = q.dot(&atb)? / lambda;
            for (xi, qi) in x.iter_mut().zip(q.iter()) {
                *xi += coeff * qi;
            }
        }
    }
    let solution = DenseVector::new(x)?;
    let min_residual = a.mat_vec(&solution)?.sub(b)?.norm();
    Ok(LeastSquares {
        solution,
        min_residual,
    })
}

/// Orthonormalizes the columns of a square matrix (modified Gram–Schmidt,
/// two passes). Fails with [`LinalgError::Singular`] on a dependent column.
pub fn orthonormalize_columns(m: &DenseMatrix) -> Result<DenseMatrix> {
    let n = m.require_square()?;
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| m.column(j).into_vec()).collect();
    for j in 0..n {
        let original = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        for _pass in 0..2 {
            for k in 0..j {
                let proj: f64 = cols[j].iter().zip(&cols[k]).map(|(a, b)| a * b).sum();
                let (head, tail) = cols.split_at_mut(j);
                for (v, q) in tail[0].iter_mut().zip(&head[k]) {
                    *v -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-10 * original || norm == 0.0 {
            return Err(LinalgError::Singular { index: j });
        }
        cols[j].iter_mut().for_each(|v| *v /= norm);
    }
    let mut q = DenseMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            q[(i, j)] = *v;
        }
    }
    Ok(q)
}
