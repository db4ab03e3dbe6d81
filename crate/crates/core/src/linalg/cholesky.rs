use super::{check_dim, DenseMatrix, DenseVector, LinalgError, Result, SYMMETRY_TOL};

/// Lower-triangular factor `L` with `S = L·Lᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    lower: DenseMatrix,
}

impl Cholesky {
    /// Factorizes a symmetric positive-definite matrix.
    ///
    /// The input is symmetrized first, so asymmetry up to [`SYMMETRY_TOL`]
    /// relative to the largest entry is absorbed. A non-positive pivot means
    /// `s` is not positive definite and is reported with its index; pivots at
    /// rounding level (`≤ n·ε·max sᵢᵢ`) count as zero.
    pub fn factor(s: &DenseMatrix) -> Result<Self> {
        let s = s.symmetrized(SYMMETRY_TOL)?;
        let n = s.rows();
        let max_diag = (0..n).fold(0.0f64, |m, i| m.max(s[(i, i)].abs()));
        let tiny = n as f64 * f64::EPSILON * max_diag;
        let mut l = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let mut diag = s[(j, j)];
            for k in 0..j {
                diag -= l[(j, k)] * l[(j, k)];
            }
            if diag <= tiny || !diag.is_finite() {
                return Err(LinalgError::NotPositiveDefinite {
                    index: j,
                    pivot: diag,
                });
            }
            let ljj = diag.sqrt();
            l[(j, j)] = ljj;
            for i in (j + 1)..n {
                let mut v = s[(i, j)];
                for k in 0..j {
                    v -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = v / ljj;
            }
        }
        Ok(Self { lower: l })
    }

    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    pub fn lower(&self) -> &DenseMatrix {
        &self.lower
    }

    /// Solves `S·y = r` by forward then backward substitution.
    pub fn solve(&self, r: &DenseVector) -> Result<DenseVector> {
        let n = self.dim();
        check_dim("chol_solve", n, r.dim())?;
        let l = &self.lower;
        let mut y = r.as_slice().to_vec();
        for i in 0..n {
            let mut v = y[i];
            for k in 0..i {
                v -= l[(i, k)] * y[k];
            }
            y[i] = v / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut v = y[i];
            for k in (i + 1)..n {
                v -= l[(k, i)] * y[k];
            }
            y[i] = v / l[(i, i)];
        }
        Ok(DenseVector::from_vec_unchecked(y))
    }

    /// `L·Lᵀ`
    pub fn reconstruct(&self) -> DenseMatrix {
        self.lower.outer_gram()
    }
}
