use super::LinalgError;
use super::{check_dim, DenseMatrix, DenseVector, Result};

/// LU factorization with partial pivoting, `P·A = L·U`.
///
/// `L` (unit diagonal) and `U` share one packed buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Lu {
    packed: DenseMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factorizes a square matrix. A pivot at or below `n·ε·max|A|` is treated
    /// as an exact zero and reported as [`LinalgError::Singular`].
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        let n = a.require_square()?;
        let mut m = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let tiny = (n as f64) * f64::EPSILON * a.max_abs();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, m[(i, k)].abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if pivot <= tiny || pivot == 0.0 {
                return Err(LinalgError::Singular { index: k });
            }
            if p != k {
                for j in 0..n {
                    let tmp = m[(k, j)];
                    m[(k, j)] = m[(p, j)];
                    m[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let ukk = m[(k, k)];
            for i in (k + 1)..n {
                let factor = m[(i, k)] / ukk;
                m[(i, k)] = factor;
                if factor != 0.0 {
                    for j in (k + 1)..n {
                        m[(i, j)] -= factor * m[(k, j)];
                    }
                }
            }
        }
        Ok(Self { packed: m, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, r: &DenseVector) -> Result<DenseVector> {
        let n = self.dim();
        check_dim("lu_solve", n, r.dim())?;
        let m = &self.packed;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| r[p]).collect();
        for i in 0..n {
            let mut v = y[i];
            for k in 0..i {
                v -= m[(i, k)] * y[k];
            }
            y[i] = v;
        }
        for i in (0..n).rev() {
            let mut v = y[i];
            for k in (i + 1)..n {
                v -= m[(i, k)] * y[k];
            }
            y[i] = v / m[(i, i)];
        }
        Ok(DenseVector::from_vec_unchecked(y))
    }
}
