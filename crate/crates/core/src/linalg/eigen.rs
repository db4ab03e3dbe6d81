use super::{DenseMatrix, LinalgError, Result, SYMMETRY_TOL};

/// Eigen-decomposition `S = Q·diag(λ)·Qᵀ` of a real symmetric matrix.
///
/// Eigenvalues are sorted ascending; column `i` of `eigenvectors` pairs with
/// `eigenvalues[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DenseMatrix,
}

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;

impl SymEigen {
    /// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops
    /// below `1e-12·‖S‖_F` (at most 100 sweeps).
    pub fn new(s: &DenseMatrix) -> Result<Self> {
        let mut a = s.symmetrized(SYMMETRY_TOL)?;
        let n = a.rows();
        let mut q = DenseMatrix::identity(n);
        let target = OFF_DIAGONAL_TOL * a.frobenius_norm();

        let sweep = |a: &mut DenseMatrix, q: &mut DenseMatrix| {
            for p in 0..n {
                for r in (p + 1)..n {
                    rotate(a, q, p, r);
                }
            }
        };
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= target {
                converged = true;
                break;
            }
            sweep(&mut a, &mut q);
        }
        if !converged && off_diagonal_norm(&a) > target {
            return Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS });
        }
        // Convergence is quadratic, so one more sweep takes the eigenvectors
        // from ~1e-12 to rounding level.
        if off_diagonal_norm(&a) > 0.0 {
            sweep(&mut a, &mut q);
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
        let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
        let mut eigenvectors = DenseMatrix::zeros(n, n);
        for (col, &src) in order.iter().enumerate() {
            for row in 0..n {
                eigenvectors[(row, col)] = q[(row, src)];
            }
        }
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `Q·diag(f(λ))·Qᵀ`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let n = self.dim();
        let q = &self.eigenvectors;
        let d: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = (0..n).map(|k| q[(i, k)] * d[k] * q[(j, k)]).sum();
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.reconstruct_with(|l| l)
    }
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += 2.0 * a[(i, j)] * a[(i, j)];
        }
    }
    sum.sqrt()
}

/// Annihilates `a[p][r]` with a plane rotation and accumulates it into `q`.
fn rotate(a: &mut DenseMatrix, q: &mut DenseMatrix, p: usize, r: usize) {
    let apr = a[(p, r)];
    if apr == 0.0 {
        return;
    }
    let n = a.rows();
    let theta = (a[(r, r)] - a[(p, p)]) / (2.0 * apr);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akr = a[(k, r)];
        a[(k, p)] = c * akp - s * akr;
        a[(k, r)] = s * akp + c * akr;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let ark = a[(r, k)];
        a[(p, k)] = c * apk - s * ark;
        a[(r, k)] = s * apk + c * ark;
    }
    a[(p, r)] = 0.0;
    a[(r, p)] = 0.0;

    for k in 0..n {
        let qkp = q[(k, p)];
        let qkr = q[(k, r)];
        q[(k, p)] = c * qkp - s * qkr;
        q[(k, r)] = s * qkp + c * qkr;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_s() -> DenseMatrix {
        DenseMatrix::from_rows(&[[1.0, -1.0, 0.0], [-1.0, 2.0, 1.0], [0.0, 1.0, 1.0]]).unwrap()
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn identity_spectrum() {
        let e = SymEigen::new(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn singular_example_spectrum() {
        let e = SymEigen::new(&a_s()).unwrap();
        assert_close(&e.eigenvalues, &[0.0, 1.0, 3.0], 1e-12);
        let e2 = SymEigen::new(&a_s().gram()).unwrap();
        assert_close(&e2.eigenvalues, &[0.0, 1.0, 9.0], 1e-12);
    }

    #[test]
    fn null_vector_of_singular_example() {
        let e = SymEigen::new(&a_s()).unwrap();
        let v = e.eigenvectors.column(0);
        let s = v[0].signum();
        let inv = 1.0 / 3f64.sqrt();
        assert_close(&v.scale(s).into_vec(), &[inv, inv, -inv], 1e-12);
    }

    #[test]
    fn rejects_non_symmetric() {
        let s = DenseMatrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            SymEigen::new(&s),
            Err(LinalgError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn empty_and_scalar() {
        let e = SymEigen::new(&DenseMatrix::from_rows(&[[-2.5]]).unwrap()).unwrap();
        assert_eq!(e.eigenvalues, vec![-2.5]);
        assert_eq!(SymEigen::new(&DenseMatrix::zeros(0, 0)).unwrap().dim(), 0);
    }
}
