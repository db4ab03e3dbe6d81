//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's factorizations or eigensolver.

#![allow(dead_code)]

use neurodyn::linalg::{DenseMatrix, DenseVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn a_s() -> DenseMatrix {
    DenseMatrix::from_rows(&[[1.0, -1.0, 0.0], [-1.0, 2.0, 1.0], [0.0, 1.0, 1.0]]).unwrap()
}

pub fn vector(x: &[f64]) -> DenseVector {
    DenseVector::from_slice(x).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    let data = (0..rows * cols)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    DenseMatrix::new(rows, cols, data).unwrap()
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, range: f64) -> DenseVector {
    DenseVector::new((0..n).map(|_| rng.random_range(-range..range)).collect()).unwrap()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    let m = random_matrix(rng, n, n);
    m.add(&m.transpose()).unwrap().scale(0.5)
}

/// Gauss–Jordan elimination with partial pivoting on row-vectors.
pub fn gauss_jordan(a: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let n = a.rows();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        assert!(p.abs() > 1e-300, "oracle hit a singular matrix");
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n]).collect()
}

/// Eigenvalues of a symmetric 2×2 or 3×3 matrix from its characteristic
/// polynomial (quadratic formula, trigonometric cubic), ascending.
pub fn char_poly_eigenvalues(s: &DenseMatrix) -> Vec<f64> {
    match s.rows() {
        1 => vec![s[(0, 0)]],
        2 => {
            let (a, b, d) = (s[(0, 0)], s[(0, 1)], s[(1, 1)]);
            let mean = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
            vec![mean - r, mean + r]
        }
        3 => {
            let q = (s[(0, 0)] + s[(1, 1)] + s[(2, 2)]) / 3.0;
            let p1 = s[(0, 1)].powi(2) + s[(0, 2)].powi(2) + s[(1, 2)].powi(2);
            let p2 = (s[(0, 0)] - q).powi(2)
                + (s[(1, 1)] - q).powi(2)
                + (s[(2, 2)] - q).powi(2)
                + 2.0 * p1;
            let p = (p2 / 6.0).sqrt();
            if p == 0.0 {
                return vec![q, q, q];
            }
            let bm = |i: usize, j: usize| (s[(i, j)] - if i == j { q } else { 0.0 }) / p;
            let det = bm(0, 0) * (bm(1, 1) * bm(2, 2) - bm(1, 2) * bm(2, 1))
                - bm(0, 1) * (bm(1, 0) * bm(2, 2) - bm(1, 2) * bm(2, 0))
                + bm(0, 2) * (bm(1, 0) * bm(2, 1) - bm(1, 1) * bm(2, 0));
            let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
            let l1 = q + 2.0 * p * phi.cos();
            let l3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
            let l2 = 3.0 * q - l1 - l3;
            let mut v = vec![l1, l2, l3];
            v.sort_by(f64::total_cmp);
            v
        }
        n => panic!("no closed form for n = {n}"),
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
