//! Exact solution of the GNN and IGNN error dynamics.
//!
//! With `e = x − x_ref` for any equilibrium `x_ref`, both gradient-type models
//! reduce to linear error dynamics driven by `G = AᵀA`:
//!
//! ```text
//! GNN:   ė = −γ·G·e
//! IGNN:  (G + I)·ė = −γ·G·e
//! ```
//!
//! `G + I` and `G` share eigenvectors, so with `G = Q·diag(λ)·Qᵀ` every mode
//! decays independently at `γ·λ` (GNN) or `γ·λ/(1 + λ)` (IGNN). Zero
//! eigenvalues give constant modes, which is how singular `A` is handled.

use crate::linalg::{least_squares, null_space, DenseVector, SymEigen};
use crate::models::{LinearProblem, ModelKind, NeuralModel};

use super::{IntegrateError, Result};

/// Pre-computed eigenbasis for repeated evaluation of the error dynamics.
#[derive(Debug, Clone)]
pub struct ErrorPropagator {
    eigen: SymEigen,
    rates: Vec<f64>,
}

impl ErrorPropagator {
    pub fn new(model: &NeuralModel) -> Result<Self> {
        let modal = match model.kind() {
            ModelKind::Gnn => |l: f64| l,
            ModelKind::Ignn => |l: f64| l / (1.0 + l),
            other => return Err(IntegrateError::UnsupportedKind(other)),
        };
        let eigen = SymEigen::new(&model.problem().a().gram())?;
        let gamma = model.gamma();
        let rates = eigen
            .eigenvalues
            .iter()
            .map(|&l| gamma * modal(l.max(0.0)))
            .collect();
        Ok(Self { eigen, rates })
    }

    /// Decay rate of each eigenmode, in the eigensolver's ascending order.
    pub fn modal_rates(&self) -> &[f64] {
        &self.rates
    }

    /// `Q·diag(exp(−rᵢ·t))·Qᵀ·e0`
    pub fn at(&self, e0: &DenseVector, t: f64) -> Result<DenseVector> {
        let q = &self.eigen.eigenvectors;
        let coeffs = q.transpose_mat_vec(e0)?;
        let scaled = DenseVector::new(
            coeffs
                .iter()
                .zip(&self.rates)
                .map(|(c, r)| c * (-r * t).exp())
                .collect(),
        )?;
        Ok(q.mat_vec(&scaled)?)
    }
}

/// Error `e(t)` of a GNN or IGNN run started with error `e0`.
pub fn closed_form_error(model: &NeuralModel, e0: &DenseVector, t: f64) -> Result<DenseVector> {
    ErrorPropagator::new(model)?.at(e0, t)
}

/// The equilibrium a gradient-type run from `x0` settles at.
///
/// For a unique problem that is `x*`. Otherwise it is the minimum-norm
/// least-squares solution plus the null-space component of `x0`, since the
/// null modes of `AᵀA` never move.
pub fn reference_equilibrium(problem: &LinearProblem, x0: &DenseVector) -> Result<DenseVector> {
    if let Some(x_star) = problem.x_star() {
        return Ok(x_star.clone());
    }
    let mut x_ref = least_squares(problem.a(), problem.b())?.solution;
    for v in null_space(problem.a())? {
        x_ref = x_ref.add_scaled(v.dot(x0)?, &v)?;
    }
    Ok(x_ref)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    fn a_s() -> DenseMatrix {
        DenseMatrix::from_rows(&[[1.0, -1.0, 0.0], [-1.0, 2.0, 1.0], [0.0, 1.0, 1.0]]).unwrap()
    }

    fn model(kind: ModelKind, a: DenseMatrix, b: &[f64], gamma: f64) -> NeuralModel {
        let p = LinearProblem::new(a, DenseVector::from_slice(b).unwrap()).unwrap();
        NeuralModel::new(kind, p, gamma).unwrap()
    }

    #[test]
    fn initial_condition_is_returned_at_zero() {
        let m = model(ModelKind::Ignn, a_s(), &[1.0, 1.0, 1.0], 1000.0);
        let e0 = DenseVector::from_slice(&[0.4, -1.2, 2.0]).unwrap();
        let e = closed_form_error(&m, &e0, 0.0).unwrap();
        assert!(e.sub(&e0).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn identity_ignn_decays_at_half_gamma() {
        let m = model(ModelKind::Ignn, DenseMatrix::identity(3), &[1.0; 3], 1000.0);
        let e0 = DenseVector::from_slice(&[1.0, -2.0, 0.5]).unwrap();
        let e = closed_form_error(&m, &e0, 0.002).unwrap();
        let want = e0.scale((-1.0f64).exp());
        assert!(e.sub(&want).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn null_mode_is_preserved() {
        let m = model(ModelKind::Ignn, a_s(), &[1.0, 1.0, 1.0], 1000.0);
        let null = DenseVector::from_slice(&[1.0, 1.0, -1.0])
            .unwrap()
            .scale(1.0 / 3f64.sqrt());
        let e0 = DenseVector::from_slice(&[0.7, 1.9, -0.3]).unwrap();
        let c0 = null.dot(&e0).unwrap();
        for t in [1e-3, 1e-2, 1.0] {
            let e = closed_form_error(&m, &e0, t).unwrap();
            assert!((null.dot(&e).unwrap() - c0).abs() < 1e-12);
        }
    }

    #[test]
    fn zhang_models_are_unsupported() {
        let a = DenseMatrix::identity(2);
        for kind in [ModelKind::Znn, ModelKind::Iznn] {
            let m = model(kind, a.clone(), &[1.0, 1.0], 1.0);
            assert!(matches!(
                closed_form_error(&m, &DenseVector::zeros(2), 1.0),
                Err(IntegrateError::UnsupportedKind(k)) if k == kind
            ));
        }
    }

    #[test]
    fn reference_equilibrium_of_singular_problem() {
        let p =
            LinearProblem::new(a_s(), DenseVector::from_slice(&[1.0, 1.0, 1.0]).unwrap()).unwrap();
        let x0 = DenseVector::from_slice(&[1.0, 1.0, -1.0]).unwrap();
        let x_ref = reference_equilibrium(&p, &x0).unwrap();
        // gradient vanishes at x_ref
        let g = p
            .a()
            .transpose_mat_vec(&p.residual_vector(&x_ref).unwrap())
            .unwrap();
        assert!(g.max_abs() < 1e-12);
        // x0 lies in the null space, so x0 - x_ref has no null component
        let diff = x0.sub(&x_ref).unwrap();
        assert!(diff.dot(&x0).unwrap().abs() < 1e-12);
        assert!((p.residual(&x_ref).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }
}
