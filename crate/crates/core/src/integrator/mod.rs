//! Fixed-step RK4 integration of ODE-classified models.
//!
//! The mass matrix is factored once in [`SolvableModel::new`] (Cholesky when
//! symmetric positive definite, pivoted LU otherwise) and every RK4 stage
//! solves `M·k = −γ·K·(Ax − b)` against that factor. DAE-classified models
//! are refused at that point.

mod oracle;
mod trajectory;

pub use oracle::{closed_form_error, reference_equilibrium, ErrorPropagator};
pub use trajectory::{Trajectory, TrajectoryMeta};

use thiserror::Error;

use crate::linalg::{Cholesky, DenseVector, LinalgError, Lu, SYMMETRY_TOL};
use crate::models::{DynamicsClass, ModelError, ModelKind, NeuralModel};

/// Components beyond this magnitude abort integration as divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

/// Real-axis stability limit of classical RK4, `h·λ ≤ 2.78`.
const RK4_STABILITY_LIMIT: f64 = 2.78;
const STEP_SAFETY: f64 = 0.5;
const POWER_ITERATIONS: usize = 50;
const POWER_TOL: f64 = 1e-8;

/// Bounds for the default integration step, in seconds.
pub const MIN_STEP: f64 = 1e-8;
pub const MAX_STEP: f64 = 1e-3;
/// Upper bound on `stable_step` when the dynamics have no decaying mode.
const MAX_STABLE_STEP: f64 = 1.0;

/// Default trajectories keep at most this many samples.
pub const MAX_SAMPLES: usize = 5000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrateError {
    #[error(
        "{kind} is a DAE: its mass matrix is singular (rank {rank} < {n}), so the system \
         cannot be integrated as an ODE"
    )]
    DaeNotIntegrable {
        kind: ModelKind,
        rank: usize,
        n: usize,
    },
    #[error("factorization of the mass matrix failed: {0}")]
    FactorizationFailed(LinalgError),
    #[error(
        "state became non-finite or exceeded {DIVERGENCE_LIMIT:e} at t = {time:?} s with step \
         h = {step:e} s; try the automatic step size"
    )]
    NonFiniteState { time: Option<f64>, step: f64 },
    #[error("step {step:e} s exceeds the stable step {stable:e} s")]
    StepTooLarge { step: f64, stable: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("closed-form error dynamics are only available for GNN and IGNN, not {0}")]
    UnsupportedKind(ModelKind),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub type Result<T, E = IntegrateError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
enum MassFactor {
    Cholesky(Cholesky),
    Lu(Lu),
}

impl MassFactor {
    fn new(model: &NeuralModel) -> Result<Self> {
        let mass = model.mass();
        if mass.is_symmetric(SYMMETRY_TOL) {
            if let Ok(chol) = Cholesky::factor(mass) {
                return Ok(Self::Cholesky(chol));
            }
        }
        Lu::factor(mass)
            .map(Self::Lu)
            .map_err(IntegrateError::FactorizationFailed)
    }

    fn solve(&self, r: &DenseVector) -> Result<DenseVector, LinalgError> {
        match self {
            Self::Cholesky(f) => f.solve(r),
            Self::Lu(f) => f.solve(r),
        }
    }
}

/// An ODE-classified model with its mass matrix factored.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvableModel {
    model: NeuralModel,
    factor: MassFactor,
    stable_step: f64,
}

impl SolvableModel {
    pub fn new(model: NeuralModel) -> Result<Self> {
        if model.classification() == DynamicsClass::Dae {
            let rank = crate::linalg::numerical_rank(model.mass())?;
            return Err(IntegrateError::DaeNotIntegrable {
                kind: model.kind(),
                rank,
                n: model.n(),
            });
        }
        let factor = MassFactor::new(&model)?;
        let rho = spectral_radius(&model, &factor)?;
        let stable_step = stable_step_for(model.gamma(), rho);
        Ok(Self {
            model,
            factor,
            stable_step,
        })
    }

    pub fn model(&self) -> &NeuralModel {
        &self.model
    }

    /// Largest step for which RK4 stays stable, with a 0.5 safety factor.
    pub fn stable_step(&self) -> f64 {
        self.stable_step
    }

    /// `stable_step / 10`, clamped to `[MIN_STEP, MAX_STEP]`.
    pub fn default_step(&self) -> f64 {
        (self.stable_step / 10.0).clamp(MIN_STEP, MAX_STEP)
    }

    /// `ẋ = M⁻¹·(−γ·K·(Ax − b))`
    pub fn velocity(&self, x: &DenseVector) -> Result<DenseVector, LinalgError> {
        self.factor.solve(&self.model.rhs(x)?)
    }

    /// One classical fourth-order Runge–Kutta step.
    pub fn rk4_step(&self, x: &DenseVector, h: f64) -> Result<DenseVector> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(IntegrateError::InvalidParameter(format!(
                "step size must be positive, got {h}"
            )));
        }
        let k1 = self.velocity(x)?;
        let k2 = self.velocity(&x.add_scaled(0.5 * h, &k1)?)?;
        let k3 = self.velocity(&x.add_scaled(0.5 * h, &k2)?)?;
        let k4 = self.velocity(&x.add_scaled(h, &k3)?)?;
        let next: Vec<f64> = (0..x.dim())
            .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        if next
            .iter()
            .any(|v| !v.is_finite() || v.abs() > DIVERGENCE_LIMIT)
        {
            return Err(IntegrateError::NonFiniteState {
                time: None,
                step: h,
            });
        }
        Ok(DenseVector::new(next)?)
    }

    /// Marches from `x0` to `t_end` with fixed step `h`, storing every
    /// `stride`-th state and always the final one. The last step is shortened
    /// so the march ends exactly at `t_end`.
    pub fn integrate(
        &self,
        x0: &DenseVector,
        t_end: f64,
        h: f64,
        stride: usize,
    ) -> Result<Trajectory> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(IntegrateError::InvalidParameter(format!(
                "t_end must be positive, got {t_end}"
            )));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(IntegrateError::InvalidParameter(format!(
                "step size must be positive, got {h}"
            )));
        }
        if h > self.stable_step * (1.0 + 1e-12) {
            return Err(IntegrateError::StepTooLarge {
                step: h,
                stable: self.stable_step,
            });
        }
        if stride == 0 {
            return Err(IntegrateError::InvalidParameter(
                "stride must be at least 1".into(),
            ));
        }
        let problem = self.model.problem();
        let n_steps = ((t_end / h) - 1e-9).ceil().max(1.0) as usize;

        let mut traj = Trajectory::new(TrajectoryMeta {
            kind: self.model.kind(),
            gamma: self.model.gamma(),
            step: h,
            stride,
            t_end,
            seed: None,
        });
        traj.push(0.0, x0.clone(), problem.residual(x0)?);

        let mut x = x0.clone();
        for k in 1..=n_steps {
            let last = k == n_steps;
            let t_prev = (k - 1) as f64 * h;
            let dt = if last { t_end - t_prev } else { h };
            x = self.rk4_step(&x, dt).map_err(|e| match e {
                IntegrateError::NonFiniteState { step, .. } => IntegrateError::NonFiniteState {
                    time: Some(t_prev + dt),
                    step,
                },
                other => other,
            })?;
            if last || k % stride == 0 {
                let t = if last { t_end } else { k as f64 * h };
                traj.push(t, x.clone(), problem.residual(&x)?);
            }
        }
        Ok(traj)
    }

    /// Integrates with the default step and a stride that keeps at most
    /// [`MAX_SAMPLES`] samples.
    pub fn integrate_default(&self, x0: &DenseVector, t_end: f64) -> Result<Trajectory> {
        let h = self.default_step();
        let stride = default_stride(t_end, h);
        self.integrate(x0, t_end, h, stride)
    }
}

/// Factors the mass matrix of an ODE-classified model.
pub fn prefactorize(model: NeuralModel) -> Result<SolvableModel> {
    SolvableModel::new(model)
}

/// `h = 0.5 · 2.78 / (γ·ρ)` with `ρ` the largest eigenvalue of `M⁻¹·K·A`.
pub fn auto_step_size(model: &NeuralModel) -> Result<f64> {
    Ok(SolvableModel::new(model.clone())?.stable_step())
}

/// Smallest stride keeping a run of `t_end / h` steps within [`MAX_SAMPLES`].
pub fn default_stride(t_end: f64, h: f64) -> usize {
    let steps = (t_end / h).ceil().max(1.0) as usize;
    steps.div_ceil(MAX_SAMPLES - 1).max(1)
}

fn stable_step_for(gamma: f64, rho: f64) -> f64 {
    if rho <= 0.0 {
        return MAX_STABLE_STEP;
    }
    (STEP_SAFETY * RK4_STABILITY_LIMIT / (gamma * rho)).clamp(MIN_STEP, MAX_STABLE_STEP)
}

/// Power iteration on `M⁻¹·K·A`. Its eigenvalues are real and non-negative
/// for all four kinds (the operator is similar to a symmetric PSD matrix).
fn spectral_radius(model: &NeuralModel, factor: &MassFactor) -> Result<f64> {
    let a = model.problem().a();
    let gain = model.gain();
    let n = model.n();
    let apply = |v: &DenseVector| -> Result<DenseVector, LinalgError> {
        factor.solve(&gain.mat_vec(&a.mat_vec(v)?)?)
    };
    // deterministic start with no special symmetry
    let mut v = DenseVector::new((0..n).map(|i| 1.0 / (i as f64 + 1.0)).collect())?;
    v = v.scale(1.0 / v.norm());
    let mut estimate = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = apply(&v)?;
        let norm = w.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let converged = (norm - estimate).abs() <= POWER_TOL * norm;
        estimate = norm;
        v = w.scale(1.0 / norm);
        if converged {
            break;
        }
    }
    Ok(estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;
    use crate::models::LinearProblem;

    fn a_s() -> DenseMatrix {
        DenseMatrix::from_rows(&[[1.0, -1.0, 0.0], [-1.0, 2.0, 1.0], [0.0, 1.0, 1.0]]).unwrap()
    }

    fn model(kind: ModelKind, a: DenseMatrix, b: &[f64], gamma: f64) -> NeuralModel {
        let p = LinearProblem::new(a, DenseVector::from_slice(b).unwrap()).unwrap();
        NeuralModel::new(kind, p, gamma).unwrap()
    }

    #[test]
    fn prefactorize_refuses_dae() {
        let m = model(ModelKind::Znn, a_s(), &[1.0, 1.0, 1.0], 1000.0);
        let err = prefactorize(m).unwrap_err();
        assert!(matches!(
            err,
            IntegrateError::DaeNotIntegrable {
                kind: ModelKind::Znn,
                rank: 2,
                n: 3
            }
        ));
        assert!(err.to_string().contains("DAE"));
        assert!(err.to_string().contains("singular"));
    }

    #[test]
    fn prefactorize_accepts_ode_models() {
        let ignn = model(ModelKind::Ignn, a_s(), &[1.0, 1.0, 1.0], 1000.0);
        assert!(matches!(
            prefactorize(ignn).unwrap().factor,
            MassFactor::Cholesky(_)
        ));
        let gnn = model(ModelKind::Gnn, a_s(), &[1.0, 1.0, 1.0], 1000.0);
        assert!(prefactorize(gnn).is_ok());
        let a = DenseMatrix::from_rows(&[[2.0, 1.0], [0.0, 1.0]]).unwrap();
        let znn = model(ModelKind::Znn, a, &[1.0, 1.0], 10.0);
        assert!(matches!(
            prefactorize(znn).unwrap().factor,
            MassFactor::Lu(_)
        ));
    }

    #[test]
    fn auto_step_examples() {
        let ignn = model(ModelKind::Ignn, DenseMatrix::identity(3), &[1.0; 3], 1000.0);
        assert!((auto_step_size(&ignn).unwrap() - 2.78e-3).abs() < 1e-12);
        let gnn = model(ModelKind::Gnn, DenseMatrix::identity(3), &[1.0; 3], 1000.0);
        assert!((auto_step_size(&gnn).unwrap() - 1.39e-3).abs() < 1e-12);
        let gnn2 = model(ModelKind::Gnn, DenseMatrix::identity(3), &[1.0; 3], 2000.0);
        assert!((auto_step_size(&gnn2).unwrap() - 0.5 * 1.39e-3).abs() < 1e-12);
    }

    #[test]
    fn auto_step_on_dae_is_refused() {
        let znn = model(ModelKind::Znn, a_s(), &[0.0, 1.0, 1.0], 1.0);
        assert!(matches!(
            auto_step_size(&znn),
            Err(IntegrateError::DaeNotIntegrable { .. })
        ));
    }

    #[test]
    fn zero_matrix_uses_capped_step() {
        let gnn = model(ModelKind::Gnn, DenseMatrix::zeros(2, 2), &[0.0, 0.0], 1.0);
        let s = prefactorize(gnn).unwrap();
        assert_eq!(s.stable_step(), MAX_STABLE_STEP);
        assert_eq!(s.default_step(), MAX_STEP);
    }

    #[test]
    fn scalar_step_matches_taylor_polynomial() {
        let gamma = 1000.0;
        let s = prefactorize(model(
            ModelKind::Ignn,
            DenseMatrix::identity(1),
            &[0.0],
            gamma,
        ))
        .unwrap();
        let h = 1e-4;
        let z = -gamma * h / 2.0;
        let taylor = 1.0 + z + z * z / 2.0 + z.powi(3) / 6.0 + z.powi(4) / 24.0;
        let x1 = s.rk4_step(&DenseVector::filled(1, 1.0), h).unwrap();
        assert!((x1[0] - taylor).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_is_preserved() {
        let a = DenseMatrix::from_rows(&[[3.0, 1.0], [1.0, 2.0]]).unwrap();
        let m = model(ModelKind::Ignn, a, &[1.0, -1.0], 1000.0);
        let x_star = m.problem().x_star().unwrap().clone();
        let s = prefactorize(m).unwrap();
        let x1 = s.rk4_step(&x_star, s.default_step()).unwrap();
        assert!(x1.sub(&x_star).unwrap().max_abs() <= 1e-14);
    }

    #[test]
    fn step_consistency_for_small_h() {
        let a = DenseMatrix::from_rows(&[[3.0, 1.0], [1.0, 2.0]]).unwrap();
        let s = prefactorize(model(ModelKind::Ignn, a, &[1.0, -1.0], 10.0)).unwrap();
        let x = DenseVector::from_slice(&[0.3, -0.7]).unwrap();
        let v = s.velocity(&x).unwrap();
        for h in [1e-3, 1e-4] {
            let euler = x.add_scaled(h, &v).unwrap();
            let gap = s.rk4_step(&x, h).unwrap().sub(&euler).unwrap().norm();
            // second-order remainder
            assert!(gap < 50.0 * h * h, "h={h} gap={gap}");
        }
    }

    #[test]
    fn divergence_is_detected() {
        let s = prefactorize(model(ModelKind::Gnn, DenseMatrix::identity(1), &[0.0], 1.0)).unwrap();
        // far beyond the stability limit, bypassing integrate's step check
        let mut x = DenseVector::filled(1, 1.0);
        let err = loop {
            match s.rk4_step(&x, 100.0) {
                Ok(next) => x = next,
                Err(e) => break e,
            }
        };
        assert!(matches!(err, IntegrateError::NonFiniteState { step, .. } if step == 100.0));
    }

    #[test]
    fn integrate_validates_parameters() {
        let s = prefactorize(model(
            ModelKind::Gnn,
            DenseMatrix::identity(2),
            &[1.0, 1.0],
            1.0,
        ))
        .unwrap();
        let x0 = DenseVector::zeros(2);
        assert!(s.integrate(&x0, 0.0, 1e-3, 1).is_err());
        assert!(s.integrate(&x0, 1.0, 1e-3, 0).is_err());
        assert!(matches!(
            s.integrate(&x0, 1.0, 10.0, 1),
            Err(IntegrateError::StepTooLarge { .. })
        ));
    }

    #[test]
    fn integrate_ends_exactly_at_t_end() {
        let s = prefactorize(model(
            ModelKind::Gnn,
            DenseMatrix::identity(2),
            &[1.0, 1.0],
            1.0,
        ))
        .unwrap();
        let traj = s.integrate(&DenseVector::zeros(2), 0.105, 0.01, 3).unwrap();
        assert_eq!(traj.times[0], 0.0);
        assert_eq!(*traj.times.last().unwrap(), 0.105);
        // steps 3, 6, 9 and the final shortened step 11
        assert_eq!(traj.len(), 5);
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn default_stride_bounds_sample_count() {
        assert_eq!(default_stride(1.0, 1e-3), 1);
        let stride = default_stride(1.0, 1e-5);
        assert!(100_000 / stride < MAX_SAMPLES);
    }
}
