//! Problem generators and scripted simulation scenarios.
//!
//! * [`run_figure1`]: IGNN on a nonsingular system with `α = λ_min(AᵀA) =
//!   0.2345`, from several random initial states, checking exponential
//!   convergence and the measured decay rate.
//! * [`run_figure2`]: IGNN on the singular 3×3 example with an inconsistent
//!   or a consistent right-hand side, checking that the residual settles.
//! * [`compare_models`]: all four dynamics on one problem.
//!
//! Reports use milliseconds for every time field and 1/s for rates.
//! Independent runs execute in parallel and are collected in run order, so a
//! report depends only on its inputs.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    asymptotic_residual, attach_lyapunov, convergence_time, fit_decay, is_non_increasing,
    late_window, theoretical_rates, AnalysisError, LyapunovKind, RateReport,
};
use crate::integrator::{default_stride, prefactorize, IntegrateError, SolvableModel, Trajectory};
use crate::linalg::{
    least_squares, null_space, orthonormalize_columns, DenseMatrix, DenseVector, LinalgError,
    SymEigen,
};
use crate::models::{
    DynamicsClass, LinearProblem, ModelError, ModelKind, NeuralModel, Solvability,
};

pub const DEFAULT_SEED: u64 = 20190601;
pub const DEFAULT_GAMMA: f64 = 1000.0;
pub const DEFAULT_INITS: usize = 6;
/// `α` of the nonsingular scenario.
pub const FIGURE1_ALPHA: f64 = 0.2345;
pub const FIGURE1_T_END: f64 = 0.060;
pub const FIGURE2_T_END: f64 = 0.100;
/// Initial states and generated solutions are drawn from `[-2, 2]ⁿ`.
pub const INIT_RANGE: f64 = 2.0;
/// Slack allowed when testing monotone sequences.
pub const MONOTONE_SLACK: f64 = 1e-10;

/// Residual threshold `exp(−7)` used for convergence times.
pub fn default_threshold() -> f64 {
    (-7.0f64).exp()
}

/// Default singular values for the nonsingular scenario: `(√0.2345, 1, 2)`.
pub fn figure1_spectrum() -> Vec<f64> {
    vec![FIGURE1_ALPHA.sqrt(), 1.0, 2.0]
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T, E = ExperimentError> = std::result::Result<T, E>;

/// `U·diag(sigma)·Vᵀ` with `U`, `V` orthogonalized seeded Gaussian matrices.
/// Zeros in `sigma` are allowed and yield a singular matrix.
pub fn prescribed_matrix(sigma: &[f64], rng: &mut ChaCha8Rng) -> Result<DenseMatrix> {
    if sigma.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(ExperimentError::InvalidParameter(format!(
            "singular values must be finite and non-negative, got {sigma:?}"
        )));
    }
    let n = sigma.len();
    let u = random_orthogonal(n, rng)?;
    let v = random_orthogonal(n, rng)?;
    let us = u.matmul(&DenseMatrix::from_diagonal(sigma)?)?;
    Ok(us.matmul(&v.transpose())?)
}

fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Result<DenseMatrix> {
    let data = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    Ok(orthonormalize_columns(&DenseMatrix::new(n, n, data)?)?)
}

fn uniform_vector(n: usize, rng: &mut ChaCha8Rng) -> DenseVector {
    DenseVector::new(
        (0..n)
            .map(|_| rng.random_range(-INIT_RANGE..=INIT_RANGE))
            .collect(),
    )
    .expect("uniform draws are finite")
}

/// Nonsingular problem with singular values `sigma` and `b = A·x_target`,
/// `x_target` uniform in `[-2, 2]ⁿ`. Then `λ_min(AᵀA) = sigma_min²`.
pub fn gen_prescribed(n: usize, sigma: &[f64], seed: u64) -> Result<LinearProblem> {
    if sigma.len() != n {
        return Err(ExperimentError::InvalidParameter(format!(
            "expected {n} singular values, got {}",
            sigma.len()
        )));
    }
    if sigma.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(ExperimentError::InvalidParameter(
            "singular values must be positive".into(),
        ));
    }
    if sigma.windows(2).any(|w| w[1] < w[0]) {
        return Err(ExperimentError::InvalidParameter(
            "singular values must be ascending".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = prescribed_matrix(sigma, &mut rng)?;
    let x_target = uniform_vector(n, &mut rng);
    let b = a.mat_vec(&x_target)?;
    Ok(LinearProblem::new(a, b)?)
}

/// `count` initial states uniform in `[-2, 2]ⁿ`, from a stream independent of
/// the one used by [`gen_prescribed`] for the same seed.
pub fn initial_states(n: usize, count: usize, seed: u64) -> Vec<DenseVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    (0..count).map(|_| uniform_vector(n, &mut rng)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularCase {
    NoSolution,
    MultiSolution,
}

/// The singular 3×3 example `[[1,−1,0],[−1,2,1],[0,1,1]]` with
/// `b = [1,1,1]` (no solution) or `b = [0,1,1]` (infinitely many).
pub fn paper_singular(case: SingularCase) -> LinearProblem {
    let a = DenseMatrix::from_rows(&[[1.0, -1.0, 0.0], [-1.0, 2.0, 1.0], [0.0, 1.0, 1.0]])
        .expect("static matrix");
    let b = match case {
        SingularCase::NoSolution => [1.0, 1.0, 1.0],
        SingularCase::MultiSolution => [0.0, 1.0, 1.0],
    };
    let p = LinearProblem::new(a, DenseVector::from_slice(&b).expect("static vector"))
        .expect("static problem");
    debug_assert_eq!(
        p.classification(),
        match case {
            SingularCase::NoSolution => Solvability::NoSolution,
            SingularCase::MultiSolution => Solvability::MultiSolution,
        }
    );
    p
}

/// Shared knobs for the scripted scenarios. `None` picks the scenario default.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub gamma: f64,
    pub n_inits: usize,
    pub seed: u64,
    /// Seconds.
    pub t_end: Option<f64>,
    /// Seconds.
    pub step: Option<f64>,
    pub stride: Option<usize>,
    pub threshold: f64,
    /// Singular values for the nonsingular scenario.
    pub spectrum: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            gamma: DEFAULT_GAMMA,
            n_inits: DEFAULT_INITS,
            seed: DEFAULT_SEED,
            t_end: None,
            step: None,
            stride: None,
            threshold: default_threshold(),
            spectrum: figure1_spectrum(),
        }
    }
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(ExperimentError::InvalidParameter(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if self.n_inits == 0 {
            return Err(ExperimentError::InvalidParameter(
                "need at least one initial state".into(),
            ));
        }
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(ExperimentError::InvalidParameter(
                "threshold must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemSummary {
    pub n: usize,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub classification: Solvability,
    pub x_star: Option<Vec<f64>>,
}

impl From<&LinearProblem> for ProblemSummary {
    fn from(p: &LinearProblem) -> Self {
        Self {
            n: p.n(),
            a: p.a().to_rows(),
            b: p.b().as_slice().to_vec(),
            classification: p.classification(),
            x_star: p.x_star().map(|x| x.as_slice().to_vec()),
        }
    }
}

/// Per-run outcome. Times are in milliseconds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub label: String,
    pub kind: ModelKind,
    pub dynamics: DynamicsClass,
    pub integrated: bool,
    pub initial_state: Vec<f64>,
    pub initial_residual: f64,
    pub step_ms: Option<f64>,
    pub samples: Option<usize>,
    pub final_state: Option<Vec<f64>>,
    pub final_residual: Option<f64>,
    pub fitted_rate: Option<f64>,
    pub convergence_time_ms: Option<f64>,
    /// `(c − ln threshold) / fitted_rate` with `c` the fitted `ln(residual)`
    /// intercept: when the slowest mode alone would cross the threshold.
    pub predicted_time_ms: Option<f64>,
    pub asymptotic_residual: Option<f64>,
    pub residual_monotone: Option<bool>,
    pub lyapunov_monotone: Option<bool>,
    /// `‖x_final − x_ref‖₂`, where `x_ref` is `x*` or the run's equilibrium.
    pub distance_to_solution: Option<f64>,
    pub note: Option<String>,
}

impl RunSummary {
    fn refused(label: String, model: &NeuralModel, x0: &DenseVector, note: String) -> Result<Self> {
        Ok(Self {
            label,
            kind: model.kind(),
            dynamics: model.classification(),
            integrated: false,
            initial_state: x0.as_slice().to_vec(),
            initial_residual: model.problem().residual(x0)?,
            step_ms: None,
            samples: None,
            final_state: None,
            final_residual: None,
            fitted_rate: None,
            convergence_time_ms: None,
            predicted_time_ms: None,
            asymptotic_residual: None,
            residual_monotone: None,
            lyapunov_monotone: None,
            distance_to_solution: None,
            note: Some(note),
        })
    }
}

/// Reference timings for the nonsingular scenario, in milliseconds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateComparison {
    /// `−ln(threshold) / paper_rate` (the guaranteed-rate figure).
    pub guaranteed_time_ms: f64,
    /// `−ln(threshold) / modal_rate`.
    pub modal_time_ms: f64,
    pub mean_convergence_time_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub scenario: String,
    pub seed: u64,
    pub gamma: f64,
    pub t_end_ms: f64,
    pub threshold: f64,
    pub problem: ProblemSummary,
    pub rates: RateReport,
    pub comparison: Option<RateComparison>,
    pub runs: Vec<RunSummary>,
    pub flags: BTreeMap<String, bool>,
}

impl ExperimentReport {
    pub fn all_passed(&self) -> bool {
        self.flags.values().all(|&f| f)
    }
}

/// A report plus the sampled trajectory of every integrated run, labelled
/// like the corresponding [`RunSummary`].
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub report: ExperimentReport,
    pub trajectories: Vec<(String, Trajectory)>,
}

struct RunSettings {
    t_end: f64,
    step: Option<f64>,
    stride: Option<usize>,
    threshold: f64,
    seed: u64,
}

fn run_one(
    label: String,
    solvable: &SolvableModel,
    x0: &DenseVector,
    settings: &RunSettings,
) -> Result<(RunSummary, Trajectory)> {
    let model = solvable.model();
    let problem = model.problem();
    let h = settings.step.unwrap_or_else(|| solvable.default_step());
    let stride = settings
        .stride
        .unwrap_or_else(|| default_stride(settings.t_end, h));
    let traj = solvable.integrate(x0, settings.t_end, h, stride)?;
    let traj = attach_lyapunov(traj, problem)?.with_seed(settings.seed);

    let fit = fit_decay(&traj, late_window(&traj))
        .or_else(|_| fit_decay(&traj, pre_floor_window(&traj)))
        .ok();
    let conv = convergence_time(&traj, settings.threshold);
    let r0 = traj.residuals[0];
    let predicted = fit
        .filter(|f| f.rate > 0.0)
        .map(|f| ((f.log_intercept - settings.threshold.ln()) / f.rate).max(0.0));
    let x_ref = crate::integrator::reference_equilibrium(problem, x0)?;
    let lyap = traj.lyapunov.as_deref().unwrap_or(&[]);

    let summary = RunSummary {
        label: label.clone(),
        kind: model.kind(),
        dynamics: model.classification(),
        integrated: true,
        initial_state: x0.as_slice().to_vec(),
        initial_residual: r0,
        step_ms: Some(h * 1e3),
        samples: Some(traj.len()),
        final_state: Some(traj.final_state().as_slice().to_vec()),
        final_residual: Some(traj.final_residual()),
        fitted_rate: fit.map(|f| f.rate),
        convergence_time_ms: conv.map(|t| t * 1e3),
        predicted_time_ms: predicted.map(|t| t * 1e3),
        asymptotic_residual: asymptotic_residual(&traj).ok(),
        residual_monotone: Some(is_non_increasing(&traj.residuals, MONOTONE_SLACK)),
        lyapunov_monotone: Some(is_non_increasing(lyap, MONOTONE_SLACK)),
        distance_to_solution: Some(traj.final_state().sub(&x_ref)?.norm()),
        note: None,
    };
    Ok((summary, traj))
}

/// Second half of the span before the residual first drops below `1e-10`,
/// for runs that decay past the fitting floor before the late window.
fn pre_floor_window(traj: &Trajectory) -> (f64, f64) {
    let t_floor = convergence_time(traj, 1e-10).unwrap_or_else(|| traj.final_time());
    (0.5 * t_floor, t_floor)
}

fn run_inits(
    solvable: &SolvableModel,
    inits: &[DenseVector],
    settings: &RunSettings,
) -> Result<Vec<(RunSummary, Trajectory)>> {
    inits
        .par_iter()
        .enumerate()
        .map(|(i, x0)| run_one(format!("run{i}"), solvable, x0, settings))
        .collect()
}

fn all(runs: &[RunSummary], f: impl Fn(&RunSummary) -> bool) -> bool {
    runs.iter().all(f)
}

/// Nonsingular scenario: IGNN from `n_inits` random states on a problem with
/// the configured spectrum (default `α = 0.2345`).
pub fn run_figure1(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let n = cfg.spectrum.len();
    let problem = gen_prescribed(n, &cfg.spectrum, cfg.seed)?;
    let rates = theoretical_rates(&problem, cfg.gamma)?;
    let solvable = prefactorize(NeuralModel::new(
        ModelKind::Ignn,
        problem.clone(),
        cfg.gamma,
    )?)?;
    let settings = RunSettings {
        t_end: cfg.t_end.unwrap_or(FIGURE1_T_END),
        step: cfg.step,
        stride: cfg.stride,
        threshold: cfg.threshold,
        seed: cfg.seed,
    };
    let inits = initial_states(n, cfg.n_inits, cfg.seed);
    let (runs, trajectories) = split(run_inits(&solvable, &inits, &settings)?);

    let fitted: Vec<f64> = runs.iter().filter_map(|r| r.fitted_rate).collect();
    let mean_fitted = (fitted.len() == runs.len()).then(|| mean(&fitted));
    let conv: Vec<f64> = runs.iter().filter_map(|r| r.convergence_time_ms).collect();
    let neg_ln_thr = -cfg.threshold.ln();

    let modal = rates.modal_rate;
    let mut flags = BTreeMap::new();
    flags.insert(
        "all_converged".into(),
        all(&runs, |r| r.convergence_time_ms.is_some()),
    );
    flags.insert(
        "residual_monotone".into(),
        all(&runs, |r| r.residual_monotone == Some(true)),
    );
    flags.insert(
        "lyapunov_monotone".into(),
        all(&runs, |r| r.lyapunov_monotone == Some(true)),
    );
    flags.insert(
        "fitted_rate_ok".into(),
        all(&runs, |r| {
            r.fitted_rate
                .is_some_and(|f| (f - modal).abs() <= 0.05 * modal)
        }),
    );
    flags.insert(
        "convergence_time_consistent".into(),
        all(&runs, |r| {
            match (r.convergence_time_ms, r.predicted_time_ms) {
                (Some(t), Some(p)) => (t - p).abs() <= 0.05 * p,
                _ => false,
            }
        }),
    );

    let comparison = RateComparison {
        guaranteed_time_ms: neg_ln_thr / rates.paper_rate * 1e3,
        modal_time_ms: neg_ln_thr / modal * 1e3,
        mean_convergence_time_ms: (conv.len() == runs.len()).then(|| mean(&conv)),
    };
    let report = ExperimentReport {
        scenario: "fig1".into(),
        seed: cfg.seed,
        gamma: cfg.gamma,
        t_end_ms: settings.t_end * 1e3,
        threshold: cfg.threshold,
        problem: (&problem).into(),
        rates: RateReport {
            fitted_rate: mean_fitted,
            ..rates
        },
        comparison: Some(comparison),
        runs,
        flags,
    };
    Ok(ExperimentOutcome {
        report,
        trajectories,
    })
}

/// Singular scenario: IGNN on [`paper_singular`] from random initial states.
pub fn run_figure2(case: SingularCase, cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let problem = paper_singular(case);
    let n = problem.n();
    let rates = theoretical_rates(&problem, cfg.gamma)?;
    let solvable = prefactorize(NeuralModel::new(
        ModelKind::Ignn,
        problem.clone(),
        cfg.gamma,
    )?)?;
    let settings = RunSettings {
        t_end: cfg.t_end.unwrap_or(FIGURE2_T_END),
        step: cfg.step,
        stride: cfg.stride,
        threshold: cfg.threshold,
        seed: cfg.seed,
    };
    let inits = initial_states(n, cfg.n_inits, cfg.seed);
    let (runs, trajectories) = split(run_inits(&solvable, &inits, &settings)?);

    let min_residual = least_squares(problem.a(), problem.b())?.min_residual;
    let null = null_space(problem.a())?;
    let max_null_drift = trajectories
        .iter()
        .map(|(_, traj)| null_drift(traj, &null))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let mut flags = BTreeMap::new();
    flags.insert(
        "residual_monotone".into(),
        all(&runs, |r| r.residual_monotone == Some(true)),
    );
    flags.insert(
        "lyapunov_monotone".into(),
        all(&runs, |r| r.lyapunov_monotone == Some(true)),
    );
    flags.insert("null_component_ok".into(), max_null_drift <= 1e-8);
    match case {
        SingularCase::NoSolution => {
            flags.insert(
                "asymptotic_residual_ok".into(),
                all(&runs, |r| {
                    r.asymptotic_residual
                        .is_some_and(|a| (a - min_residual).abs() <= 1e-3)
                }),
            );
        }
        SingularCase::MultiSolution => {
            flags.insert(
                "asymptotic_residual_ok".into(),
                all(&runs, |r| r.asymptotic_residual.is_some_and(|a| a <= 1e-6)),
            );
            flags.insert(
                "solution_ok".into(),
                all(&runs, |r| r.final_residual.is_some_and(|f| f <= 1e-6)),
            );
        }
    }

    let scenario = match case {
        SingularCase::NoSolution => "fig2-nosol",
        SingularCase::MultiSolution => "fig2-multi",
    };
    let report = ExperimentReport {
        scenario: scenario.into(),
        seed: cfg.seed,
        gamma: cfg.gamma,
        t_end_ms: settings.t_end * 1e3,
        threshold: cfg.threshold,
        problem: (&problem).into(),
        rates,
        comparison: None,
        runs,
        flags,
    };
    Ok(ExperimentOutcome {
        report,
        trajectories,
    })
}

/// Largest `|vᵀ(x(t) − x(0))|` over the samples and null vectors `v`.
pub fn null_drift(traj: &Trajectory, null: &[DenseVector]) -> Result<f64> {
    let x0 = traj.initial_state();
    let mut worst = 0.0f64;
    for x in &traj.states {
        let d = x.sub(x0)?;
        for v in null {
            worst = worst.max(v.dot(&d)?.abs());
        }
    }
    Ok(worst)
}

/// Options for [`compare_models`]. `None` picks the defaults.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompareOptions {
    /// Seconds; default is 20 time constants of the slowest IGNN mode.
    pub t_end: Option<f64>,
    pub threshold: Option<f64>,
    pub seed: Option<u64>,
}

/// Runs every [`ModelKind`] on `p` from `x0`. DAE-classified kinds are
/// recorded as not integrable rather than failing the comparison.
pub fn compare_models(
    p: &LinearProblem,
    gamma: f64,
    x0: &DenseVector,
    opts: &CompareOptions,
) -> Result<ExperimentOutcome> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(ExperimentError::InvalidParameter(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let rates = theoretical_rates(p, gamma)?;
    let t_end = match opts.t_end {
        Some(t) => t,
        None => 20.0 / slowest_nonzero_rate(p, gamma)?,
    };
    let settings = RunSettings {
        t_end,
        step: None,
        stride: None,
        threshold: opts.threshold.unwrap_or_else(default_threshold),
        seed: opts.seed.unwrap_or(DEFAULT_SEED),
    };

    let results: Vec<(RunSummary, Option<Trajectory>)> = ModelKind::ALL
        .par_iter()
        .map(|&kind| {
            let model = NeuralModel::new(kind, p.clone(), gamma)?;
            match prefactorize(model.clone()) {
                Ok(solvable) => {
                    let (s, t) = run_one(kind.name().into(), &solvable, x0, &settings)?;
                    Ok((s, Some(t)))
                }
                Err(err @ IntegrateError::DaeNotIntegrable { .. }) => Ok((
                    RunSummary::refused(kind.name().into(), &model, x0, err.to_string())?,
                    None,
                )),
                Err(other) => Err(other.into()),
            }
        })
        .collect::<Result<_>>()?;

    let mut runs = Vec::new();
    let mut trajectories = Vec::new();
    for (summary, traj) in results {
        if let Some(t) = traj {
            trajectories.push((summary.label.clone(), t));
        }
        runs.push(summary);
    }

    let singular = p.classification() != Solvability::Unique;
    let mut flags = BTreeMap::new();
    flags.insert(
        "dae_classification_ok".into(),
        all(&runs, |r| {
            let expect_dae = singular && matches!(r.kind, ModelKind::Znn | ModelKind::Iznn);
            (r.dynamics == DynamicsClass::Dae) == expect_dae && r.integrated != expect_dae
        }),
    );
    flags.insert(
        "converged".into(),
        all(&runs, |r| {
            !r.integrated || r.distance_to_solution.is_some_and(|d| d <= 1e-6)
        }),
    );

    let report = ExperimentReport {
        scenario: "compare".into(),
        seed: settings.seed,
        gamma,
        t_end_ms: t_end * 1e3,
        threshold: settings.threshold,
        problem: p.into(),
        rates,
        comparison: None,
        runs,
        flags,
    };
    Ok(ExperimentOutcome {
        report,
        trajectories,
    })
}

/// `γλ/(1 + λ)` for the smallest non-negligible eigenvalue `λ` of `AᵀA`.
fn slowest_nonzero_rate(p: &LinearProblem, gamma: f64) -> Result<f64> {
    let eig = SymEigen::new(&p.a().gram())?;
    let tol = crate::linalg::default_rank_tol(p.a());
    let thr = tol * tol * eig.max();
    let lambda = eig
        .eigenvalues
        .iter()
        .copied()
        .find(|&l| l > thr)
        .ok_or_else(|| ExperimentError::InvalidParameter("coefficient matrix is zero".into()))?;
    Ok(gamma * lambda / (1.0 + lambda))
}

/// Which Lyapunov candidate a scenario tracks, for reporting.
pub fn lyapunov_kind(p: &LinearProblem) -> LyapunovKind {
    LyapunovKind::for_problem(p)
}

fn split(pairs: Vec<(RunSummary, Trajectory)>) -> (Vec<RunSummary>, Vec<(String, Trajectory)>) {
    pairs
        .into_iter()
        .map(|(s, t)| {
            let label = s.label.clone();
            (s, (label, t))
        })
        .unzip()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
