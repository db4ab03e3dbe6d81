//! Lyapunov functions, convergence rates and trajectory diagnostics.
//!
//! Two Lyapunov candidates are provided. For a unique solution `x*` the
//! error-weighted form `φ = ‖(AᵀA + I)(x − x*)‖²/2` decreases along IGNN runs
//! with `φ̇ ≤ −γ·α·β·‖e‖²`. For any `A` the gradient–residual form
//! `φ = ‖AᵀAx − Aᵀb‖²/2 + ‖Ax − b‖²/2` satisfies `φ̇ = −γ‖Aᵀ(Ax − b)‖²`
//! along IGNN runs, which is what makes singular systems stable.
//!
//! Rates are reported two ways. `paper_rate` is the guaranteed rate from the
//! `α < 1` / `α ≥ 1` case split (`γα` or `γ`). `modal_rate = γα/(1 + α)` is the
//! actual decay rate of the slowest eigenmode of the IGNN error dynamics,
//! and is what fitted rates agree with. For `0 < α < 1` the two differ.

use serde::Serialize;
use thiserror::Error;

use crate::integrator::Trajectory;
use crate::linalg::{default_rank_tol, DenseVector, LinalgError, SymEigen};
use crate::models::{LinearProblem, ModelError, Solvability};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("problem has no unique solution ({0})")]
    NotUnique(Solvability),
    #[error("need at least {needed} usable samples in the window, found {found}")]
    InsufficientData { needed: usize, found: usize },
    #[error("residual has not settled: final samples vary by {spread:e}")]
    NotSettled { spread: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub type Result<T, E = AnalysisError> = std::result::Result<T, E>;

/// Samples with residual at or below this are ignored by rate fitting.
pub const FIT_RESIDUAL_FLOOR: f64 = 1e-13;
const MIN_FIT_SAMPLES: usize = 10;
const PLATEAU_TOL: f64 = 1e-6;

/// `‖(AᵀA + I)(x − x*)‖²/2`; requires a unique solution.
pub fn lyapunov_unique(p: &LinearProblem, x: &DenseVector) -> Result<f64> {
    let x_star = p
        .x_star()
        .ok_or(AnalysisError::NotUnique(p.classification()))?;
    let e = x.sub(x_star)?;
    let ae = p.a().mat_vec(&e)?;
    let weighted = p.a().transpose_mat_vec(&ae)?.add(&e)?;
    Ok(0.5 * weighted.norm_squared())
}

/// `‖AᵀAx − Aᵀb‖²/2 + ‖Ax − b‖²/2`; valid for any `A`.
pub fn lyapunov_degenerate(p: &LinearProblem, x: &DenseVector) -> Result<f64> {
    let r = p.residual_vector(x)?;
    let g = p.a().transpose_mat_vec(&r)?;
    Ok(0.5 * g.norm_squared() + 0.5 * r.norm_squared())
}

/// Which Lyapunov candidate is tracked for a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LyapunovKind {
    /// [`lyapunov_unique`]
    ErrorWeighted,
    /// [`lyapunov_degenerate`]
    GradientResidual,
}

impl LyapunovKind {
    pub fn for_problem(p: &LinearProblem) -> Self {
        match p.classification() {
            Solvability::Unique => Self::ErrorWeighted,
            _ => Self::GradientResidual,
        }
    }

    pub fn evaluate(self, p: &LinearProblem, x: &DenseVector) -> Result<f64> {
        match self {
            Self::ErrorWeighted => lyapunov_unique(p, x),
            Self::GradientResidual => lyapunov_degenerate(p, x),
        }
    }
}

/// Evaluates `kind` at every sample of `traj`.
pub fn lyapunov_series(
    traj: &Trajectory,
    p: &LinearProblem,
    kind: LyapunovKind,
) -> Result<Vec<f64>> {
    traj.states.iter().map(|x| kind.evaluate(p, x)).collect()
}

/// Returns `traj` with the problem's default Lyapunov candidate attached.
pub fn attach_lyapunov(traj: Trajectory, p: &LinearProblem) -> Result<Trajectory> {
    let values = lyapunov_series(&traj, p, LyapunovKind::for_problem(p))?;
    Ok(traj.with_lyapunov(values))
}

/// Index of the first sample exceeding its predecessor by more than `slack`.
pub fn first_increase(series: &[f64], slack: f64) -> Option<usize> {
    series
        .windows(2)
        .position(|w| w[1] > w[0] + slack)
        .map(|i| i + 1)
}

pub fn is_non_increasing(series: &[f64], slack: f64) -> bool {
    first_increase(series, slack).is_none()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    /// Smallest eigenvalue of `AᵀA` (zero for singular `A`).
    pub alpha: f64,
    /// Smallest eigenvalue of `AᵀA + I`.
    pub beta: f64,
    /// Guaranteed rate from the case split: `γα` for `α < 1`, `γ` for `α ≥ 1`.
    pub paper_rate: f64,
    /// Slowest IGNN eigenmode, `γα/(1 + α)`.
    pub modal_rate: f64,
    pub fitted_rate: Option<f64>,
    pub gamma: f64,
}

/// Spectral rate quantities for an IGNN on `p` with gain `gamma`.
pub fn theoretical_rates(p: &LinearProblem, gamma: f64) -> Result<RateReport> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(AnalysisError::InvalidParameter(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let gram = p.a().gram();
    let eig = SymEigen::new(&gram)?;
    let tol = default_rank_tol(p.a());
    let mut alpha = eig.min().max(0.0);
    if alpha <= tol * tol * eig.max() {
        alpha = 0.0;
    }
    let beta = SymEigen::new(&gram.shift_diagonal(1.0)?)?.min();
    let paper_rate = if alpha >= 1.0 { gamma } else { gamma * alpha };
    Ok(RateReport {
        alpha,
        beta,
        paper_rate,
        modal_rate: gamma * alpha / (1.0 + alpha),
        fitted_rate: None,
        gamma,
    })
}

/// Straight-line fit of `ln(residual)` against time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    /// Decay rate (negated slope), 1/s.
    pub rate: f64,
    /// Fitted `ln(residual)` at `t = 0`.
    pub log_intercept: f64,
    pub samples: usize,
}

/// Least-squares fit of `ln(residual) ≈ c − rate·t` over `window` (seconds).
pub fn fit_decay(traj: &Trajectory, window: (f64, f64)) -> Result<DecayFit> {
    let (lo, hi) = window;
    let pts: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(&traj.residuals)
        .filter(|(&t, &r)| t >= lo && t <= hi && r > FIT_RESIDUAL_FLOOR)
        .map(|(&t, &r)| (t, r.ln()))
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(AnalysisError::InsufficientData {
            needed: MIN_FIT_SAMPLES,
            found: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let t_mean = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let y_mean = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - t_mean).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - t_mean) * (p.1 - y_mean)).sum();
    if sxx == 0.0 {
        return Err(AnalysisError::InsufficientData {
            needed: MIN_FIT_SAMPLES,
            found: 1,
        });
    }
    let slope = sxy / sxx;
    Ok(DecayFit {
        rate: -slope,
        log_intercept: y_mean - slope * t_mean,
        samples: pts.len(),
    })
}

/// Decay rate of the residual over `window`, see [`fit_decay`].
pub fn fit_decay_rate(traj: &Trajectory, window: (f64, f64)) -> Result<f64> {
    Ok(fit_decay(traj, window)?.rate)
}

/// `[0.6·t_end, 0.95·t_end]`, late enough for the slowest mode to dominate.
pub fn late_window(traj: &Trajectory) -> (f64, f64) {
    let t_end = traj.final_time();
    (0.6 * t_end, 0.95 * t_end)
}

/// First time the residual reaches `threshold`, interpolated linearly in
/// `ln(residual)` between the bracketing samples. `None` if never reached.
pub fn convergence_time(traj: &Trajectory, threshold: f64) -> Option<f64> {
    let i = traj.residuals.iter().position(|&r| r <= threshold)?;
    if i == 0 {
        return Some(traj.times[0]);
    }
    let (t0, t1) = (traj.times[i - 1], traj.times[i]);
    let (r0, r1) = (traj.residuals[i - 1], traj.residuals[i]);
    let frac = if r1 > 0.0 {
        (r0.ln() - threshold.ln()) / (r0.ln() - r1.ln())
    } else {
        (r0 - threshold) / (r0 - r1)
    };
    Some(t0 + frac.clamp(0.0, 1.0) * (t1 - t0))
}

/// Mean residual over the final 10% of samples.
///
/// The plateau test requires `max − min ≤ 1e-6·max(1, max)` over those
/// samples, a relative test for non-zero plateaus and an absolute one for
/// residuals decaying to zero.
pub fn asymptotic_residual(traj: &Trajectory) -> Result<f64> {
    let n = traj.residuals.len();
    if n < 2 {
        return Err(AnalysisError::InsufficientData {
            needed: 2,
            found: n,
        });
    }
    let tail_len = (n / 10).max(2);
    let tail = &traj.residuals[n - tail_len..];
    let max = tail.iter().cloned().fold(f64::MIN, f64::max);
    let min = tail.iter().cloned().fold(f64::MAX, f64::min);
    let spread = max - min;
    if spread > PLATEAU_TOL * max.max(1.0) {
        return Err(AnalysisError::NotSettled { spread });
    }
    Ok(tail.iter().sum::<f64>() / tail_len as f64)
}

/// Outcome of checking `φ̇ ≤ −γαβ‖e‖²` along a sampled trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayBoundCheck {
    pub samples_checked: usize,
    pub violations: Vec<usize>,
    /// Largest `φ̇ / (−γαβ‖e‖²)` shortfall seen, as `1 − ratio` (≤ 0 is fine).
    pub worst_shortfall: f64,
}

impl DecayBoundCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the asymptotic-stability bound for the error-weighted Lyapunov
/// function at every interior sample, with `φ̇` from second-order finite
/// differences and `rel_slack` relative slack on the bound.
pub fn check_decay_bound(
    traj: &Trajectory,
    p: &LinearProblem,
    gamma: f64,
    rel_slack: f64,
) -> Result<DecayBoundCheck> {
    let x_star = p
        .x_star()
        .ok_or(AnalysisError::NotUnique(p.classification()))?;
    let rates = theoretical_rates(p, gamma)?;
    let coeff = gamma * rates.alpha * rates.beta;
    let phi = lyapunov_series(traj, p, LyapunovKind::ErrorWeighted)?;
    let t = &traj.times;

    let mut check = DecayBoundCheck {
        samples_checked: 0,
        violations: Vec::new(),
        worst_shortfall: f64::NEG_INFINITY,
    };
    for i in 1..t.len().saturating_sub(1) {
        let e2 = traj.states[i].sub(x_star)?.norm_squared();
        if e2 == 0.0 {
            continue;
        }
        let (h1, h2) = (t[i] - t[i - 1], t[i + 1] - t[i]);
        let dphi = -h2 / (h1 * (h1 + h2)) * phi[i - 1]
            + (h2 - h1) / (h1 * h2) * phi[i]
            + h1 / (h2 * (h1 + h2)) * phi[i + 1];
        let bound = -coeff * e2;
        check.samples_checked += 1;
        check.worst_shortfall = check.worst_shortfall.max(1.0 - dphi / bound);
        if dphi > bound + rel_slack * bound.abs() {
            check.violations.push(i);
        }
    }
    Ok(check)
}
