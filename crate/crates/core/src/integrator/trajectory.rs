use serde::Serialize;

use crate::linalg::DenseVector;
use crate::models::ModelKind;

/// Run parameters attached to a [`Trajectory`]. Times are in seconds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryMeta {
    pub kind: ModelKind,
    pub gamma: f64,
    pub step: f64,
    pub stride: usize,
    pub t_end: f64,
    pub seed: Option<u64>,
}

/// Sampled states of one integration run.
///
/// `times`, `states` and `residuals` always have equal length; `lyapunov`,
/// when present, matches them too.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DenseVector>,
    pub residuals: Vec<f64>,
    pub lyapunov: Option<Vec<f64>>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub(crate) fn new(meta: TrajectoryMeta) -> Self {
        Self {
            times: Vec::new(),
            states: Vec::new(),
            residuals: Vec::new(),
            lyapunov: None,
            meta,
        }
    }

    pub(crate) fn push(&mut self, t: f64, x: DenseVector, residual: f64) {
        self.times.push(t);
        self.states.push(x);
        self.residuals.push(residual);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn initial_state(&self) -> &DenseVector {
        &self.states[0]
    }

    pub fn final_state(&self) -> &DenseVector {
        self.states
            .last()
            .expect("trajectory has at least one sample")
    }

    pub fn final_residual(&self) -> f64 {
        *self
            .residuals
            .last()
            .expect("trajectory has at least one sample")
    }

    pub fn final_time(&self) -> f64 {
        *self
            .times
            .last()
            .expect("trajectory has at least one sample")
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.meta.seed = Some(seed);
        self
    }

    pub fn with_lyapunov(mut self, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.len(), "one Lyapunov value per sample");
        self.lyapunov = Some(values);
        self
    }
}
