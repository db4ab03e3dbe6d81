//! The four analogue dynamics for `Ax = b`, each written as a mass-matrix
//! system `M·ẋ = −γ·K·(Ax − b)`.
//!
//! | kind | mass `M`   | gain `K`    |
//! |------|------------|-------------|
//! | GNN  | `I`        | `Aᵀ`        |
//! | ZNN  | `A`        | `I`         |
//! | IZNN | `A`        | `AAᵀ + I`   |
//! | IGNN | `AᵀA + I`  | `Aᵀ`        |
//!
//! A singular mass matrix makes the system differential-algebraic. That can
//! only happen for ZNN and IZNN, whose mass matrix is `A` itself.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{numerical_rank, DenseMatrix, DenseVector, LinalgError, Lu};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("coefficient matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("gamma must be positive and finite, got {0}")]
    NonPositiveGamma(f64),
}

/// Solvability of `Ax = b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Solvability {
    Unique,
    NoSolution,
    MultiSolution,
}

impl fmt::Display for Solvability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Unique => "Unique",
            Self::NoSolution => "NoSolution",
            Self::MultiSolution => "MultiSolution",
        })
    }
}

/// A square linear system `Ax = b` together with its solvability class.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProblem {
    a: DenseMatrix,
    b: DenseVector,
    classification: Solvability,
    x_star: Option<DenseVector>,
}

impl LinearProblem {
    /// Classifies the system by numerical rank of `A` and of `[A | b]`, and
    /// solves it by pivoted Gaussian elimination when the solution is unique.
    pub fn new(a: DenseMatrix, b: DenseVector) -> Result<Self, ModelError> {
        if !a.is_square() {
            return Err(ModelError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        if b.dim() != n {
            return Err(LinalgError::DimensionMismatch {
                op: "build_problem",
                expected: n,
                found: b.dim(),
            }
            .into());
        }
        let rank_a = numerical_rank(&a)?;
        let (classification, x_star) = if rank_a == n {
            let x = Lu::factor(&a)?.solve(&b)?;
            (Solvability::Unique, Some(x))
        } else {
            // rank([A | c·b]) does not depend on c ≠ 0; scale b to A's magnitude
            let b_max = b.max_abs();
            let scaled = if b_max > 0.0 {
                b.scale(a.max_abs().max(f64::MIN_POSITIVE) / b_max)
            } else {
                b.clone()
            };
            let rank_ab = numerical_rank(&a.augment(&scaled)?)?;
            if rank_ab > rank_a {
                (Solvability::NoSolution, None)
            } else {
                (Solvability::MultiSolution, None)
            }
        };
        Ok(Self {
            a,
            b,
            classification,
            x_star,
        })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &DenseVector {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.b.dim()
    }

    pub fn classification(&self) -> Solvability {
        self.classification
    }

    /// The exact solution, present only for [`Solvability::Unique`].
    pub fn x_star(&self) -> Option<&DenseVector> {
        self.x_star.as_ref()
    }

    /// `Ax − b`
    pub fn residual_vector(&self, x: &DenseVector) -> Result<DenseVector, LinalgError> {
        self.a.mat_vec(x)?.sub(&self.b)
    }

    /// `‖Ax − b‖₂`
    pub fn residual(&self, x: &DenseVector) -> Result<f64, LinalgError> {
        Ok(self.residual_vector(x)?.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ModelKind {
    /// Explicit gradient network, `ẋ = −γAᵀ(Ax − b)`.
    Gnn,
    /// Zhang network, `Aẋ = −γ(Ax − b)`.
    Znn,
    /// Improved Zhang network, `Aẋ = −γ(AAᵀ + I)(Ax − b)`.
    Iznn,
    /// Implicit gradient network, `(AᵀA + I)ẋ = −γAᵀ(Ax − b)`.
    Ignn,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [Self::Gnn, Self::Znn, Self::Iznn, Self::Ignn];

    pub fn name(self) -> &'static str {
        match self {
            Self::Gnn => "GNN",
            Self::Znn => "ZNN",
            Self::Iznn => "IZNN",
            Self::Ignn => "IGNN",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown model kind '{s}' (expected GNN, ZNN, IZNN or IGNN)"))
    }
}

/// Whether `M·ẋ = f(x)` is an ordinary ODE (invertible `M`) or a DAE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum DynamicsClass {
    Ode,
    Dae,
}

impl fmt::Display for DynamicsClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ode => "ODE",
            Self::Dae => "DAE",
        })
    }
}

/// `M·ẋ = −γ·K·(Ax − b)` with materialized `M` and `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeuralModel {
    kind: ModelKind,
    gamma: f64,
    mass: DenseMatrix,
    gain: DenseMatrix,
    problem: LinearProblem,
    classification: DynamicsClass,
}

impl NeuralModel {
    pub fn new(kind: ModelKind, problem: LinearProblem, gamma: f64) -> Result<Self, ModelError> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(ModelError::NonPositiveGamma(gamma));
        }
        let a = problem.a();
        let n = problem.n();
        let (mass, gain) = match kind {
            ModelKind::Gnn => (DenseMatrix::identity(n), a.transpose()),
            ModelKind::Znn => (a.clone(), DenseMatrix::identity(n)),
            ModelKind::Iznn => (a.clone(), a.outer_gram().shift_diagonal(1.0)?),
            ModelKind::Ignn => (a.gram().shift_diagonal(1.0)?, a.transpose()),
        };
        let classification = if numerical_rank(&mass)? == n {
            DynamicsClass::Ode
        } else {
            DynamicsClass::Dae
        };
        Ok(Self {
            kind,
            gamma,
            mass,
            gain,
            problem,
            classification,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mass(&self) -> &DenseMatrix {
        &self.mass
    }

    pub fn gain(&self) -> &DenseMatrix {
        &self.gain
    }

    pub fn problem(&self) -> &LinearProblem {
        &self.problem
    }

    pub fn classification(&self) -> DynamicsClass {
        self.classification
    }

    pub fn n(&self) -> usize {
        self.problem.n()
    }

    /// `−γ·K·(Ax − b)`
    pub fn rhs(&self, x: &DenseVector) -> Result<DenseVector, LinalgError> {
        let r = self.problem.residual_vector(x)?;
        Ok(self.gain.mat_vec(&r)?.scale(-self.gamma))
    }
}
