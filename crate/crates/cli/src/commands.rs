use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use neurodyn::analysis::{
    asymptotic_residual, attach_lyapunov, convergence_time, fit_decay_rate, late_window,
    theoretical_rates, AnalysisError, LyapunovKind, RateReport,
};
use neurodyn::experiments::{
    compare_models, default_threshold, figure1_spectrum, gen_prescribed, initial_states,
    paper_singular, run_figure1, run_figure2, CompareOptions, ExperimentConfig, ExperimentOutcome,
    SingularCase,
};
use neurodyn::integrator::{default_stride, prefactorize, SolvableModel, Trajectory};
use neurodyn::linalg::DenseVector;
use neurodyn::models::{DynamicsClass, LinearProblem, ModelKind, NeuralModel, Solvability};
use serde::Serialize;

use crate::args::{ExperimentArgs, RatesArgs, RunArgs, Scenario};
use crate::output::{json_bytes, sidecar_path, trajectory_csv, write_all};
use crate::problem;

/// `solve` gives up after this many horizon doublings.
const MAX_DOUBLINGS: usize = 10;
/// Movement over the final tenth of the samples, relative to the total
/// movement, above which the state still counts as moving.
const DRIFT_TOL: f64 = 1e-3;

struct Prepared {
    problem: LinearProblem,
    solvable: SolvableModel,
    x0: DenseVector,
}

fn prepare(args: &RunArgs) -> Result<Prepared> {
    let problem = problem::resolve(&args.source, args.seed)?;
    let n = problem.n();
    let x0 = match &args.x0 {
        Some(v) if v.len() != n => bail!("--x0 has {} entries, expected {n}", v.len()),
        Some(v) => DenseVector::new(v.clone())?,
        None => initial_states(n, 1, args.seed).remove(0),
    };
    let model = NeuralModel::new(args.model.into(), problem.clone(), args.gamma)?;
    let solvable = prefactorize(model)?;
    Ok(Prepared {
        problem,
        solvable,
        x0,
    })
}

fn integrate(p: &Prepared, args: &RunArgs, t_end: f64) -> Result<Trajectory> {
    let h = args
        .h
        .map(|ms| ms * 1e-3)
        .unwrap_or_else(|| p.solvable.default_step());
    let stride = args
        .stride
        .map(|s| s as usize)
        .unwrap_or_else(|| default_stride(t_end, h));
    let traj = p.solvable.integrate(&p.x0, t_end, h, stride)?;
    Ok(attach_lyapunov(traj, &p.problem)?.with_seed(args.seed))
}

#[derive(Debug, Serialize)]
struct RunMeta {
    kind: ModelKind,
    dynamics: DynamicsClass,
    solvability: Solvability,
    lyapunov: LyapunovKind,
    gamma: f64,
    step_ms: f64,
    stride: usize,
    seed: u64,
    t_end_ms: f64,
    samples: usize,
}

impl RunMeta {
    fn new(p: &Prepared, traj: &Trajectory) -> Self {
        Self {
            kind: traj.meta.kind,
            dynamics: p.solvable.model().classification(),
            solvability: p.problem.classification(),
            lyapunov: LyapunovKind::for_problem(&p.problem),
            gamma: traj.meta.gamma,
            step_ms: traj.meta.step * 1e3,
            stride: traj.meta.stride,
            seed: traj.meta.seed.unwrap_or_default(),
            t_end_ms: traj.meta.t_end * 1e3,
            samples: traj.len(),
        }
    }
}

#[derive(Debug, Serialize)]
struct SolveReport {
    #[serde(flatten)]
    meta: RunMeta,
    initial_state: Vec<f64>,
    final_state: Vec<f64>,
    final_residual: f64,
    asymptotic_residual: f64,
    threshold: f64,
    convergence_time_ms: Option<f64>,
    rates: RateReport,
}

pub fn solve(args: &RunArgs) -> Result<()> {
    let p = prepare(args)?;
    let mut t_end = args.t_end_ms * 1e-3;
    let mut attempt = 0;
    let (traj, settled) = loop {
        let traj = integrate(&p, args, t_end)?;
        let outcome = asymptotic_residual(&traj).and_then(|r| match drift(&traj)? {
            d if d > DRIFT_TOL => Err(AnalysisError::NotSettled { spread: d }),
            _ => Ok(r),
        });
        match outcome {
            Ok(r) => break (traj, r),
            Err(AnalysisError::NotSettled { .. }) if attempt < MAX_DOUBLINGS => {
                attempt += 1;
                t_end *= 2.0;
            }
            Err(e) => {
                return Err(e)
                    .with_context(|| format!("state still moving after {:.6e} ms", t_end * 1e3))
            }
        }
    };

    let threshold = default_threshold();
    let mut rates = theoretical_rates(&p.problem, args.gamma)?;
    rates.fitted_rate = fit_decay_rate(&traj, late_window(&traj)).ok();
    let report = SolveReport {
        meta: RunMeta::new(&p, &traj),
        initial_state: p.x0.as_slice().to_vec(),
        final_state: traj.final_state().as_slice().to_vec(),
        final_residual: traj.final_residual(),
        asymptotic_residual: settled,
        threshold,
        convergence_time_ms: convergence_time(&traj, threshold).map(|t| t * 1e3),
        rates,
    };
    let bytes = json_bytes(&report)?;
    match &args.out {
        Some(path) => write_all(&[(path.clone(), bytes)]),
        None => {
            print!("{}", String::from_utf8_lossy(&bytes));
            Ok(())
        }
    }
}

/// `‖x_end − x_tail‖ / ‖x_end − x_0‖` over the same tail that
/// [`asymptotic_residual`] inspects; zero for a run that never moved.
fn drift(traj: &Trajectory) -> Result<f64, AnalysisError> {
    let n = traj.len();
    let tail = traj.states[n - (n / 10).max(2).min(n)].clone();
    let end = traj.final_state();
    let total = end.sub(traj.initial_state())?.norm();
    let recent = end.sub(&tail)?.norm();
    if recent <= 1e-14 * end.norm().max(1.0) {
        return Ok(0.0);
    }
    Ok(recent / total)
}

pub fn simulate(args: &RunArgs) -> Result<()> {
    let p = prepare(args)?;
    let traj = integrate(&p, args, args.t_end_ms * 1e-3)?;
    let csv = trajectory_csv(&traj)?;
    let meta = json_bytes(&RunMeta::new(&p, &traj))?;
    let path = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("trajectory.csv"));
    write_all(&[(sidecar_path(&path), meta), (path.clone(), csv)])?;
    eprintln!(
        "wrote {} samples to {} (final residual {:.3e})",
        traj.len(),
        path.display(),
        traj.final_residual()
    );
    Ok(())
}

pub fn experiment(args: &ExperimentArgs) -> Result<()> {
    let outcome = match args.name {
        Scenario::Fig1 => run_figure1(&config(args))?,
        Scenario::Fig2Nosol => run_figure2(SingularCase::NoSolution, &config(args))?,
        Scenario::Fig2Multi => run_figure2(SingularCase::MultiSolution, &config(args))?,
        Scenario::Compare => compare(args)?,
    };
    let stem = args.name.file_stem();
    let mut files = Vec::new();
    for (label, traj) in &outcome.trajectories {
        let path = args.out.join(format!("{stem}_{label}.csv"));
        files.push((path, trajectory_csv(traj)?));
    }
    files.push((
        args.out.join(format!("{stem}_report.json")),
        json_bytes(&outcome.report)?,
    ));
    write_all(&files)?;

    for run in &outcome.report.runs {
        let name = if run.label == run.kind.name() {
            run.label.clone()
        } else {
            format!("{} {}", run.label, run.kind)
        };
        match run.final_residual {
            Some(r) => println!("{name}: final residual {r:.6e}"),
            None => println!(
                "{name}: not integrated ({})",
                run.note.as_deref().unwrap_or(&run.dynamics.to_string())
            ),
        }
    }
    for (flag, ok) in &outcome.report.flags {
        println!("{flag}: {}", if *ok { "pass" } else { "FAIL" });
    }
    Ok(())
}

fn config(args: &ExperimentArgs) -> ExperimentConfig {
    ExperimentConfig {
        gamma: args.gamma,
        n_inits: args.inits as usize,
        seed: args.seed,
        t_end: args.t_end_ms.map(|ms| ms * 1e-3),
        step: args.h.map(|ms| ms * 1e-3),
        stride: args.stride.map(|s| s as usize),
        ..ExperimentConfig::default()
    }
}

fn compare(args: &ExperimentArgs) -> Result<ExperimentOutcome> {
    if args.h.is_some() || args.stride.is_some() {
        eprintln!("note: compare picks step and stride per model; --h and --stride are ignored");
    }
    let problem = if args.singular {
        paper_singular(SingularCase::NoSolution)
    } else {
        let sigma = figure1_spectrum();
        gen_prescribed(sigma.len(), &sigma, args.seed)?
    };
    let x0 = initial_states(problem.n(), 1, args.seed).remove(0);
    let opts = CompareOptions {
        t_end: args.t_end_ms.map(|ms| ms * 1e-3),
        threshold: None,
        seed: Some(args.seed),
    };
    Ok(compare_models(&problem, args.gamma, &x0, &opts)?)
}

pub fn rates(args: &RatesArgs) -> Result<()> {
    let problem = problem::resolve(&args.source, args.seed)?;
    let report = theoretical_rates(&problem, args.gamma)?;
    print!("{}", String::from_utf8_lossy(&json_bytes(&report)?));
    Ok(())
}
