//! `neurodyn` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or I/O failure, 2 residual did not
//! settle or the state diverged, 3 the model is a DAE, 64 usage error.

mod args;
mod commands;
mod output;
mod problem;

use std::process::ExitCode;

use anyhow::Error;
use clap::Parser;
use neurodyn::analysis::AnalysisError;
use neurodyn::experiments::ExperimentError;
use neurodyn::integrator::IntegrateError;

use args::{Cli, Command};

const EXIT_INPUT: u8 = 1;
const EXIT_UNSETTLED: u8 = 2;
const EXIT_DAE: u8 = 3;
const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Experiment(a) => commands::experiment(a),
        Command::Rates(a) => commands::rates(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<IntegrateError>() {
            return integrate_code(e);
        }
        if let Some(e) = cause.downcast_ref::<AnalysisError>() {
            return analysis_code(e);
        }
        if let Some(e) = cause.downcast_ref::<ExperimentError>() {
            return match e {
                ExperimentError::Integrate(e) => integrate_code(e),
                ExperimentError::Analysis(e) => analysis_code(e),
                _ => EXIT_INPUT,
            };
        }
    }
    EXIT_INPUT
}

fn integrate_code(e: &IntegrateError) -> u8 {
    match e {
        IntegrateError::DaeNotIntegrable { .. } => EXIT_DAE,
        IntegrateError::NonFiniteState { .. } => EXIT_UNSETTLED,
        _ => EXIT_INPUT,
    }
}

fn analysis_code(e: &AnalysisError) -> u8 {
    match e {
        AnalysisError::NotSettled { .. } => EXIT_UNSETTLED,
        _ => EXIT_INPUT,
    }
}
