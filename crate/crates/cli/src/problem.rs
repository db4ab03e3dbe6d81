use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use neurodyn::experiments::{figure1_spectrum, gen_prescribed, paper_singular, SingularCase};
use neurodyn::linalg::{DenseMatrix, DenseVector};
use neurodyn::models::LinearProblem;
use serde::Deserialize;

use crate::args::{NamedProblem, ProblemArgs};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MatrixJson {
    Flat(Vec<f64>),
    Nested(Vec<Vec<f64>>),
}

#[derive(Debug, Deserialize)]
struct ProblemJson {
    n: usize,
    #[serde(rename = "A")]
    a: MatrixJson,
    b: Vec<f64>,
}

pub fn resolve(args: &ProblemArgs, seed: u64) -> Result<LinearProblem> {
    if let Some(path) = &args.problem {
        return from_file(path);
    }
    if let (Some(m), Some(b)) = (&args.matrix, &args.rhs) {
        return inline(m, b);
    }
    match args.named {
        Some(NamedProblem::SingularNosol) => Ok(paper_singular(SingularCase::NoSolution)),
        Some(NamedProblem::SingularMulti) => Ok(paper_singular(SingularCase::MultiSolution)),
        Some(NamedProblem::Prescribed) | None => {
            let sigma = args.sigma.clone().unwrap_or_else(figure1_spectrum);
            Ok(gen_prescribed(sigma.len(), &sigma, seed)?)
        }
    }
}

pub fn from_file(path: &Path) -> Result<LinearProblem> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed: ProblemJson =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let n = parsed.n;
    let a = match parsed.a {
        MatrixJson::Flat(data) => {
            if data.len() != n * n {
                bail!("A has {} entries, expected n² = {}", data.len(), n * n);
            }
            DenseMatrix::new(n, n, data)?
        }
        MatrixJson::Nested(rows) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                bail!("A must have {n} rows of {n} entries");
            }
            DenseMatrix::new(n, n, rows.concat())?
        }
    };
    if parsed.b.len() != n {
        bail!("b has {} entries, expected {n}", parsed.b.len());
    }
    Ok(LinearProblem::new(a, DenseVector::new(parsed.b)?)?)
}

fn inline(matrix: &str, rhs: &str) -> Result<LinearProblem> {
    let rows: Vec<Vec<f64>> = matrix.split(';').map(parse_list).collect::<Result<_>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        bail!("--matrix must be square, got {n} rows of unequal or wrong length");
    }
    let b = parse_list(rhs)?;
    if b.len() != n {
        bail!("--rhs has {} entries, expected {n}", b.len());
    }
    Ok(LinearProblem::new(
        DenseMatrix::new(n, n, rows.concat())?,
        DenseVector::new(b)?,
    )?)
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .with_context(|| format!("not a number: {v:?}"))
        })
        .collect()
}
