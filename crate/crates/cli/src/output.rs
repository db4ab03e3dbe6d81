use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use neurodyn::integrator::Trajectory;
use serde::Serialize;

/// CSV bytes with header `t_ms,residual,lyapunov,x_0,...`, 17 significant digits.
pub fn trajectory_csv(traj: &Trajectory) -> Result<Vec<u8>> {
    let n = traj.initial_state().dim();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t_ms".to_string(), "residual".into(), "lyapunov".into()];
    header.extend((0..n).map(|i| format!("x_{i}")));
    w.write_record(&header)?;
    for i in 0..traj.len() {
        let lyap = traj
            .lyapunov
            .as_ref()
            .map(|l| fmt(l[i]))
            .unwrap_or_default();
        let mut row = vec![fmt(traj.times[i] * 1e3), fmt(traj.residuals[i]), lyap];
        row.extend(traj.states[i].iter().map(|&v| fmt(v)));
        w.write_record(&row)?;
    }
    w.into_inner().context("flushing CSV buffer")
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// `dir/trajectory.csv` → `dir/trajectory.meta.json`
pub fn sidecar_path(csv: &Path) -> PathBuf {
    let stem = csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "trajectory".into());
    csv.with_file_name(format!("{stem}.meta.json"))
}

/// Writes every file, creating parent directories. Called only once all
/// computation has succeeded.
pub fn write_all(files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    for (path, bytes) in files {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_sits_next_to_csv() {
        assert_eq!(
            sidecar_path(Path::new("out/run.csv")),
            PathBuf::from("out/run.meta.json")
        );
        assert_eq!(sidecar_path(Path::new("t")), PathBuf::from("t.meta.json"));
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.718281828459045e-300, 6.02214076e23] {
            let s = fmt(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(fmt(0.0), "0.0000000000000000e0");
    }
}
