// SPDX-License-Identifier: Apache-2.0

//! Table emission. Numbers are written in shortest round-trip form, so CSV
//! and JSON carry exactly the computed doubles.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use sqzlab_core::{FrontierCurve, Method, OpaTrajectory, SweepGrid, SweepOutcome, SweepResult};

/// Shortest representation that parses back to `v`; plain decimal for
/// moderate magnitudes, exponent form otherwise.
pub fn num(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Twelve significant digits.
pub fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("csv: {e}"))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// One row per grid point: `method`, each swept parameter in declaration
/// order, then the outputs and status.
pub fn sweep_csv(grid: &SweepGrid, result: &SweepResult) -> Result<String> {
    let mut w = csv_writer();
    let swept: Vec<usize> = grid
        .axes
        .iter()
        .map(|a| {
            result
                .param_names
                .iter()
                .position(|n| *n == a.name)
                .expect("axis names are method parameters")
        })
        .collect();
    let mut header = vec!["method".to_string()];
    header.extend(grid.axes.iter().map(|a| a.name.clone()));
    header.extend(
        [
            "alpha_sq",
            "var_x",
            "var_p",
            "squeeze_db",
            "uncertainty",
            "status",
            "skip_reason",
        ]
        .map(String::from),
    );
    w.write_record(&header)?;
    let method = result.method.name();
    for rec in &result.records {
        let mut row = vec![method.to_string()];
        row.extend(swept.iter().map(|&i| num(rec.coords[i])));
        match &rec.outcome {
            SweepOutcome::Ok { point } => {
                let m = point.metrics();
                row.extend([
                    num(point.alpha_sq),
                    num(point.stats.var_x),
                    num(point.stats.var_p),
                    num(m.squeeze_db),
                    num(m.uncertainty),
                    "ok".into(),
                    String::new(),
                ]);
            }
            SweepOutcome::Skipped { reason, .. } => {
                row.extend(std::iter::repeat(String::new()).take(5));
                row.extend(["skipped".into(), reason.code().into()]);
            }
        }
        w.write_record(&row)?;
    }
    finish(w)
}

/// `threshold, alpha_sq_bin, squeeze_db, uncertainty, alpha_sq` and the
/// achieving parameters, one row per occupied bin.
pub fn frontier_csv(method: Method, curves: &[FrontierCurve]) -> Result<String> {
    let mut w = csv_writer();
    let mut header: Vec<&str> = vec![
        "threshold",
        "alpha_sq_bin",
        "squeeze_db",
        "uncertainty",
        "alpha_sq",
    ];
    header.extend(method.param_names());
    w.write_record(&header)?;
    for c in curves {
        for p in &c.points {
            let mut row = vec![
                num(c.threshold),
                num(p.alpha_sq_bin),
                num(p.squeeze_db),
                num(p.uncertainty),
                num(p.alpha_sq),
            ];
            row.extend(p.params.values().into_iter().map(num));
            w.write_record(&row)?;
        }
    }
    finish(w)
}

/// `t, a_s, a_p, var_x_s, var_p_s, uncertainty`, keeping every `stride`-th
/// sample and the last.
pub fn trajectory_csv(traj: &OpaTrajectory, stride: usize) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["t", "a_s", "a_p", "var_x_s", "var_p_s", "uncertainty"])?;
    for i in trajectory_rows(traj.len(), stride) {
        let s = traj.seed_stats(i);
        w.write_record([
            num(traj.times[i]),
            num(traj.a_s[i]),
            num(traj.a_p[i]),
            num(s.var_x),
            num(s.var_p),
            num(s.uncertainty()),
        ])?;
    }
    finish(w)
}

pub fn trajectory_rows(len: usize, stride: usize) -> Vec<usize> {
    let stride = stride.max(1);
    let mut rows: Vec<usize> = (0..len).step_by(stride).collect();
    if len > 0 && rows.last() != Some(&(len - 1)) {
        rows.push(len - 1);
    }
    rows
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `content` to `path`, or stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
            }
            std::fs::write(p, content).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// `<path>.meta.json` next to a CSV output.
pub fn sidecar(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    s.into()
}
