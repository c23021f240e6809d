// SPDX-License-Identifier: Apache-2.0

//! Run configuration: an optional TOML file overlaid by command-line flags.
//!
//! ```toml
//! thresholds = [1.01, 1.1, 2.0]
//! out_dir = "figures"
//!
//! [bins]
//! min = 1e-6
//! max = 1.0
//! count = 200
//!
//! [[run]]
//! method = "opa-amplitude"
//! label = "opa-capped"
//! seed_cap = 1.0
//! axes = ["tau=0.001:8:200:log"]
//!
//! [[run]]
//! method = "bs"
//! axes = [{ name = "b", min = 0.0, max = 3.0, count = 121, spacing = "linear" }]
//! ```
//!
//! Axes take either the `--axis` string form or a table.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sqzlab_core::frontier::{extended_f64, DEFAULT_THRESHOLDS};
use sqzlab_core::{AlphaBins, Axis, Constraint, Error, Method, Spacing, SweepGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub thresholds: Option<Vec<f64>>,
    pub bins: Option<AlphaBins>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub svg: Option<bool>,
    #[serde(default)]
    pub run: Vec<RunConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub method: String,
    pub label: Option<String>,
    #[serde(default, deserialize_with = "axis_list")]
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    pub seed_cap: Option<f64>,
    pub steps_per_unit: Option<usize>,
}

fn axis_list<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Axis>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Spec {
        Text(String),
        Table(Axis),
    }
    Vec::<Spec>::deserialize(d)?
        .into_iter()
        .map(|s| match s {
            Spec::Text(t) => parse_axis(&t).map_err(serde::de::Error::custom),
            Spec::Table(a) => Ok(a),
        })
        .collect()
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())).into())
    }
}

/// Grid overrides given on the command line.
#[derive(Debug, Clone, Default)]
pub struct GridFlags {
    pub axes: Vec<Axis>,
    pub fixed: Vec<(String, f64)>,
    pub seed_cap: Option<f64>,
    pub steps_per_unit: Option<usize>,
}

/// A grid ready to sweep, with the stem used for its output files.
#[derive(Debug, Clone, Serialize)]
pub struct Run {
    pub label: String,
    pub grid: SweepGrid,
}

fn config_err(msg: impl Into<String>) -> anyhow::Error {
    Error::Config(msg.into()).into()
}

fn parse_number(text: &str) -> Result<f64> {
    let t = text.trim();
    let v = match t {
        "pi" => std::f64::consts::PI,
        "pi/2" => std::f64::consts::FRAC_PI_2,
        "pi/4" => std::f64::consts::FRAC_PI_4,
        _ => t
            .parse::<f64>()
            .map_err(|_| config_err(format!("'{t}' is not a number")))?,
    };
    Ok(v)
}

/// `name=min:max:count[:lin|:log]`.
pub fn parse_axis(spec: &str) -> Result<Axis> {
    let (name, range) = spec.split_once('=').ok_or_else(|| {
        config_err(format!(
            "axis '{spec}' should look like name=min:max:count[:log]"
        ))
    })?;
    let parts: Vec<&str> = range.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(config_err(format!(
            "axis '{spec}' should look like name=min:max:count[:log]"
        )));
    }
    let count = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|_| config_err(format!("axis count '{}' is not a whole number", parts[2])))?;
    let spacing = match parts.get(3).map(|s| s.trim()) {
        None | Some("lin") | Some("linear") => Spacing::Linear,
        Some("log") => Spacing::Log,
        Some(other) => return Err(config_err(format!("unknown axis spacing '{other}'"))),
    };
    let axis = Axis {
        name: name.trim().to_string(),
        min: parse_number(parts[0])?,
        max: parse_number(parts[1])?,
        count,
        spacing,
    };
    axis.validate()?;
    Ok(axis)
}

/// `name=value`.
pub fn parse_fix(spec: &str) -> Result<(String, f64)> {
    let (name, value) = spec
        .split_once('=')
        .ok_or_else(|| config_err(format!("fixed value '{spec}' should look like name=value")))?;
    Ok((name.trim().to_string(), parse_number(value)?))
}

/// Comma-separated thresholds; `inf` allowed.
pub fn parse_thresholds(text: &str) -> Result<Vec<f64>> {
    let out = text
        .split(',')
        .map(|t| match t.trim() {
            "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
            other => parse_number(other),
        })
        .collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        return Err(config_err("no thresholds given"));
    }
    Ok(out)
}

/// `min:max:count[:zero]`.
pub fn parse_bins(text: &str) -> Result<AlphaBins> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || {
        config_err(format!(
            "bins '{text}' should look like min:max:count[:zero]"
        ))
    };
    if !(3..=4).contains(&parts.len()) {
        return Err(bad());
    }
    let include_zero = match parts.get(3).map(|s| s.trim()) {
        None => false,
        Some("zero") => true,
        Some(_) => return Err(bad()),
    };
    let bins = AlphaBins {
        min: parse_number(parts[0])?,
        max: parse_number(parts[1])?,
        count: parts[2].trim().parse().map_err(|_| bad())?,
        include_zero,
    };
    bins.validate()?;
    Ok(bins)
}

/// Default grid for `method`, overlaid first by `file` and then by `flags`.
/// A parameter named in an overlay replaces any axis or fixed value of the
/// same name.
pub fn build_grid(
    method: Method,
    file: Option<&RunConfig>,
    flags: &GridFlags,
) -> Result<SweepGrid> {
    let mut grid = SweepGrid::default_for(method);
    if let Some(rc) = file {
        let fixed: Vec<(String, f64)> = rc.fixed.iter().map(|(k, v)| (k.clone(), *v)).collect();
        overlay(&mut grid, &rc.axes, &fixed);
        if let Some(cap) = rc.seed_cap {
            grid.constraints = vec![Constraint::SeedInputCap(cap)];
        }
        if let Some(s) = rc.steps_per_unit {
            grid.steps_per_unit = s;
        }
    }
    overlay(&mut grid, &flags.axes, &flags.fixed);
    if let Some(cap) = flags.seed_cap {
        grid.constraints = vec![Constraint::SeedInputCap(cap)];
    }
    if let Some(s) = flags.steps_per_unit {
        grid.steps_per_unit = s;
    }
    grid.validate()?;
    Ok(grid)
}

fn overlay(grid: &mut SweepGrid, axes: &[Axis], fixed: &[(String, f64)]) {
    let names: Vec<&str> = axes
        .iter()
        .map(|a| a.name.as_str())
        .chain(fixed.iter().map(|(n, _)| n.as_str()))
        .collect();
    grid.axes.retain(|a| !names.contains(&a.name.as_str()));
    grid.fixed.retain(|(n, _)| !names.contains(&n.as_str()));
    grid.axes.extend(axes.iter().cloned());
    grid.fixed.extend(fixed.iter().cloned());
}

/// Resolves the runs to execute. `--method` selects one run (taking its grid
/// settings from a config entry of the same method, if any); otherwise every
/// `[[run]]` entry of the file is used.
pub fn resolve_runs(
    method: Option<&str>,
    file: &FileConfig,
    flags: &GridFlags,
) -> Result<Vec<Run>> {
    if let Some(m) = method {
        let method: Method = m.parse()?;
        let rc = file
            .run
            .iter()
            .find(|r| r.method.parse::<Method>().ok() == Some(method));
        let label = rc
            .and_then(|r| r.label.clone())
            .unwrap_or_else(|| method.name().to_string());
        return Ok(vec![Run {
            label,
            grid: build_grid(method, rc, flags)?,
        }]);
    }
    if file.run.is_empty() {
        return Err(config_err(
            "no method given: pass --method or add [[run]] entries to --config",
        ));
    }
    let mut runs = Vec::new();
    for rc in &file.run {
        let method: Method = rc.method.parse()?;
        let label = rc
            .label
            .clone()
            .unwrap_or_else(|| method.name().to_string());
        if runs.iter().any(|r: &Run| r.label == label) {
            return Err(config_err(format!(
                "run label '{label}' used twice; set distinct labels"
            )));
        }
        runs.push(Run {
            label,
            grid: build_grid(method, Some(rc), flags)?,
        });
    }
    Ok(runs)
}

pub fn resolve_thresholds(flag: Option<&str>, file: &FileConfig) -> Result<Vec<f64>> {
    match (flag, &file.thresholds) {
        (Some(t), _) => parse_thresholds(t),
        (None, Some(t)) if !t.is_empty() => Ok(t.clone()),
        (None, Some(_)) => Err(config_err("thresholds list in config is empty")),
        (None, None) => Ok(DEFAULT_THRESHOLDS.to_vec()),
    }
}

pub fn resolve_bins(flag: Option<&str>, file: &FileConfig) -> Result<AlphaBins> {
    let bins = match flag {
        Some(b) => parse_bins(b)?,
        None => file.bins.unwrap_or_default(),
    };
    bins.validate()?;
    Ok(bins)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Threshold(#[serde(with = "extended_f64")] pub f64);

/// Everything that determined an output, echoed into its metadata.
#[derive(Debug, Clone, Serialize)]
pub struct Effective<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<&'a [Run]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<Threshold>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<AlphaBins>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_source: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<&'static str, serde_json::Value>,
}

impl<'a> Effective<'a> {
    pub fn new(command: &'static str) -> Self {
        Effective {
            tool: "sqzlab",
            version: env!("CARGO_PKG_VERSION"),
            command,
            runs: None,
            thresholds: None,
            bins: None,
            points_source: None,
            extra: BTreeMap::new(),
        }
    }
}
