// SPDX-License-Identifier: Apache-2.0

//! `sqzlab`: squeezing trade-off calculator.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration or domain error,
//! 3 numerical non-convergence.

mod config;
mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sqzlab_core::oracle::{bs_oracle, mean_field_ode};
use sqzlab_core::{
    bs_evaluate, frontier, om_evaluate, opa_evaluate, opa_mean_field, opa_propagate, opo_evaluate,
    opo_perturbative, sweep, BsParams, Error, FrontierCurve, Method, MethodPoint, OmParams,
    OpaParams, OpoParams, Regime, SqueezedAxis, SweepResult,
};

use config::{Effective, FileConfig, Format, GridFlags, Run, Threshold};
use output::{emit, num, sig12, to_json};

#[derive(Parser)]
#[command(
    name = "sqzlab",
    version,
    about = "Brightness, squeezing and uncertainty trade-offs of bright squeezed light"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one operating point of a method.
    Point(PointArgs),
    /// Evaluate a method over a parameter grid.
    Sweep(SweepArgs),
    /// Best squeezing per α² bin under uncertainty thresholds.
    Frontier(FrontierArgs),
    /// Time series of the seeded parametric amplifier.
    OpaTrajectory(TrajectoryArgs),
    /// Compare evaluators against the brute-force oracles.
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PointMethod {
    Bs,
    Opo,
    Opa,
    Om,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    /// Amplifying; squeezes the phase quadrature.
    Phase,
    /// Deamplifying; squeezes the amplitude quadrature.
    Amplitude,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Phase => Regime::PhaseSqueezing,
            RegimeArg::Amplitude => Regime::AmplitudeSqueezing,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Amplitude,
    Phase,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum PointFormat {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
struct PointArgs {
    method: PointMethod,
    /// Beam splitter: squeeze parameter B of the input vacuum.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Beam splitter: mixing angle θ in radians.
    #[arg(long)]
    theta: Option<f64>,
    /// Oscillator: pump strength 𝒞₀ at zero seed, in (0, 1).
    #[arg(long)]
    c0: Option<f64>,
    /// Oscillator and amplifier: seed-to-pump input amplitude ratio.
    #[arg(long)]
    seed_ratio: Option<f64>,
    #[arg(long, value_enum, default_value = "phase")]
    regime: RegimeArg,
    /// Oscillator: use the small-seed expansion.
    #[arg(long)]
    perturbative: bool,
    /// Amplifier: dimensionless interaction time.
    #[arg(long)]
    tau: Option<f64>,
    /// Amplifier: RK4 steps per unit time.
    #[arg(long, default_value_t = sqzlab_core::opa::DEFAULT_STEPS_PER_UNIT)]
    steps_per_unit: usize,
    /// Optomechanics: cooperativity 𝒞.
    #[arg(long)]
    cc: Option<f64>,
    /// Optomechanics: probe asymmetry 𝒟.
    #[arg(long)]
    dd: Option<f64>,
    /// Optomechanics: mechanical thermal occupation.
    #[arg(long, default_value_t = 0.0)]
    nbar: f64,
    /// Optomechanics: squeezed quadrature.
    #[arg(long, value_enum, default_value = "amplitude")]
    axis: AxisArg,
    #[arg(long, value_enum, default_value = "text")]
    format: PointFormat,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// bs, opo-phase, opo-amplitude, opa-phase, opa-amplitude, om-amplitude or om-phase.
    #[arg(long)]
    method: Option<String>,
    /// Swept parameter, `name=min:max:count[:log]`; replaces the default axis.
    #[arg(long = "axis", value_name = "SPEC")]
    axes: Vec<String>,
    /// Parameter held fixed, `name=value`.
    #[arg(long = "fix", value_name = "NAME=VALUE")]
    fixed: Vec<String>,
    /// Largest allowed seed-to-pump input power ratio.
    #[arg(long)]
    seed_cap: Option<f64>,
    /// Amplifier RK4 steps per unit time.
    #[arg(long)]
    steps_per_unit: Option<usize>,
    /// TOML file with defaults and `[[run]]` entries; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl GridArgs {
    fn flags(&self) -> Result<GridFlags> {
        Ok(GridFlags {
            axes: self
                .axes
                .iter()
                .map(|a| config::parse_axis(a))
                .collect::<Result<_>>()?,
            fixed: self
                .fixed
                .iter()
                .map(|f| config::parse_fix(f))
                .collect::<Result<_>>()?,
            seed_cap: self.seed_cap,
            steps_per_unit: self.steps_per_unit,
        })
    }

    fn file(&self) -> Result<FileConfig> {
        match &self.config {
            Some(p) => FileConfig::load(p),
            None => Ok(FileConfig::default()),
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FrontierArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Comma-separated uncertainty ceilings; `inf` for none.
    #[arg(long)]
    thresholds: Option<String>,
    /// α² bins, `min:max:count[:zero]`.
    #[arg(long)]
    bins: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG chart here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Build the frontier from a JSON sweep file instead of sweeping.
    #[arg(long, conflicts_with_all = ["method", "axes", "fixed", "seed_cap", "steps_per_unit"])]
    points: Option<PathBuf>,
    /// Write `<label>.csv|json`, `<label>.svg` and metadata per run here.
    #[arg(long, conflicts_with_all = ["out", "svg"])]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[arg(long)]
    seed_ratio: f64,
    #[arg(long, default_value_t = 5.0)]
    t_max: f64,
    #[arg(long, value_enum, default_value = "phase")]
    regime: RegimeArg,
    #[arg(long, default_value_t = sqzlab_core::opa::DEFAULT_STEPS_PER_UNIT)]
    steps_per_unit: usize,
    /// Keep every n-th sample (and the last).
    #[arg(long, default_value_t = 1)]
    stride: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(subcommand)]
    which: OracleWhich,
}

#[derive(Subcommand)]
enum OracleWhich {
    /// Gaussian-state engine against the beam-splitter closed form.
    Bs {
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long)]
        theta: f64,
    },
    /// Direct mean-field integration against the amplifier closed form.
    Opa {
        #[arg(long)]
        seed_ratio: f64,
        #[arg(long, default_value_t = 5.0)]
        t_max: f64,
        #[arg(long, value_enum, default_value = "phase")]
        regime: RegimeArg,
    },
}

fn missing(flag: &str, method: &str) -> anyhow::Error {
    Error::Config(format!("point {method} needs --{flag}")).into()
}

fn steps_for(t_max: f64, steps_per_unit: usize) -> usize {
    ((steps_per_unit as f64 * t_max).ceil() as usize).max(2)
}

fn cmd_point(a: &PointArgs) -> Result<()> {
    let (name, pt): (&str, MethodPoint) = match a.method {
        PointMethod::Bs => {
            let b = a.b.ok_or_else(|| missing("b", "bs"))?;
            let theta = a.theta.ok_or_else(|| missing("theta", "bs"))?;
            ("bs", bs_evaluate(&BsParams { b, theta })?)
        }
        PointMethod::Opo => {
            let p = OpoParams {
                c0: a.c0.ok_or_else(|| missing("c0", "opo"))?,
                seed_ratio: a.seed_ratio.ok_or_else(|| missing("seed-ratio", "opo"))?,
                regime: a.regime.into(),
            };
            let pt = if a.perturbative {
                opo_perturbative(&p)?
            } else {
                opo_evaluate(&p)?
            };
            ("opo", pt)
        }
        PointMethod::Opa => {
            let seed = a.seed_ratio.ok_or_else(|| missing("seed-ratio", "opa"))?;
            let tau = a.tau.ok_or_else(|| missing("tau", "opa"))?;
            let t_max = if tau > 0.0 { tau } else { 1.0 };
            let p = OpaParams {
                seed_ratio: seed,
                t_max,
                n_steps: steps_for(t_max, a.steps_per_unit),
                regime: a.regime.into(),
            };
            ("opa", opa_evaluate(&p, tau)?)
        }
        PointMethod::Om => {
            let p = OmParams {
                cc: a.cc.ok_or_else(|| missing("cc", "om"))?,
                dd: a.dd.ok_or_else(|| missing("dd", "om"))?,
                n_bar: a.nbar,
                axis: match a.axis {
                    AxisArg::Amplitude => SqueezedAxis::Amplitude,
                    AxisArg::Phase => SqueezedAxis::Phase,
                },
            };
            ("om", om_evaluate(&p)?)
        }
    };
    let m = pt.metrics();
    match a.format {
        PointFormat::Text => {
            let mut s = format!("method       {name}\n");
            for (k, v) in [
                ("alpha_sq", pt.alpha_sq),
                ("var_x", pt.stats.var_x),
                ("var_p", pt.stats.var_p),
                ("squeeze_db", m.squeeze_db),
                ("uncertainty", m.uncertainty),
            ] {
                s.push_str(&format!("{k:<12} {}\n", sig12(v)));
            }
            emit(None, &s)
        }
        PointFormat::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                point: &'a MethodPoint,
                squeeze_db: f64,
                uncertainty: f64,
            }
            emit(
                None,
                &to_json(&Out {
                    point: &pt,
                    squeeze_db: m.squeeze_db,
                    uncertainty: m.uncertainty,
                })?,
            )
        }
    }
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    meta: &'a Effective<'a>,
    result: &'a SweepResult,
}

#[derive(Deserialize)]
struct SweepDocIn {
    result: SweepResult,
}

fn report_skips(label: &str, result: &SweepResult) {
    let counts = result.skip_counts();
    if counts.is_empty() {
        return;
    }
    let parts: Vec<String> = counts.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    eprintln!(
        "note: {label}: {} of {} points skipped ({})",
        result.skipped(),
        result.records.len(),
        parts.join(", ")
    );
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let file = a.grid.file()?;
    let runs = config::resolve_runs(a.grid.method.as_deref(), &file, &a.grid.flags()?)?;
    if runs.len() != 1 {
        return Err(Error::Config(format!(
            "sweep runs one method; config has {} runs (select one with --method)",
            runs.len()
        ))
        .into());
    }
    let run = &runs[0];
    let format = a.format.or(file.format).unwrap_or_default();
    let out = a.out.clone().or(file.out.clone());
    let result = sweep(&run.grid)?;
    report_skips(&run.label, &result);
    let mut meta = Effective::new("sweep");
    meta.runs = Some(&runs);
    match format {
        Format::Csv => {
            emit(out.as_deref(), &output::sweep_csv(&run.grid, &result)?)?;
            if let Some(p) = &out {
                emit(Some(&output::sidecar(p)), &to_json(&meta)?)?;
            }
        }
        Format::Json => emit(
            out.as_deref(),
            &to_json(&SweepDoc {
                meta: &meta,
                result: &result,
            })?,
        )?,
    }
    Ok(())
}

#[derive(Serialize)]
struct FrontierDoc<'a> {
    meta: &'a Effective<'a>,
    method: Method,
    curves: &'a [FrontierCurve],
}

struct FrontierJob {
    label: String,
    method: Method,
    points: Vec<MethodPoint>,
}

fn warn_empty(label: &str, curves: &[FrontierCurve]) {
    for c in curves.iter().filter(|c| c.points.is_empty()) {
        eprintln!(
            "warning: {label}: no feasible points at threshold {}",
            num(c.threshold)
        );
    }
}

fn write_frontier(
    job: &FrontierJob,
    curves: &[FrontierCurve],
    meta: &Effective,
    format: Format,
    out: Option<&Path>,
    svg_path: Option<&Path>,
    bins: &sqzlab_core::AlphaBins,
) -> Result<()> {
    let meta_json = serde_json::to_string(meta)?;
    match format {
        Format::Csv => {
            emit(out, &output::frontier_csv(job.method, curves)?)?;
            if let Some(p) = out {
                emit(Some(&output::sidecar(p)), &to_json(meta)?)?;
            }
        }
        Format::Json => emit(
            out,
            &to_json(&FrontierDoc {
                meta,
                method: job.method,
                curves,
            })?,
        )?,
    }
    if let Some(p) = svg_path {
        let title = format!("{}: best squeezing under uncertainty ceilings", job.label);
        emit(Some(p), &svg::render(&title, curves, bins, &meta_json))?;
    }
    Ok(())
}

fn cmd_frontier(a: &FrontierArgs) -> Result<()> {
    let file = a.grid.file()?;
    let thresholds = config::resolve_thresholds(a.thresholds.as_deref(), &file)?;
    let bins = config::resolve_bins(a.bins.as_deref(), &file)?;
    let format = a.format.or(file.format).unwrap_or_default();
    // An explicit --out on the command line beats the file's out_dir.
    let out_dir = a
        .out_dir
        .clone()
        .or_else(|| file.out_dir.clone().filter(|_| a.out.is_none()));

    let mut meta = Effective::new("frontier");
    meta.thresholds = Some(thresholds.iter().map(|&t| Threshold(t)).collect());
    meta.bins = Some(bins);

    let runs: Vec<Run>;
    let jobs: Vec<FrontierJob> = if let Some(path) = &a.points {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let doc: SweepDocIn = serde_json::from_str(&text).map_err(|e| {
            Error::Config(format!("{}: not a sweep JSON file: {e}", path.display()))
        })?;
        meta.points_source = Some(path.display().to_string());
        runs = Vec::new();
        vec![FrontierJob {
            label: doc.result.method.name().to_string(),
            method: doc.result.method,
            points: doc.result.points(),
        }]
    } else {
        runs = config::resolve_runs(a.grid.method.as_deref(), &file, &a.grid.flags()?)?;
        runs.iter()
            .map(|run| {
                let result = sweep(&run.grid)?;
                report_skips(&run.label, &result);
                Ok(FrontierJob {
                    label: run.label.clone(),
                    method: run.grid.method,
                    points: result.points(),
                })
            })
            .collect::<Result<_>>()?
    };

    let dir_mode = out_dir.is_some() || jobs.len() > 1;
    if dir_mode && (a.out.is_some() || a.svg.is_some()) {
        return Err(Error::Config(format!(
            "--out and --svg name a single file but {} runs are selected; use --out-dir or --method",
            jobs.len()
        ))
        .into());
    }
    for (i, job) in jobs.iter().enumerate() {
        let curves = thresholds
            .iter()
            .map(|&t| frontier(&job.points, t, &bins))
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("frontier for {}", job.label))?;
        warn_empty(&job.label, &curves);
        let mut run_meta = meta.clone();
        if !runs.is_empty() {
            run_meta.runs = Some(&runs[i..=i]);
        }
        if dir_mode {
            let dir = out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
            let ext = match format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let data = dir.join(format!("{}.{ext}", job.label));
            let svg_path =
                (file.svg != Some(false)).then(|| dir.join(format!("{}.svg", job.label)));
            write_frontier(
                job,
                &curves,
                &run_meta,
                format,
                Some(&data),
                svg_path.as_deref(),
                &bins,
            )?;
        } else {
            let out = a.out.clone().or(file.out.clone());
            write_frontier(
                job,
                &curves,
                &run_meta,
                format,
                out.as_deref(),
                a.svg.as_deref(),
                &bins,
            )?;
        }
    }
    Ok(())
}

fn cmd_trajectory(a: &TrajectoryArgs) -> Result<()> {
    let p = OpaParams {
        seed_ratio: a.seed_ratio,
        t_max: a.t_max,
        n_steps: steps_for(a.t_max, a.steps_per_unit),
        regime: a.regime.into(),
    };
    let traj = opa_propagate(&p)?;
    match a.format {
        Format::Csv => {
            emit(a.out.as_deref(), &output::trajectory_csv(&traj, a.stride)?)?;
            if let Some(path) = &a.out {
                let mut meta = Effective::new("opa-trajectory");
                meta.extra.insert("params", serde_json::to_value(p)?);
                meta.extra.insert("stride", a.stride.into());
                emit(Some(&output::sidecar(path)), &to_json(&meta)?)?;
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                t: f64,
                a_s: f64,
                a_p: f64,
                var_x_s: f64,
                var_p_s: f64,
                uncertainty: f64,
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                meta: Effective<'a>,
                rows: Vec<Row>,
            }
            let mut meta = Effective::new("opa-trajectory");
            meta.extra.insert("params", serde_json::to_value(p)?);
            meta.extra.insert("stride", a.stride.into());
            let rows = output::trajectory_rows(traj.len(), a.stride)
                .into_iter()
                .map(|i| {
                    let s = traj.seed_stats(i);
                    Row {
                        t: traj.times[i],
                        a_s: traj.a_s[i],
                        a_p: traj.a_p[i],
                        var_x_s: s.var_x,
                        var_p_s: s.var_p,
                        uncertainty: s.uncertainty(),
                    }
                })
                .collect();
            emit(a.out.as_deref(), &to_json(&Doc { meta, rows })?)?;
        }
    }
    Ok(())
}

fn cmd_oracle(a: &OracleArgs) -> Result<()> {
    match a.which {
        OracleWhich::Bs { b, theta } => {
            let p = BsParams { b, theta };
            let (o, c) = (bs_oracle(&p)?, bs_evaluate(&p)?);
            println!("quantity     oracle               closed_form          abs_diff");
            for (k, x, y) in [
                ("alpha_sq", o.alpha_sq, c.alpha_sq),
                ("var_x", o.stats.var_x, c.stats.var_x),
                ("var_p", o.stats.var_p, c.stats.var_p),
            ] {
                println!(
                    "{k:<12} {:<20} {:<20} {:.3e}",
                    sig12(x),
                    sig12(y),
                    (x - y).abs()
                );
            }
        }
        OracleWhich::Opa {
            seed_ratio,
            t_max,
            regime,
        } => {
            let p = OpaParams {
                seed_ratio,
                t_max,
                n_steps: steps_for(t_max, sqzlab_core::opa::DEFAULT_STEPS_PER_UNIT),
                regime: regime.into(),
            };
            let traj = mean_field_ode(&p)?;
            let dev = traj
                .times
                .iter()
                .enumerate()
                .map(|(k, &t)| {
                    let (s, a) = opa_mean_field(&p, t);
                    (traj.a_s[k] - s).abs().max((traj.a_p[k] - a).abs())
                })
                .fold(0.0, f64::max);
            println!("steps               {}", p.n_steps);
            println!("step_halving_error  {:.3e}", traj.error_estimate);
            println!("max_closed_form_dev {dev:.3e}");
        }
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("SQZLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("SQZLAB_THREADS must be a whole number, got '{v}'")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::NonConvergence(_)) => 3,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Point(a) => cmd_point(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Frontier(a) => cmd_frontier(a),
        Command::OpaTrajectory(a) => cmd_trajectory(a),
        Command::Oracle(a) => cmd_oracle(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
