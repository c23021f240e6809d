// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{Axis, Method, SweepGrid};
use crate::beamsplitter::{bs_evaluate, BsParams};
use crate::error::{Error, Result};
use crate::opa::{opa_sample, OpaParams};
use crate::opo::{nonmonotonic_cutoff, opo_evaluate, OpoParams};
use crate::optomech::{om_evaluate, OmParams};
use crate::quadrature::MethodPoint;

/// Why a grid point produced no output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    /// Parameters outside the method's domain.
    Domain,
    /// No admissible steady-state root.
    Branch,
    /// Amplifier integration failed its step-doubling check.
    NonConvergence,
    /// Past the first decrease of α² along the seed axis.
    NonmonotonicAlphaSq,
    /// Seed input power above the configured cap.
    SeedInputCap,
    /// The evaluator returned a non-finite or non-positive quantity.
    NonFinite,
}

impl SkipReason {
    pub fn code(&self) -> &'static str {
        match self {
            SkipReason::Domain => "domain",
            SkipReason::Branch => "branch",
            SkipReason::NonConvergence => "non_convergence",
            SkipReason::NonmonotonicAlphaSq => "nonmonotonic_alpha_sq",
            SkipReason::SeedInputCap => "seed_input_cap",
            SkipReason::NonFinite => "non_finite",
        }
    }

    fn from_error(e: &Error) -> Self {
        match e {
            Error::Branch(_) => SkipReason::Branch,
            Error::NonConvergence(_) => SkipReason::NonConvergence,
            Error::Domain(_) | Error::Config(_) => SkipReason::Domain,
        }
    }
}

impl std::fmt::Display for SkipReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SweepOutcome {
    Ok { point: MethodPoint },
    Skipped { reason: SkipReason, detail: String },
}

impl SweepOutcome {
    fn skipped(reason: SkipReason, detail: impl Into<String>) -> Self {
        SweepOutcome::Skipped {
            reason,
            detail: detail.into(),
        }
    }

    fn from_result(r: Result<MethodPoint>) -> Self {
        match r {
            Ok(point) if point.is_finite() && point.stats.validate().is_ok() => {
                SweepOutcome::Ok { point }
            }
            Ok(point) => SweepOutcome::skipped(
                SkipReason::NonFinite,
                format!(
                    "alpha_sq = {}, var_x = {}, var_p = {}",
                    point.alpha_sq, point.stats.var_x, point.stats.var_p
                ),
            ),
            Err(e) => SweepOutcome::skipped(SkipReason::from_error(&e), e.to_string()),
        }
    }

    pub fn point(&self) -> Option<&MethodPoint> {
        match self {
            SweepOutcome::Ok { point } => Some(point),
            SweepOutcome::Skipped { .. } => None,
        }
    }

    pub fn skip_reason(&self) -> Option<SkipReason> {
        match self {
            SweepOutcome::Ok { .. } => None,
            SweepOutcome::Skipped { reason, .. } => Some(*reason),
        }
    }
}

/// One grid point: every method parameter (in [`Method::param_names`] order)
/// and what the evaluator made of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub coords: Vec<f64>,
    pub outcome: SweepOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub method: Method,
    pub param_names: Vec<String>,
    pub records: Vec<SweepRecord>,
}

impl SweepResult {
    pub fn points(&self) -> Vec<MethodPoint> {
        self.records
            .iter()
            .filter_map(|r| r.outcome.point().copied())
            .collect()
    }

    pub fn skipped(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.outcome.point().is_none())
            .count()
    }

    pub fn skip_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            if let Some(reason) = r.outcome.skip_reason() {
                *out.entry(reason.code()).or_insert(0) += 1;
            }
        }
        out
    }
}

fn unravel(mut flat: usize, counts: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; counts.len()];
    for (slot, &n) in idx.iter_mut().zip(counts).rev() {
        *slot = flat % n;
        flat /= n;
    }
    idx
}

struct Plan<'a> {
    grid: &'a SweepGrid,
    axes: Vec<&'a Axis>,
    values: Vec<Vec<f64>>,
}

impl Plan<'_> {
    fn coords(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().zip(&self.values).map(|(&i, v)| v[i]).collect()
    }

    fn param(&self, coords: &[f64], name: &str) -> f64 {
        self.grid.lookup(&self.axes, coords, name)
    }

    fn record(&self, coords: &[f64], outcome: SweepOutcome) -> SweepRecord {
        SweepRecord {
            coords: self
                .grid
                .method
                .param_names()
                .iter()
                .map(|n| self.param(coords, n))
                .collect(),
            outcome,
        }
    }

    fn seed_capped(&self, seed_ratio: f64) -> Option<SweepOutcome> {
        let cap = self.grid.seed_input_cap()?;
        (seed_ratio * seed_ratio > cap).then(|| {
            SweepOutcome::skipped(
                SkipReason::SeedInputCap,
                format!(
                    "seed input power ratio {} exceeds cap {cap}",
                    seed_ratio * seed_ratio
                ),
            )
        })
    }

    fn evaluate_point(&self, coords: &[f64]) -> SweepOutcome {
        let m = self.grid.method;
        let p = |n| self.param(coords, n);
        let r = match m {
            Method::BeamSplitter => bs_evaluate(&BsParams {
                b: p("b"),
                theta: p("theta"),
            }),
            Method::OpoPhase | Method::OpoAmplitude => {
                if let Some(skip) = self.seed_capped(p("seed_ratio")) {
                    return skip;
                }
                opo_evaluate(&OpoParams {
                    c0: p("c0"),
                    seed_ratio: p("seed_ratio"),
                    regime: m.regime().expect("oscillator regime"),
                })
            }
            Method::OmAmplitude | Method::OmPhase => om_evaluate(&OmParams {
                cc: p("cc"),
                dd: p("dd"),
                n_bar: p("nbar"),
                axis: m.om_axis().expect("optomechanical axis"),
            }),
            Method::OpaPhase | Method::OpaAmplitude => unreachable!("amplifier rows run whole"),
        };
        SweepOutcome::from_result(r)
    }

    /// One amplifier run per outer point, sampled at every `tau` value.
    fn evaluate_row(&self, outer: &[f64], taus: &[f64]) -> Vec<SweepRecord> {
        let with_tau = |t: f64| {
            let mut c = outer.to_vec();
            if self.axes.last().is_some_and(|a| a.name == "tau") {
                c.push(t);
            }
            c
        };
        let all = |outcome: SweepOutcome| {
            taus.iter()
                .map(|&t| self.record(&with_tau(t), outcome.clone()))
                .collect()
        };
        let seed = self.param(&with_tau(taus[0]), "seed_ratio");
        if let Some(skip) = self.seed_capped(seed) {
            return all(skip);
        }
        let t_max = taus.iter().copied().fold(0.0, f64::max);
        let t_max = if t_max > 0.0 { t_max } else { 1.0 };
        let params = OpaParams {
            seed_ratio: seed,
            t_max,
            n_steps: ((self.grid.steps_per_unit as f64 * t_max).ceil() as usize).max(2),
            regime: self.grid.method.regime().expect("amplifier regime"),
        };
        match opa_sample(&params, taus) {
            Ok(traj) => traj
                .points()
                .zip(taus)
                .map(|(pt, &t)| self.record(&with_tau(t), SweepOutcome::from_result(Ok(pt))))
                .collect(),
            Err(e) => all(SweepOutcome::from_result(Err(e))),
        }
    }
}

/// Evaluates every grid point, row-major over the axes (first axis
/// outermost; the amplifier's `tau` innermost). Points the evaluator rejects
/// are kept as skipped records. Deterministic regardless of thread count.
pub fn sweep(grid: &SweepGrid) -> Result<SweepResult> {
    grid.validate()?;
    let axes = grid.ordered_axes();
    let values: Vec<Vec<f64>> = axes.iter().map(|a| a.values()).collect();
    let plan = Plan { grid, axes, values };
    let counts: Vec<usize> = plan.axes.iter().map(|a| a.count).collect();

    let records: Vec<SweepRecord> = if grid.method.is_opa() {
        let tau_axis = plan.axes.last().is_some_and(|a| a.name == "tau");
        let (outer_counts, taus) = if tau_axis {
            (
                &counts[..counts.len() - 1],
                plan.values.last().expect("tau axis").clone(),
            )
        } else {
            (&counts[..], vec![plan.param(&[], "tau")])
        };
        let outer_n: usize = outer_counts.iter().product();
        (0..outer_n)
            .into_par_iter()
            .map(|flat| {
                let idx = unravel(flat, outer_counts);
                plan.evaluate_row(&plan.coords(&idx), &taus)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    } else {
        let n: usize = counts.iter().product();
        (0..n)
            .into_par_iter()
            .map(|flat| {
                let coords = plan.coords(&unravel(flat, &counts));
                let outcome = plan.evaluate_point(&coords);
                plan.record(&coords, outcome)
            })
            .collect()
    };

    let mut result = SweepResult {
        method: grid.method,
        param_names: grid
            .method
            .param_names()
            .iter()
            .map(|s| s.to_string())
            .collect(),
        records,
    };
    if grid.method == Method::OpoAmplitude {
        apply_cutoff(&plan, &counts, &mut result.records);
    }
    Ok(result)
}

/// Marks every point past the first decrease of α² along the seed axis.
fn apply_cutoff(plan: &Plan, counts: &[usize], records: &mut [SweepRecord]) {
    let Some(j) = plan.axes.iter().position(|a| a.name == "seed_ratio") else {
        return;
    };
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for flat in 0..records.len() {
        let mut idx = unravel(flat, counts);
        idx.remove(j);
        groups.entry(idx).or_default().push(flat);
    }
    for members in groups.values() {
        let ok: Vec<(usize, f64)> = members
            .iter()
            .filter_map(|&i| records[i].outcome.point().map(|p| (i, p.alpha_sq)))
            .collect();
        let alphas: Vec<f64> = ok.iter().map(|&(_, a)| a).collect();
        let Some(cut) = nonmonotonic_cutoff(&alphas) else {
            continue;
        };
        let (first, peak) = (ok[cut].0, alphas[cut - 1]);
        for &i in members.iter().filter(|&&i| i >= first) {
            if records[i].outcome.point().is_some() {
                records[i].outcome = SweepOutcome::skipped(
                    SkipReason::NonmonotonicAlphaSq,
                    format!("alpha_sq turns over after reaching {peak}"),
                );
            }
        }
    }
}
