// SPDX-License-Identifier: Apache-2.0

//! Quadrature statistics shared by every method evaluator.

use serde::{Deserialize, Serialize};

use crate::beamsplitter::BsParams;
use crate::error::{Error, Result};
use crate::opa::OpaSample;
use crate::opo::OpoParams;
use crate::optomech::OmParams;

/// Variance of either quadrature in the vacuum state.
pub const VACUUM_VARIANCE: f64 = 1.0;

/// Output quadrature variances `(ΔX)², (ΔP)²` in vacuum units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureStats {
    pub var_x: f64,
    pub var_p: f64,
}

impl QuadratureStats {
    pub const VACUUM: QuadratureStats = QuadratureStats {
        var_x: VACUUM_VARIANCE,
        var_p: VACUUM_VARIANCE,
    };

    pub fn new(var_x: f64, var_p: f64) -> Result<Self> {
        let stats = QuadratureStats { var_x, var_p };
        stats.validate()?;
        Ok(stats)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("var_x", self.var_x), ("var_p", self.var_p)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::domain(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// `ΔX·ΔP`; 1 for pure minimum-uncertainty states.
    pub fn uncertainty(&self) -> f64 {
        (self.var_x * self.var_p).sqrt()
    }

    pub fn metrics(&self) -> SqueezeMetrics {
        let (lo, hi) = if self.var_x <= self.var_p {
            (self.var_x, self.var_p)
        } else {
            (self.var_p, self.var_x)
        };
        SqueezeMetrics {
            squeeze_db: -10.0 * lo.log10(),
            antisqueeze_db: -10.0 * hi.log10(),
            uncertainty: self.uncertainty(),
            squeezed_axis: if self.var_x <= self.var_p {
                SqueezedAxis::Amplitude
            } else {
                SqueezedAxis::Phase
            },
        }
    }

    /// The same state with the roles of X and P exchanged.
    pub fn swapped(&self) -> Self {
        QuadratureStats {
            var_x: self.var_p,
            var_p: self.var_x,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.var_x.is_finite() && self.var_p.is_finite()
    }
}

/// Overall uncertainty `sqrt(var_x · var_p)`, rejecting non-finite or
/// non-positive variances.
pub fn uncertainty(stats: &QuadratureStats) -> Result<f64> {
    stats.validate()?;
    Ok(stats.uncertainty())
}

pub fn squeeze_metrics(stats: &QuadratureStats) -> Result<SqueezeMetrics> {
    stats.validate()?;
    Ok(stats.metrics())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SqueezedAxis {
    Amplitude,
    Phase,
}

impl std::fmt::Display for SqueezedAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SqueezedAxis::Amplitude => "amplitude",
            SqueezedAxis::Phase => "phase",
        })
    }
}

impl std::str::FromStr for SqueezedAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" | "x" => Ok(SqueezedAxis::Amplitude),
            "phase" | "p" => Ok(SqueezedAxis::Phase),
            _ => Err(Error::config(format!(
                "unknown axis '{s}' (expected amplitude or phase)"
            ))),
        }
    }
}

/// Operating regime of a seeded parametric process, set by the relative sign
/// of pump and seed displacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Seed amplified, output phase squeezed.
    PhaseSqueezing,
    /// Seed deamplified, output amplitude squeezed.
    AmplitudeSqueezing,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::PhaseSqueezing => "phase",
            Regime::AmplitudeSqueezing => "amplitude",
        })
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phase" | "amplifying" => Ok(Regime::PhaseSqueezing),
            "amplitude" | "deamplifying" => Ok(Regime::AmplitudeSqueezing),
            _ => Err(Error::config(format!(
                "unknown regime '{s}' (expected phase or amplitude)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeMetrics {
    /// `−10·log10(min(var_x, var_p))`; positive below vacuum noise.
    pub squeeze_db: f64,
    /// `−10·log10(max(var_x, var_p))`; negative for an anti-squeezed quadrature.
    pub antisqueeze_db: f64,
    pub uncertainty: f64,
    pub squeezed_axis: SqueezedAxis,
}

/// Parameters that produced a [`MethodPoint`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MethodParams {
    BeamSplitter(BsParams),
    Opo(OpoParams),
    Opa(OpaSample),
    Optomech(OmParams),
}

impl MethodParams {
    /// Names of the numeric parameters, in reporting order.
    pub fn names(&self) -> &'static [&'static str] {
        match self {
            MethodParams::BeamSplitter(_) => &["b", "theta"],
            MethodParams::Opo(_) => &["c0", "seed_ratio"],
            MethodParams::Opa(_) => &["seed_ratio", "tau"],
            MethodParams::Optomech(_) => &["cc", "dd", "nbar"],
        }
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        match (self, name) {
            (MethodParams::BeamSplitter(p), "b") => Some(p.b),
            (MethodParams::BeamSplitter(p), "theta") => Some(p.theta),
            (MethodParams::Opo(p), "c0") => Some(p.c0),
            (MethodParams::Opo(p), "seed_ratio") => Some(p.seed_ratio),
            (MethodParams::Opa(p), "seed_ratio") => Some(p.seed_ratio),
            (MethodParams::Opa(p), "tau") => Some(p.tau),
            (MethodParams::Optomech(p), "cc") => Some(p.cc),
            (MethodParams::Optomech(p), "dd") => Some(p.dd),
            (MethodParams::Optomech(p), "nbar") => Some(p.n_bar),
            _ => None,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.names()
            .iter()
            .map(|n| self.value(n).expect("name listed by names()"))
            .collect()
    }
}

/// One evaluated operating point of a squeezing method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodPoint {
    /// Relative squared output displacement α².
    pub alpha_sq: f64,
    pub stats: QuadratureStats,
    pub params: MethodParams,
}

impl MethodPoint {
    pub fn metrics(&self) -> SqueezeMetrics {
        self.stats.metrics()
    }

    pub fn uncertainty(&self) -> f64 {
        self.stats.uncertainty()
    }

    pub fn is_finite(&self) -> bool {
        self.alpha_sq.is_finite() && self.stats.is_finite()
    }
}
