// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opa::DEFAULT_STEPS_PER_UNIT;
use crate::quadrature::{Regime, SqueezedAxis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[serde(rename = "bs")]
    BeamSplitter,
    OpoPhase,
    OpoAmplitude,
    OpaPhase,
    OpaAmplitude,
    OmAmplitude,
    OmPhase,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::BeamSplitter,
        Method::OpoPhase,
        Method::OpoAmplitude,
        Method::OpaPhase,
        Method::OpaAmplitude,
        Method::OmAmplitude,
        Method::OmPhase,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::BeamSplitter => "bs",
            Method::OpoPhase => "opo-phase",
            Method::OpoAmplitude => "opo-amplitude",
            Method::OpaPhase => "opa-phase",
            Method::OpaAmplitude => "opa-amplitude",
            Method::OmAmplitude => "om-amplitude",
            Method::OmPhase => "om-phase",
        }
    }

    /// Swept parameter names in reporting order.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Method::BeamSplitter => &["b", "theta"],
            Method::OpoPhase | Method::OpoAmplitude => &["c0", "seed_ratio"],
            Method::OpaPhase | Method::OpaAmplitude => &["seed_ratio", "tau"],
            Method::OmAmplitude | Method::OmPhase => &["cc", "dd", "nbar"],
        }
    }

    /// Value used for a parameter left off the grid, if it has one.
    pub fn default_value(&self, name: &str) -> Option<f64> {
        match (self, name) {
            (Method::OmAmplitude | Method::OmPhase, "nbar") => Some(0.0),
            _ => None,
        }
    }

    pub fn regime(&self) -> Option<Regime> {
        match self {
            Method::OpoPhase | Method::OpaPhase => Some(Regime::PhaseSqueezing),
            Method::OpoAmplitude | Method::OpaAmplitude => Some(Regime::AmplitudeSqueezing),
            _ => None,
        }
    }

    pub fn om_axis(&self) -> Option<SqueezedAxis> {
        match self {
            Method::OmAmplitude => Some(SqueezedAxis::Amplitude),
            Method::OmPhase => Some(SqueezedAxis::Phase),
            _ => None,
        }
    }

    pub fn is_opa(&self) -> bool {
        matches!(self, Method::OpaPhase | Method::OpaAmplitude)
    }

    fn takes_seed(&self) -> bool {
        matches!(
            self,
            Method::OpoPhase | Method::OpoAmplitude | Method::OpaPhase | Method::OpaAmplitude
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase().replace('_', "-");
        match s.as_str() {
            "beamsplitter" | "beam-splitter" => return Ok(Method::BeamSplitter),
            _ => {}
        }
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Method::ALL.iter().map(Method::name).collect();
                Error::config(format!(
                    "unknown method '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn linear(name: &str, min: f64, max: f64, count: usize) -> Self {
        Axis {
            name: name.to_string(),
            min,
            max,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(name: &str, min: f64, max: f64, count: usize) -> Self {
        Axis {
            spacing: Spacing::Log,
            ..Axis::linear(name, min, max, count)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::config(format!(
                "axis '{}' needs at least 2 points, got {}",
                self.name, self.count
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::config(format!(
                "axis '{}' needs finite min < max, got {}..{}",
                self.name, self.min, self.max
            )));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(Error::config(format!(
                "log axis '{}' needs min > 0, got {}",
                self.name, self.min
            )));
        }
        Ok(())
    }

    /// Grid values, ascending, with both endpoints exact.
    pub fn values(&self) -> Vec<f64> {
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == last {
                    return self.max;
                }
                let f = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * f,
                    Spacing::Log => (self.min.ln() + (self.max / self.min).ln() * f).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// Caps the seed-to-pump input power ratio `(ℰ_s/ℰ_p)²`.
    SeedInputCap(f64),
}

impl Constraint {
    fn validate(&self, method: Method) -> Result<()> {
        match *self {
            Constraint::SeedInputCap(cap) => {
                if !method.takes_seed() {
                    return Err(Error::config(format!(
                        "seed_input_cap does not apply to {method}"
                    )));
                }
                if cap.is_nan() || cap < 0.0 {
                    return Err(Error::config(format!(
                        "seed_input_cap must be non-negative, got {cap}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Cartesian parameter grid for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub method: Method,
    pub axes: Vec<Axis>,
    /// Parameters held at a single value.
    #[serde(default)]
    pub fixed: Vec<(String, f64)>,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
    /// RK4 resolution for the amplifier.
    #[serde(default = "default_steps")]
    pub steps_per_unit: usize,
}

fn default_steps() -> usize {
    DEFAULT_STEPS_PER_UNIT
}

impl SweepGrid {
    pub fn new(method: Method, axes: Vec<Axis>) -> Self {
        SweepGrid {
            method,
            axes,
            fixed: Vec::new(),
            constraints: Vec::new(),
            steps_per_unit: DEFAULT_STEPS_PER_UNIT,
        }
    }

    pub fn fix(mut self, name: &str, value: f64) -> Self {
        self.fixed.push((name.to_string(), value));
        self
    }

    pub fn constrain(mut self, c: Constraint) -> Self {
        self.constraints.push(c);
        self
    }

    /// Grids used when none is configured; dense enough to resolve 200
    /// log bins over `α² ∈ [1e-6, 1]`.
    pub fn default_for(method: Method) -> Self {
        use std::f64::consts::FRAC_PI_2;
        match method {
            Method::BeamSplitter => SweepGrid::new(
                method,
                vec![
                    Axis::linear("b", 0.0, 4.0, 161),
                    Axis::log("theta", 5e-4, FRAC_PI_2, 400),
                ],
            ),
            Method::OpoPhase | Method::OpoAmplitude => SweepGrid::new(
                method,
                vec![
                    Axis::linear("c0", 0.01, 0.999, 200),
                    Axis::log("seed_ratio", 1e-5, 10.0, 400),
                ],
            ),
            Method::OpaPhase | Method::OpaAmplitude => SweepGrid::new(
                method,
                vec![
                    Axis::log("seed_ratio", 1e-3, 30.0, 80),
                    Axis::log("tau", 1e-3, 8.0, 320),
                ],
            ),
            Method::OmAmplitude | Method::OmPhase => SweepGrid::new(
                method,
                vec![
                    Axis::log("cc", 1.0, 10.0, 400),
                    Axis::log("dd", 1e-3, 1.0, 400),
                ],
            )
            .fix("nbar", 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let known = self.method.param_names();
        let mut seen: Vec<&str> = Vec::new();
        let names = self
            .axes
            .iter()
            .map(|a| a.name.as_str())
            .chain(self.fixed.iter().map(|(n, _)| n.as_str()));
        for name in names {
            if !known.contains(&name) {
                return Err(Error::config(format!(
                    "unknown parameter '{name}' for {} (expected {})",
                    self.method,
                    known.join(", ")
                )));
            }
            if seen.contains(&name) {
                return Err(Error::config(format!(
                    "parameter '{name}' given more than once"
                )));
            }
            seen.push(name);
        }
        for name in known {
            if !seen.contains(name) && self.method.default_value(name).is_none() {
                return Err(Error::config(format!(
                    "parameter '{name}' for {} needs an axis or a fixed value",
                    self.method
                )));
            }
        }
        for axis in &self.axes {
            axis.validate()?;
        }
        for (name, v) in &self.fixed {
            if !v.is_finite() {
                return Err(Error::config(format!(
                    "fixed '{name}' must be finite, got {v}"
                )));
            }
        }
        for c in &self.constraints {
            c.validate(self.method)?;
        }
        if self.method.is_opa() && self.steps_per_unit < 1 {
            return Err(Error::config("steps_per_unit must be at least 1"));
        }
        Ok(())
    }

    pub fn seed_input_cap(&self) -> Option<f64> {
        self.constraints
            .iter()
            .map(|c| match *c {
                Constraint::SeedInputCap(cap) => cap,
            })
            .reduce(f64::min)
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axes in iteration order: as given, except that the amplifier's `tau`
    /// axis always runs innermost so one integration serves a whole row.
    pub(crate) fn ordered_axes(&self) -> Vec<&Axis> {
        let mut axes: Vec<&Axis> = self.axes.iter().collect();
        if self.method.is_opa() {
            if let Some(i) = axes.iter().position(|a| a.name == "tau") {
                let tau = axes.remove(i);
                axes.push(tau);
            }
        }
        axes
    }

    /// Value of `name` for a point whose axis values are `coords` (aligned
    /// with [`Self::ordered_axes`]).
    pub(crate) fn lookup(&self, axes: &[&Axis], coords: &[f64], name: &str) -> f64 {
        if let Some(i) = axes.iter().position(|a| a.name == name) {
            return coords[i];
        }
        if let Some((_, v)) = self.fixed.iter().find(|(n, _)| n == name) {
            return *v;
        }
        self.method
            .default_value(name)
            .expect("validated grid covers every parameter")
    }
}
