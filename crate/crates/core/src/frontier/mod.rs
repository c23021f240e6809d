// SPDX-License-Identifier: Apache-2.0

//! Parameter sweeps and constrained squeezing frontiers.
//!
//! A frontier is the best squeezing found in each α² bin among points whose
//! overall uncertainty stays at or below a threshold. It is read off a dense
//! [`sweep`] rather than optimized per bin.

mod grid;
mod sweep;

use serde::{Deserialize, Serialize};

pub use grid::{Axis, Constraint, Method, Spacing, SweepGrid};
pub use sweep::{sweep, SkipReason, SweepOutcome, SweepRecord, SweepResult};

use crate::error::{Error, Result};
use crate::quadrature::{MethodParams, MethodPoint};

/// Serde adapter writing `±∞` as the strings `"inf"`/`"-inf"`, since JSON
/// has no infinite numbers. Finite values stay plain numbers.
pub mod extended_f64 {
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
        } else {
            v.serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                _ => Err(de::Error::custom(format!(
                    "expected a number or \"inf\", got \"{t}\""
                ))),
            },
        }
    }
}

pub const DEFAULT_THRESHOLDS: [f64; 5] = [1.001, 1.01, 1.1, 2.0, 10.0];

/// Absolute slack on `uncertainty ≤ threshold`.
pub const FEASIBILITY_SLACK: f64 = 1e-12;

/// Log-spaced α² bins over `[min, max]`, optionally preceded by a bin
/// `[0, min)` reported at α² = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaBins {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub include_zero: bool,
}

impl Default for AlphaBins {
    fn default() -> Self {
        AlphaBins {
            min: 1e-6,
            max: 1.0,
            count: 200,
            include_zero: false,
        }
    }
}

impl AlphaBins {
    pub fn validate(&self) -> Result<()> {
        if !(self.min > 0.0 && self.max.is_finite() && self.min < self.max) {
            return Err(Error::config(format!(
                "bins need 0 < min < max, got {}..{}",
                self.min, self.max
            )));
        }
        if self.count == 0 {
            return Err(Error::config("bins need a positive count"));
        }
        Ok(())
    }

    /// Edges of log bin `k`.
    fn edge(&self, k: usize) -> f64 {
        if k == 0 {
            self.min
        } else if k == self.count {
            self.max
        } else {
            (self.min.ln() + (self.max / self.min).ln() * k as f64 / self.count as f64).exp()
        }
    }

    /// `(lo, hi, center)` for each bin in ascending order.
    pub fn bins(&self) -> Vec<(f64, f64, f64)> {
        let zero = self.include_zero.then_some((0.0, self.min, 0.0));
        zero.into_iter()
            .chain((0..self.count).map(|k| {
                let (lo, hi) = (self.edge(k), self.edge(k + 1));
                (lo, hi, (lo * hi).sqrt())
            }))
            .collect()
    }

    /// Position in [`Self::bins`] of `alpha_sq`, or `None` outside the range.
    /// Log bins are half-open except the last, which includes `max`.
    pub fn index(&self, alpha_sq: f64) -> Option<usize> {
        let offset = usize::from(self.include_zero);
        if alpha_sq.is_nan() || alpha_sq < 0.0 || alpha_sq > self.max {
            return None;
        }
        if alpha_sq < self.min {
            return self.include_zero.then_some(0);
        }
        let f = (alpha_sq / self.min).ln() / (self.max / self.min).ln();
        let mut k = ((f * self.count as f64).floor() as usize).min(self.count - 1);
        if k > 0 && alpha_sq < self.edge(k) {
            k -= 1;
        } else if k + 1 < self.count && alpha_sq >= self.edge(k + 1) {
            k += 1;
        }
        Some(k + offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    /// Bin center; 0 for the zero bin.
    pub alpha_sq_bin: f64,
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub squeeze_db: f64,
    pub uncertainty: f64,
    /// α² of the achieving point.
    pub alpha_sq: f64,
    pub params: MethodParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierCurve {
    #[serde(with = "extended_f64")]
    pub threshold: f64,
    /// Occupied bins in ascending α².
    pub points: Vec<FrontierPoint>,
}

impl FrontierCurve {
    /// Best squeezing in the bin centered at `alpha_sq_bin`, if occupied.
    pub fn at(&self, alpha_sq_bin: f64) -> Option<&FrontierPoint> {
        self.points.iter().find(|p| p.alpha_sq_bin == alpha_sq_bin)
    }
}

fn check_threshold(t: f64) -> Result<()> {
    if t.is_nan() || t < 1.0 {
        return Err(Error::config(format!(
            "threshold must be at least 1, got {t}"
        )));
    }
    Ok(())
}

/// Per α² bin, the largest `squeeze_db` among points with
/// `uncertainty ≤ threshold`. Ties go to smaller uncertainty, then smaller
/// α², then earlier input. Non-finite points are ignored.
pub fn frontier(points: &[MethodPoint], threshold: f64, bins: &AlphaBins) -> Result<FrontierCurve> {
    check_threshold(threshold)?;
    bins.validate()?;
    if points.is_empty() {
        return Err(Error::config("frontier needs at least one point"));
    }
    let layout = bins.bins();
    let mut best: Vec<Option<(f64, f64, &MethodPoint)>> = vec![None; layout.len()];
    for pt in points.iter().filter(|p| p.is_finite()) {
        let u = pt.uncertainty();
        if u.is_nan() || u > threshold + FEASIBILITY_SLACK {
            continue;
        }
        let Some(k) = bins.index(pt.alpha_sq) else {
            continue;
        };
        let db = pt.metrics().squeeze_db;
        let better = match best[k] {
            None => true,
            Some((bdb, bu, bp)) => {
                db > bdb || (db == bdb && (u < bu || (u == bu && pt.alpha_sq < bp.alpha_sq)))
            }
        };
        if better {
            best[k] = Some((db, u, pt));
        }
    }
    let points = best
        .into_iter()
        .zip(layout)
        .filter_map(|(b, (lo, hi, center))| {
            b.map(|(db, u, p)| FrontierPoint {
                alpha_sq_bin: center,
                bin_lo: lo,
                bin_hi: hi,
                squeeze_db: db,
                uncertainty: u,
                alpha_sq: p.alpha_sq,
                params: p.params,
            })
        })
        .collect();
    Ok(FrontierCurve { threshold, points })
}

/// One sweep of `grid`, reduced to a frontier per threshold.
pub fn frontier_suite(
    grid: &SweepGrid,
    thresholds: &[f64],
    bins: &AlphaBins,
) -> Result<Vec<FrontierCurve>> {
    for &t in thresholds {
        check_threshold(t)?;
    }
    bins.validate()?;
    let points = sweep(grid)?.points();
    thresholds
        .iter()
        .map(|&t| frontier(&points, t, bins))
        .collect()
}
