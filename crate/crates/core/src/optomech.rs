// SPDX-License-Identifier: Apache-2.0

//! Seeded dissipative optomechanical squeezer in closed form.
//!
//! Two probe tones `ℰ±` drive the cavity sidebands of a mechanical mode with
//! thermal occupation `n̄`. Everything depends on the cooperativity
//! `𝒞 = 4g²|ℰ₊−ℰ₋|²/(ΓΩ)` and the probe asymmetry `𝒟 = ½|ℰ₊+ℰ₋|/|ℰ₊−ℰ₋|`,
//! valid for `Γ < κ ≪ Ω`. With `u = 𝒞𝒟 ≤ 1` and imaginary probes:
//!
//! ```text
//! α²    = (1 − u)³ / (2𝒞²(1 + 𝒟²))
//! var_x = (1 + 𝒟²)(1 − u)/2 + 𝒞𝒟²(2n̄ + 1)
//! var_p = ((1 − u)/(1 + u))² + 4𝒞(2n̄ + 1)/(1 + u)²
//! ```
//!
//! Real probes exchange `var_x` and `var_p`. At `u = 1` the output is a
//! squeezed vacuum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{MethodParams, MethodPoint, QuadratureStats, SqueezedAxis};

/// Slack on `𝒞𝒟 ≤ 1` for parameters computed as `1/𝒟`.
const BOUNDARY_SLACK: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmParams {
    /// Cooperativity 𝒞 > 0.
    pub cc: f64,
    /// Probe asymmetry 𝒟 ≥ 0.
    pub dd: f64,
    /// Mechanical thermal occupation n̄ ≥ 0.
    pub n_bar: f64,
    pub axis: SqueezedAxis,
}

impl OmParams {
    pub fn new(cc: f64, dd: f64, n_bar: f64, axis: SqueezedAxis) -> Result<Self> {
        let p = OmParams {
            cc,
            dd,
            n_bar,
            axis,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cc > 0.0 && self.cc.is_finite()) {
            return Err(Error::domain(format!(
                "cc must be finite and positive, got {}",
                self.cc
            )));
        }
        if !(self.dd >= 0.0 && self.dd.is_finite()) {
            return Err(Error::domain(format!(
                "dd must be finite and non-negative, got {}",
                self.dd
            )));
        }
        if !(self.n_bar >= 0.0 && self.n_bar.is_finite()) {
            return Err(Error::domain(format!(
                "nbar must be finite and non-negative, got {}",
                self.n_bar
            )));
        }
        if self.cc * self.dd > 1.0 + BOUNDARY_SLACK {
            return Err(Error::domain(format!(
                "cc*dd must not exceed 1, got {}",
                self.cc * self.dd
            )));
        }
        Ok(())
    }

    /// `𝒞𝒟`, snapped to exactly 1 at the vacuum boundary.
    fn product(&self) -> f64 {
        let u = self.cc * self.dd;
        if (u - 1.0).abs() <= BOUNDARY_SLACK {
            1.0
        } else {
            u
        }
    }
}

pub fn om_evaluate(params: &OmParams) -> Result<MethodPoint> {
    params.validate()?;
    let OmParams { cc, dd, n_bar, .. } = *params;
    let u = params.product();
    let d2 = dd * dd;
    let thermal = 2.0 * n_bar + 1.0;
    let eps = 1.0 - u;
    let alpha_sq = eps.powi(3) / (2.0 * cc * cc * (1.0 + d2));
    let var_x = (1.0 + d2) * eps / 2.0 + cc * d2 * thermal;
    let var_p = (eps / (1.0 + u)).powi(2) + 4.0 * cc * thermal / (1.0 + u).powi(2);
    let stats = QuadratureStats { var_x, var_p };
    Ok(MethodPoint {
        alpha_sq,
        stats: match params.axis {
            SqueezedAxis::Amplitude => stats,
            SqueezedAxis::Phase => stats.swapped(),
        },
        params: MethodParams::Optomech(*params),
    })
}

/// Small-α² expansion at `n̄ = 0` with `K = (1 + 1/𝒟²)α²/4`:
/// `var_x ≈ 𝒟[1 + ((1−𝒟)²/𝒟) K^{1/3}]`, `var_p ≈ (1/𝒟)[1 − (1−𝒟) K^{2/3}]`.
/// Only `dd` and `axis` of `params` are used.
pub fn om_leading_order(params: &OmParams, alpha_sq: f64) -> Result<QuadratureStats> {
    let dd = params.dd;
    if !(dd > 0.0 && dd <= 1.0) {
        return Err(Error::domain(format!("dd must lie in (0,1], got {dd}")));
    }
    if params.n_bar != 0.0 {
        return Err(Error::domain(format!(
            "leading-order expansion needs nbar = 0, got {}",
            params.n_bar
        )));
    }
    if !(alpha_sq >= 0.0 && alpha_sq.is_finite()) {
        return Err(Error::domain(format!(
            "alpha_sq must be finite and non-negative, got {alpha_sq}"
        )));
    }
    let k = (1.0 + 1.0 / (dd * dd)) / 4.0 * alpha_sq;
    let var_x = dd * (1.0 + (1.0 - dd).powi(2) / dd * k.cbrt());
    let var_p = (1.0 - (1.0 - dd) * k.cbrt().powi(2)) / dd;
    let stats = QuadratureStats { var_x, var_p };
    Ok(match params.axis {
        SqueezedAxis::Amplitude => stats,
        SqueezedAxis::Phase => stats.swapped(),
    })
}
