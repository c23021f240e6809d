// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::opa::{OpaParams, CONVERGENCE_TOLERANCE};

/// Directly integrated amplifier mean fields on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldTrajectory {
    pub times: Vec<f64>,
    pub a_s: Vec<f64>,
    pub a_p: Vec<f64>,
    /// Largest difference from a run at half the step, over shared grid points.
    pub error_estimate: f64,
}

fn rhs(s: f64, p: f64) -> (f64, f64) {
    (s * p, -0.5 * s * s)
}

fn rk4(s0: f64, p0: f64, t_max: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = t_max / n as f64;
    let (mut s, mut p) = (s0, p0);
    let mut out_s = Vec::with_capacity(n + 1);
    let mut out_p = Vec::with_capacity(n + 1);
    out_s.push(s);
    out_p.push(p);
    for _ in 0..n {
        let k1 = rhs(s, p);
        let k2 = rhs(s + h / 2.0 * k1.0, p + h / 2.0 * k1.1);
        let k3 = rhs(s + h / 2.0 * k2.0, p + h / 2.0 * k2.1);
        let k4 = rhs(s + h * k3.0, p + h * k3.1);
        s += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        p += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        out_s.push(s);
        out_p.push(p);
    }
    (out_s, out_p)
}

/// RK4 on `Ȧ_s = A_s A_p`, `Ȧ_p = −A_s²/2` from `(ℰ_s, ℰ_p)`, using the step
/// count of `params`, with a step-halving error estimate.
pub fn mean_field_ode(params: &OpaParams) -> Result<MeanFieldTrajectory> {
    params.validate()?;
    let n = params.n_steps;
    let (s0, p0) = (params.seed_input(), params.pump_input());
    let (a_s, a_p) = rk4(s0, p0, params.t_max, n);
    let (fs, fp) = rk4(s0, p0, params.t_max, 2 * n);
    let error_estimate = (0..=n)
        .map(|k| (a_s[k] - fs[2 * k]).abs().max((a_p[k] - fp[2 * k]).abs()))
        .fold(0.0, f64::max);
    if error_estimate.is_nan() || error_estimate > CONVERGENCE_TOLERANCE {
        return Err(Error::NonConvergence(format!(
            "mean-field step-halving estimate {error_estimate:e} exceeds {CONVERGENCE_TOLERANCE:e}"
        )));
    }
    let times = (0..=n)
        .map(|k| params.t_max * k as f64 / n as f64)
        .collect();
    Ok(MeanFieldTrajectory {
        times,
        a_s,
        a_p,
        error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opa::opa_mean_field;
    use crate::quadrature::Regime;

    #[test]
    fn unseeded_fixed_point() {
        let p = OpaParams::new(0.0, 3.0, Regime::AmplitudeSqueezing).unwrap();
        let t = mean_field_ode(&p).unwrap();
        assert!(t.a_s.iter().all(|&s| s == 0.0));
        assert!(t.a_p.iter().all(|&a| a == -1.0));
        assert_eq!(t.error_estimate, 0.0);
    }

    #[test]
    fn conserves_energy() {
        let p = OpaParams::new(0.3, 6.0, Regime::PhaseSqueezing).unwrap();
        let t = mean_field_ode(&p).unwrap();
        let c1 = p.c1();
        let drift = t
            .a_s
            .iter()
            .zip(&t.a_p)
            .map(|(s, a)| (s * s / 2.0 + a * a - c1).abs())
            .fold(0.0, f64::max);
        assert!(drift < 1e-10 * p.t_max, "drift {drift}");
    }

    #[test]
    fn matches_closed_form() {
        for regime in [Regime::PhaseSqueezing, Regime::AmplitudeSqueezing] {
            for seed in [1e-3, 0.05, 0.5, 2.0, 10.0] {
                let p = OpaParams::new(seed, 8.0, regime).unwrap();
                let t = mean_field_ode(&p).unwrap();
                for k in (0..t.times.len()).step_by(61) {
                    let (s, a) = opa_mean_field(&p, t.times[k]);
                    assert!((t.a_s[k] - s).abs() < 1e-8, "{seed} {}", t.times[k]);
                    assert!((t.a_p[k] - a).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn coarse_steps_flagged() {
        let p = OpaParams::new(10.0, 8.0, Regime::PhaseSqueezing)
            .unwrap()
            .with_steps(16)
            .unwrap();
        assert!(matches!(mean_field_ode(&p), Err(Error::NonConvergence(_))));
    }
}
