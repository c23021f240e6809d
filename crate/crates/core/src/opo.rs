// SPDX-License-Identifier: Apache-2.0

//! Seeded degenerate optical parametric oscillator, single-sided cavity,
//! steady state at zero detection frequency.
//!
//! Units are fixed by `κ = 1` and `g = 1`. The pump input is chosen so that the
//! unseeded intracavity pump gives cooperativity `𝒞₀ = gA_p⁰/(κ/2) = c0`:
//! from `A_p⁰ = −(2/√κ)ℰ_p`, `ℰ_p = ∓c0/4`, negative in the amplifying
//! (phase-squeezing) regime and positive in the deamplifying
//! (amplitude-squeezing) one. The seed input is `ℰ_s = seed_ratio·|ℰ_p|`.
//!
//! Eliminating `A_p` from the mean-field steady state
//!
//! ```text
//! A_s = 2 A_s A_p − 2 ℰ_s
//! A_p = −A_s² − 2 ℰ_p
//! ```
//!
//! leaves the depressed cubic `A_s³ + p A_s + q = 0` with `p = (1 + 4ℰ_p)/2`
//! and `q = ℰ_s`, solved on its real Cardano branch.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{MethodParams, MethodPoint, QuadratureStats, Regime};

/// Largest steady-state residual accepted from the cubic solver.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpoParams {
    /// Zero-seed pump cooperativity `𝒞₀`, in `(0, 1)`.
    pub c0: f64,
    /// `ℰ_s^in / |ℰ_p^in|`, non-negative.
    pub seed_ratio: f64,
    pub regime: Regime,
}

impl OpoParams {
    pub fn new(c0: f64, seed_ratio: f64, regime: Regime) -> Result<Self> {
        let p = OpoParams {
            c0,
            seed_ratio,
            regime,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c0 > 0.0 && self.c0 < 1.0) {
            return Err(Error::domain(format!(
                "c0 must lie in (0,1), got {}",
                self.c0
            )));
        }
        if !(self.seed_ratio >= 0.0 && self.seed_ratio.is_finite()) {
            return Err(Error::domain(format!(
                "seed_ratio must be finite and non-negative, got {}",
                self.seed_ratio
            )));
        }
        Ok(())
    }

    /// Pump input amplitude `ℰ_p^in`.
    pub fn pump_input(&self) -> f64 {
        match self.regime {
            Regime::PhaseSqueezing => -self.c0 / 4.0,
            Regime::AmplitudeSqueezing => self.c0 / 4.0,
        }
    }

    /// Seed input amplitude `ℰ_s^in`.
    pub fn seed_input(&self) -> f64 {
        self.seed_ratio * self.pump_input().abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpoSteadyState {
    /// Intracavity seed amplitude `A_s`.
    pub a_s: f64,
    /// Intracavity pump amplitude `A_p`.
    pub a_p: f64,
    /// Cardano radicand `−q/2 + sqrt(q²/4 + p³/27)`; its real cube root
    /// selects the branch.
    pub chi: f64,
    pub seed_in: f64,
    pub pump_in: f64,
}

impl OpoSteadyState {
    /// Largest violation of the two mean-field steady-state equations.
    pub fn residual(&self) -> f64 {
        let seed_eq = self.a_s - (2.0 * self.a_s * self.a_p - 2.0 * self.seed_in);
        let pump_eq = self.a_p - (-self.a_s * self.a_s - 2.0 * self.pump_in);
        seed_eq.abs().max(pump_eq.abs())
    }

    /// Output seed displacement `ℰ_s^out = ℰ_s^in + √κ A_s`.
    pub fn seed_out(&self) -> f64 {
        self.seed_in + self.a_s
    }
}

/// Real root of `t³ + p t + q = 0` on the Cardano branch, and the radicand.
///
/// Fails when the discriminant is negative, i.e. when three real roots exist
/// and the single-radical branch is no longer real.
pub fn cubic_real_branch(p: f64, q: f64) -> Result<(f64, f64)> {
    let disc = q * q / 4.0 + p * p * p / 27.0;
    if disc < 0.0 {
        return Err(Error::Branch(format!(
            "discriminant {disc:e} < 0 for p = {p}, q = {q}"
        )));
    }
    let root = disc.sqrt();
    let chi = -q / 2.0 + root;
    let u = chi.cbrt();
    let v = (-q / 2.0 - root).cbrt();
    // u³ + v³ = −q and uv = −p/3, so t = u + v = −q/(u² + p/3 + v²); this
    // form has no cancellation when p > 0.
    let t = if p > 0.0 {
        -q / (u * u + p / 3.0 + v * v)
    } else {
        u + v
    };
    Ok((t, chi))
}

pub fn opo_steady_state(params: &OpoParams) -> Result<OpoSteadyState> {
    params.validate()?;
    let pump_in = params.pump_input();
    let seed_in = params.seed_input();
    let (a_s, chi) = cubic_real_branch((1.0 + 4.0 * pump_in) / 2.0, seed_in)?;
    let state = OpoSteadyState {
        a_s,
        a_p: -a_s * a_s - 2.0 * pump_in,
        chi,
        seed_in,
        pump_in,
    };
    let residual = state.residual();
    if residual.is_nan() || residual >= RESIDUAL_TOLERANCE {
        return Err(Error::Branch(format!(
            "steady-state residual {residual:e} exceeds {RESIDUAL_TOLERANCE:e}"
        )));
    }
    Ok(state)
}

/// Output quadrature variances at `ω = 0` for real intracavity amplitudes.
pub fn output_variances(a_s: f64, a_p: f64) -> QuadratureStats {
    let s2 = a_s * a_s;
    let var_x = ((s2 - a_p / 2.0 - 0.25).powi(2) + s2) / (s2 - a_p / 2.0 + 0.25).powi(2);
    let var_p = ((s2 + a_p / 2.0 - 0.25).powi(2) + s2) / (s2 + a_p / 2.0 + 0.25).powi(2);
    QuadratureStats { var_x, var_p }
}

pub fn opo_evaluate(params: &OpoParams) -> Result<MethodPoint> {
    let ss = opo_steady_state(params)?;
    let alpha_sq = (ss.seed_out() / ss.pump_in).powi(2);
    Ok(MethodPoint {
        alpha_sq,
        stats: output_variances(ss.a_s, ss.a_p),
        params: MethodParams::Opo(*params),
    })
}

/// Signed cooperativity entering the small-seed expansion: `+𝒞₀` when
/// amplifying, `−𝒞₀` when deamplifying.
fn signed_c0(c0: f64, regime: Regime) -> f64 {
    match regime {
        Regime::PhaseSqueezing => c0,
        Regime::AmplitudeSqueezing => -c0,
    }
}

/// Small-seed gain `ℰ_s^out/ℰ_s^in` magnitude: `(1+𝒞₀)/(1−𝒞₀)` amplifying,
/// `(1−𝒞₀)/(1+𝒞₀)` deamplifying.
pub fn small_seed_gain(c0: f64, regime: Regime) -> f64 {
    let k = signed_c0(c0, regime);
    (1.0 + k) / (1.0 - k)
}

/// Leading-order variances as functions of `(𝒞₀, α²)`.
///
/// The amplifying branch is the familiar expansion with seed-noise and
/// pump-noise terms; the deamplifying branch is the same expression with
/// `𝒞₀ → −𝒞₀`.
pub fn perturbative_variances(c0: f64, alpha_sq: f64, regime: Regime) -> QuadratureStats {
    let k = signed_c0(c0, regime);
    let w = k * k / (2.0 * (1.0 + k).powi(2)) * alpha_sq;
    let pump_noise = 4.0 * k * k / (1.0 + k).powi(2) * alpha_sq;
    let dx = 3.0 * w + (1.0 - k);
    let dp = w + (1.0 + k);
    QuadratureStats {
        var_x: ((3.0 * w - (1.0 + k)) / dx).powi(2) + pump_noise / (dx * dx),
        var_p: ((w - (1.0 - k)) / dp).powi(2) + pump_noise / (dp * dp),
    }
}

/// Small-seed approximation of [`opo_evaluate`]; α² comes from the linear gain.
pub fn opo_perturbative(params: &OpoParams) -> Result<MethodPoint> {
    params.validate()?;
    let alpha_sq = (small_seed_gain(params.c0, params.regime) * params.seed_ratio).powi(2);
    Ok(MethodPoint {
        alpha_sq,
        stats: perturbative_variances(params.c0, alpha_sq, params.regime),
        params: MethodParams::Opo(*params),
    })
}

/// Index of the first sample after which `alpha_sq` stops increasing along an
/// ordered seed sweep, or `None` if the sequence is non-decreasing.
pub fn nonmonotonic_cutoff(alpha_sq: &[f64]) -> Option<usize> {
    alpha_sq.windows(2).position(|w| w[1] < w[0]).map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phase(c0: f64, seed: f64) -> OpoParams {
        OpoParams::new(c0, seed, Regime::PhaseSqueezing).unwrap()
    }

    fn amp(c0: f64, seed: f64) -> OpoParams {
        OpoParams::new(c0, seed, Regime::AmplitudeSqueezing).unwrap()
    }

    /// Seed ratio giving exact output α² = target, by bisection below the
    /// first turning point.
    fn seed_for_alpha_sq(c0: f64, regime: Regime, target: f64) -> f64 {
        let a2 = |s: f64| {
            opo_evaluate(&OpoParams::new(c0, s, regime).unwrap())
                .unwrap()
                .alpha_sq
        };
        let (mut lo, mut hi) = (0.0, 1e-6);
        while a2(hi) < target {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if a2(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn unseeded_cavity() {
        for regime in [Regime::PhaseSqueezing, Regime::AmplitudeSqueezing] {
            let ss = opo_steady_state(&OpoParams::new(0.5, 0.0, regime).unwrap()).unwrap();
            assert_eq!(ss.a_s, 0.0);
            assert!(((2.0 * ss.a_p).abs() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn unseeded_variances() {
        let pt = opo_evaluate(&phase(0.5, 0.0)).unwrap();
        assert_eq!(pt.alpha_sq, 0.0);
        assert!((pt.stats.var_x - 9.0).abs() < 1e-12);
        assert!((pt.stats.var_p - 1.0 / 9.0).abs() < 1e-12);
        assert!((pt.uncertainty() - 1.0).abs() < 1e-12);
        let pt = opo_evaluate(&amp(0.5, 0.0)).unwrap();
        assert!((pt.stats.var_x - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn small_seed_gain_near_threshold() {
        let pt = opo_evaluate(&phase(0.9, 1e-6)).unwrap();
        let gain = pt.alpha_sq.sqrt() / 1e-6;
        assert!((gain / 19.0 - 1.0).abs() < 1e-3, "gain {gain}");
        assert!((small_seed_gain(0.9, Regime::PhaseSqueezing) - 19.0).abs() < 1e-12);
    }

    #[test]
    fn residual_is_tiny() {
        let ss = opo_steady_state(&amp(0.6, 0.05)).unwrap();
        assert!(ss.residual() < 1e-9);
        assert!(ss.a_s != 0.0);
    }

    #[test]
    fn residual_on_grid() {
        for regime in [Regime::PhaseSqueezing, Regime::AmplitudeSqueezing] {
            for i in 0..100 {
                let c0 = 0.005 + 0.99 * i as f64 / 99.0;
                for j in 0..100 {
                    let seed = 10f64.powf(-6.0 + 8.0 * j as f64 / 99.0);
                    let p = OpoParams::new(c0, seed, regime).unwrap();
                    let ss = opo_steady_state(&p).unwrap();
                    assert!(ss.residual() < RESIDUAL_TOLERANCE);
                    let u = opo_evaluate(&p).unwrap().uncertainty();
                    assert!(u >= 1.0 - 1e-9, "u = {u} at {p:?}");
                }
            }
        }
    }

    #[test]
    fn vacuum_limit_is_pure() {
        for i in 1..100 {
            let c0 = i as f64 / 100.0;
            let pt = opo_evaluate(&phase(c0, 0.0)).unwrap();
            assert!((pt.uncertainty() - 1.0).abs() < 1e-10);
            let expect = ((1.0 - c0) / (1.0 + c0)).powi(2);
            assert!((pt.stats.var_p - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn regimes_amplify_and_deamplify() {
        for c0 in [0.2, 0.5, 0.8] {
            for seed in [1e-4, 1e-3, 1e-2] {
                assert!(opo_evaluate(&phase(c0, seed)).unwrap().alpha_sq > seed * seed);
                assert!(opo_evaluate(&amp(c0, seed)).unwrap().alpha_sq < seed * seed);
            }
        }
    }

    #[test]
    fn perturbative_vacuum_limit() {
        let s = perturbative_variances(0.5, 0.0, Regime::PhaseSqueezing);
        assert!((s.var_p - 1.0 / 9.0).abs() < 1e-15);
        for c0 in [0.1, 0.5, 0.95] {
            for regime in [Regime::PhaseSqueezing, Regime::AmplitudeSqueezing] {
                let s = perturbative_variances(c0, 0.0, regime);
                assert!((s.uncertainty() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn perturbative_matches_exact_at_small_seed() {
        let exact = opo_evaluate(&phase(0.5, 0.02)).unwrap();
        let approx = perturbative_variances(0.5, exact.alpha_sq, Regime::PhaseSqueezing);
        let tol = 10.0 * exact.alpha_sq;
        assert!(((exact.stats.var_x - approx.var_x) / exact.stats.var_x).abs() < tol);
        assert!(((exact.stats.var_p - approx.var_p) / exact.stats.var_p).abs() < tol);
        let pert = opo_perturbative(&phase(0.5, 0.02)).unwrap();
        assert!((pert.alpha_sq / exact.alpha_sq - 1.0).abs() < 10.0 * exact.alpha_sq);
    }

    #[test]
    fn perturbative_error_is_fourth_order() {
        for (c0, regime) in [
            (0.8, Regime::PhaseSqueezing),
            (0.6, Regime::AmplitudeSqueezing),
        ] {
            let diffs: Vec<f64> = [0.01, 0.005, 0.0025]
                .iter()
                .map(|&a2| {
                    let seed = seed_for_alpha_sq(c0, regime, a2);
                    let exact = opo_evaluate(&OpoParams::new(c0, seed, regime).unwrap()).unwrap();
                    let approx = perturbative_variances(c0, exact.alpha_sq, regime);
                    (exact.stats.var_p - approx.var_p).abs()
                })
                .collect();
            for w in diffs.windows(2) {
                let order = (w[0] / w[1]).log2();
                assert!((order - 2.0).abs() < 0.2, "{regime:?}: order {order}");
            }
        }
    }

    #[test]
    fn cubic_branch_error_when_three_real_roots() {
        // t³ − 3t + 1 has three real roots.
        assert!(matches!(
            cubic_real_branch(-3.0, 1.0),
            Err(Error::Branch(_))
        ));
        let (t, _) = cubic_real_branch(-3.0, 3.0).unwrap();
        assert!((t * t * t - 3.0 * t + 3.0).abs() < 1e-12);
        let (t, _) = cubic_real_branch(0.5, 0.2).unwrap();
        assert!((t * t * t + 0.5 * t + 0.2).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range_c0() {
        for c0 in [0.0, 1.0, 1.5, -0.2, f64::NAN] {
            let err = OpoParams::new(c0, 0.1, Regime::PhaseSqueezing).unwrap_err();
            assert!(err.to_string().contains("c0 must lie in (0,1)"));
        }
        assert!(OpoParams::new(0.5, -0.1, Regime::PhaseSqueezing).is_err());
    }

    #[test]
    fn cutoff_detects_first_decrease() {
        assert_eq!(nonmonotonic_cutoff(&[0.0, 0.1, 0.2, 0.15, 0.3]), Some(3));
        assert_eq!(nonmonotonic_cutoff(&[0.0, 0.1, 0.1, 0.2]), None);
        assert_eq!(nonmonotonic_cutoff(&[]), None);
    }

    #[test]
    fn deamplifying_sweep_turns_over() {
        let a2: Vec<f64> = (0..400)
            .map(|i| opo_evaluate(&amp(0.5, 0.01 * i as f64)).unwrap().alpha_sq)
            .collect();
        let cut = nonmonotonic_cutoff(&a2).expect("deamplifying output turns over");
        assert!(cut > 1);
    }
}
