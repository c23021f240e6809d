// SPDX-License-Identifier: Apache-2.0

//! Seeded traveling-wave degenerate parametric amplifier with pump depletion.
//!
//! Time is the dimensionless `τ = g·|ℰ_p|·t`, and amplitudes are in units of
//! `|ℰ_p|`, so the pump starts at `±1` and the seed at `seed_ratio`. A positive
//! pump amplifies the seed and squeezes its phase quadrature; a negative pump
//! deamplifies it and squeezes amplitude.
//!
//! Mean fields follow the exact solution of `Ȧ_s = A_s A_p`,
//! `Ȧ_p = −A_s²/2`:
//!
//! ```text
//! A_s(τ) = sqrt(2c₁) sech(√c₁ τ + θ₀),   A_p(τ) = −√c₁ tanh(√c₁ τ + θ₀)
//! c₁ = ℰ_p² + ℰ_s²/2,                   θ₀ = −atanh(ℰ_p/√c₁)
//! ```
//!
//! Linearized fluctuations split into an X sector `(x_s, x_p)` and a P sector
//! `(p_s, p_p)` with drift matrices
//!
//! ```text
//! M_x = [[ A_p, A_s], [−A_s, 0]]     M_p = [[−A_p, A_s], [−A_s, 0]]
//! ```
//!
//! and each sector covariance obeys `V̇ = M V + V Mᵀ` from the vacuum `V = I`.
//! Since `M_p = −M_xᵀ` the joint flow is symplectic and
//! `det V_x · det V_p = 1` at all times.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{MethodParams, MethodPoint, QuadratureStats, Regime};

/// RK4 steps per unit of τ when none are given.
pub const DEFAULT_STEPS_PER_UNIT: usize = 4096;

/// Largest relative change of a terminal variance under step doubling.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;

pub type Cov2 = [[f64; 2]; 2];

const IDENTITY: Cov2 = [[1.0, 0.0], [0.0, 1.0]];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpaParams {
    /// `ℰ_s/|ℰ_p|`, non-negative.
    pub seed_ratio: f64,
    /// Final dimensionless time.
    pub t_max: f64,
    /// RK4 steps over `[0, t_max]`.
    pub n_steps: usize,
    pub regime: Regime,
}

impl OpaParams {
    /// Parameters with [`DEFAULT_STEPS_PER_UNIT`] resolution.
    pub fn new(seed_ratio: f64, t_max: f64, regime: Regime) -> Result<Self> {
        let n_steps = ((DEFAULT_STEPS_PER_UNIT as f64 * t_max).ceil() as usize).max(2);
        let p = OpaParams {
            seed_ratio,
            t_max,
            n_steps,
            regime,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_steps(self, n_steps: usize) -> Result<Self> {
        let p = OpaParams { n_steps, ..self };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.seed_ratio >= 0.0 && self.seed_ratio.is_finite()) {
            return Err(Error::domain(format!(
                "seed_ratio must be finite and non-negative, got {}",
                self.seed_ratio
            )));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::domain(format!(
                "t_max must be finite and positive, got {}",
                self.t_max
            )));
        }
        if self.n_steps < 2 {
            return Err(Error::domain(format!(
                "n_steps must be at least 2, got {}",
                self.n_steps
            )));
        }
        Ok(())
    }

    pub fn pump_input(&self) -> f64 {
        match self.regime {
            Regime::PhaseSqueezing => 1.0,
            Regime::AmplitudeSqueezing => -1.0,
        }
    }

    pub fn seed_input(&self) -> f64 {
        self.seed_ratio
    }

    /// Conserved `c₁ = A_p² + A_s²/2`.
    pub fn c1(&self) -> f64 {
        let (s, p) = (self.seed_input(), self.pump_input());
        p * p + s * s / 2.0
    }

    pub fn steps_per_unit(&self) -> f64 {
        self.n_steps as f64 / self.t_max
    }
}

/// Parameters of a single amplifier output sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpaSample {
    pub seed_ratio: f64,
    pub tau: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy)]
struct MeanField {
    seed: f64,
    pump: f64,
    root_c1: f64,
    theta0: f64,
}

impl MeanField {
    fn new(params: &OpaParams) -> Self {
        let (seed, pump) = (params.seed_input(), params.pump_input());
        let root_c1 = params.c1().sqrt();
        // −atanh(pump/√c₁), written without the 1 − pump/√c₁ cancellation.
        let theta0 = if seed > 0.0 {
            -pump.signum() * ((root_c1 + pump.abs()) * std::f64::consts::SQRT_2 / seed).ln()
        } else {
            0.0
        };
        MeanField {
            seed,
            pump,
            root_c1,
            theta0,
        }
    }

    fn at(&self, t: f64) -> (f64, f64) {
        if self.seed == 0.0 {
            return (0.0, self.pump);
        }
        let theta = self.root_c1 * t + self.theta0;
        (
            std::f64::consts::SQRT_2 * self.root_c1 / theta.cosh(),
            -self.root_c1 * theta.tanh(),
        )
    }
}

/// Closed-form mean amplitudes `(A_s, A_p)` at dimensionless time `t`.
pub fn opa_mean_field(params: &OpaParams, t: f64) -> (f64, f64) {
    MeanField::new(params).at(t)
}

fn drift(a_s: f64, a_p: f64) -> (Cov2, Cov2) {
    ([[a_p, a_s], [-a_s, 0.0]], [[-a_p, a_s], [-a_s, 0.0]])
}

/// `M V + V Mᵀ` for symmetric `V`.
fn lyapunov(m: &Cov2, v: &Cov2) -> Cov2 {
    let mut mv = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            mv[i][j] = m[i][0] * v[0][j] + m[i][1] * v[1][j];
        }
    }
    [
        [2.0 * mv[0][0], mv[0][1] + mv[1][0]],
        [mv[1][0] + mv[0][1], 2.0 * mv[1][1]],
    ]
}

fn axpy(v: &Cov2, h: f64, k: &Cov2) -> Cov2 {
    [
        [v[0][0] + h * k[0][0], v[0][1] + h * k[0][1]],
        [v[1][0] + h * k[1][0], v[1][1] + h * k[1][1]],
    ]
}

fn rk4_step(v: &Cov2, m0: &Cov2, mh: &Cov2, m1: &Cov2, h: f64) -> Cov2 {
    let k1 = lyapunov(m0, v);
    let k2 = lyapunov(mh, &axpy(v, h / 2.0, &k1));
    let k3 = lyapunov(mh, &axpy(v, h / 2.0, &k2));
    let k4 = lyapunov(m1, &axpy(v, h, &k3));
    let mut out = *v;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += h / 6.0 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]);
        }
    }
    out
}

/// Integrates both sectors through consecutive sample times, taking
/// `steps[k]` equal RK4 steps between `times[k-1]` (or 0) and `times[k]`.
fn integrate(mf: &MeanField, times: &[f64], steps: &[usize]) -> Vec<(Cov2, Cov2)> {
    let mut vx = IDENTITY;
    let mut vp = IDENTITY;
    let mut out = Vec::with_capacity(times.len());
    let mut t0 = 0.0;
    for (&t1, &n) in times.iter().zip(steps) {
        if n > 0 {
            let h = (t1 - t0) / n as f64;
            let mut start = drift_at(mf, t0);
            for k in 0..n {
                let t = t0 + k as f64 * h;
                let mid = drift_at(mf, t + h / 2.0);
                let end = drift_at(mf, if k + 1 == n { t1 } else { t + h });
                vx = rk4_step(&vx, &start.0, &mid.0, &end.0, h);
                vp = rk4_step(&vp, &start.1, &mid.1, &end.1, h);
                start = end;
            }
        }
        out.push((vx, vp));
        t0 = t1;
    }
    out
}

fn drift_at(mf: &MeanField, t: f64) -> (Cov2, Cov2) {
    let (a_s, a_p) = mf.at(t);
    drift(a_s, a_p)
}

fn relative_change(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1.0)
}

fn check_convergence(coarse: &(Cov2, Cov2), fine: &(Cov2, Cov2), params: &OpaParams) -> Result<()> {
    let pairs = [
        (coarse.0[0][0], fine.0[0][0]),
        (coarse.0[1][1], fine.0[1][1]),
        (coarse.1[0][0], fine.1[0][0]),
        (coarse.1[1][1], fine.1[1][1]),
    ];
    let worst = pairs
        .iter()
        .map(|&(a, b)| relative_change(a, b))
        .fold(0.0, f64::max);
    if worst > CONVERGENCE_TOLERANCE || !worst.is_finite() {
        return Err(Error::NonConvergence(format!(
            "terminal variance changes by {worst:e} under step doubling \
             (seed_ratio = {}, t_max = {}, n_steps = {})",
            params.seed_ratio, params.t_max, params.n_steps
        )));
    }
    Ok(())
}

/// Mean fields and sector covariances sampled along one amplifier run.
#[derive(Debug, Clone, PartialEq)]
pub struct OpaTrajectory {
    pub params: OpaParams,
    pub times: Vec<f64>,
    pub a_s: Vec<f64>,
    pub a_p: Vec<f64>,
    /// X-sector covariance over `(x_s, x_p)`.
    pub cov_x: Vec<Cov2>,
    /// P-sector covariance over `(p_s, p_p)`.
    pub cov_p: Vec<Cov2>,
}

impl OpaTrajectory {
    fn build(params: &OpaParams, times: Vec<f64>, covs: Vec<(Cov2, Cov2)>) -> Self {
        let mf = MeanField::new(params);
        let (a_s, a_p) = times.iter().map(|&t| mf.at(t)).unzip();
        let (cov_x, cov_p) = covs.into_iter().unzip();
        OpaTrajectory {
            params: *params,
            times,
            a_s,
            a_p,
            cov_x,
            cov_p,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Seed-mode quadrature variances at sample `i`.
    pub fn seed_stats(&self, i: usize) -> QuadratureStats {
        QuadratureStats {
            var_x: self.cov_x[i][0][0],
            var_p: self.cov_p[i][0][0],
        }
    }

    pub fn alpha_sq(&self, i: usize) -> f64 {
        (self.a_s[i] / self.params.pump_input()).powi(2)
    }

    /// `|A_s|²/2 + |A_p|²` at sample `i`.
    pub fn conserved(&self, i: usize) -> f64 {
        self.a_s[i] * self.a_s[i] / 2.0 + self.a_p[i] * self.a_p[i]
    }

    /// Determinant of the joint four-quadrature covariance; the sectors are
    /// uncorrelated, so this is `det V_x · det V_p`.
    pub fn joint_determinant(&self, i: usize) -> f64 {
        det2(&self.cov_x[i]) * det2(&self.cov_p[i])
    }

    pub fn point(&self, i: usize) -> MethodPoint {
        MethodPoint {
            alpha_sq: self.alpha_sq(i),
            stats: self.seed_stats(i),
            params: MethodParams::Opa(OpaSample {
                seed_ratio: self.params.seed_ratio,
                tau: self.times[i],
                regime: self.params.regime,
            }),
        }
    }

    pub fn points(&self) -> impl Iterator<Item = MethodPoint> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }
}

pub(crate) fn det2(m: &Cov2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Integrates on the uniform grid `τ_k = k·t_max/n_steps`, returning every
/// grid point. A second run at twice the step count checks convergence.
pub fn opa_propagate(params: &OpaParams) -> Result<OpaTrajectory> {
    params.validate()?;
    let mf = MeanField::new(params);
    let n = params.n_steps;
    let times: Vec<f64> = (0..=n)
        .map(|k| params.t_max * k as f64 / n as f64)
        .collect();
    let mut steps = vec![1; n + 1];
    steps[0] = 0;
    let covs = integrate(&mf, &times, &steps);
    let fine = integrate(&mf, &times[n..], &[2 * n]);
    check_convergence(covs.last().expect("n >= 2"), &fine[0], params)?;
    Ok(OpaTrajectory::build(params, times, covs))
}

/// Integrates once through the sorted times `taus`, at the step density of
/// `params`, and samples each of them.
pub fn opa_sample(params: &OpaParams, taus: &[f64]) -> Result<OpaTrajectory> {
    params.validate()?;
    let mut prev = 0.0;
    for &t in taus {
        if !(t >= prev && t <= params.t_max) {
            return Err(Error::domain(format!(
                "sample times must be sorted within [0, {}], got {t}",
                params.t_max
            )));
        }
        prev = t;
    }
    let density = params.steps_per_unit();
    let mut prev = 0.0;
    let steps: Vec<usize> = taus
        .iter()
        .map(|&t| {
            let n = ((t - prev) * density - 1e-9).ceil().max(0.0) as usize;
            prev = t;
            n
        })
        .collect();
    let mf = MeanField::new(params);
    let covs = integrate(&mf, taus, &steps);
    if let Some(last) = covs.last() {
        let doubled: Vec<usize> = steps.iter().map(|s| 2 * s).collect();
        let fine = integrate(&mf, taus, &doubled);
        check_convergence(last, fine.last().expect("same length"), params)?;
    }
    Ok(OpaTrajectory::build(params, taus.to_vec(), covs))
}

/// Output at time `t ∈ [0, t_max]`: `α² = A_s(t)²/ℰ_p²` and the seed-mode
/// variances.
pub fn opa_evaluate(params: &OpaParams, t: f64) -> Result<MethodPoint> {
    if !(0.0..=params.t_max).contains(&t) {
        return Err(Error::domain(format!(
            "t must lie in [0, {}], got {t}",
            params.t_max
        )));
    }
    let traj = opa_sample(params, &[t])?;
    Ok(traj.point(0))
}
