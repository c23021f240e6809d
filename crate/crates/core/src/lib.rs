// SPDX-License-Identifier: Apache-2.0

//! Brightness, squeezing and overall-uncertainty trade-offs for four ways of
//! producing displaced (bright) squeezed light:
//!
//! * [`beamsplitter`]: a squeezed vacuum mixed with a strong coherent state,
//! * [`opo`]: a seeded, single-sided degenerate optical parametric oscillator,
//! * [`opa`]: a seeded traveling-wave parametric amplifier with pump depletion,
//! * [`optomech`]: a seeded dissipative optomechanical squeezer.
//!
//! Every evaluator returns a [`MethodPoint`]: the relative squared output
//! displacement α² together with the output quadrature variances. The
//! [`frontier`] module sweeps method parameters and extracts the best squeezing
//! attainable at each α² under an overall-uncertainty ceiling. [`oracle`] holds
//! independent brute-force validators (a symplectic Gaussian-state engine and
//! a nonlinear mean-field integrator).
//!
//! # Conventions
//!
//! Quadratures are `X = a + a†` and `P = i(a† − a)`, so the vacuum variance of
//! either quadrature is exactly 1 and `[X, P] = 2i`. Phase-space vectors are
//! ordered `(X₁, P₁, X₂, P₂, …)`. All quantities are dimensionless; each
//! method module documents the units it fixes (κ = g = 1 for the oscillator,
//! τ = g·|ℰ_p|·t for the amplifier).

pub mod beamsplitter;
pub mod error;
pub mod frontier;
pub mod opa;
pub mod opo;
pub mod optomech;
pub mod oracle;
pub mod quadrature;

pub use beamsplitter::{bs_evaluate, bs_uncertainty, BsParams};
pub use error::{Error, Result};
pub use frontier::{
    frontier, frontier_suite, sweep, AlphaBins, Axis, Constraint, FrontierCurve, FrontierPoint,
    Method, SkipReason, Spacing, SweepGrid, SweepOutcome, SweepRecord, SweepResult,
};
pub use opa::{opa_evaluate, opa_mean_field, opa_propagate, OpaParams, OpaSample, OpaTrajectory};
pub use opo::{opo_evaluate, opo_perturbative, opo_steady_state, OpoParams, OpoSteadyState};
pub use optomech::{om_evaluate, om_leading_order, OmParams};
pub use quadrature::{
    squeeze_metrics, uncertainty, MethodParams, MethodPoint, QuadratureStats, Regime,
    SqueezeMetrics, SqueezedAxis,
};
