// SPDX-License-Identifier: Apache-2.0

//! Brute-force cross-checks for the closed-form evaluators.
//!
//! [`GaussianState`] pushes full multimode covariances through symplectic
//! maps; [`mean_field_ode`] integrates the nonlinear amplifier equations
//! directly. Neither shares code with the modules it checks.

mod gaussian;
mod mean_field;

pub use gaussian::{
    beamsplitter_matrix, bs_oracle, is_symplectic, squeeze_matrix, symplectic_form, GaussianState,
    PHYSICALITY_TOLERANCE,
};
pub use mean_field::{mean_field_ode, MeanFieldTrajectory};
