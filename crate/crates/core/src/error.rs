// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the region where a method is defined.
    #[error("{0}")]
    Domain(String),
    /// The real root branch of the oscillator steady-state cubic is unavailable
    /// or fails its residual check.
    #[error("steady-state branch error: {0}")]
    Branch(String),
    /// A step-doubling check on a fixed-step integrator failed.
    #[error("integration did not converge: {0}")]
    NonConvergence(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
