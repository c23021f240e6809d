// SPDX-License-Identifier: Apache-2.0

//! Shared inputs for the benchmarks.

use sqzlab_core::{
    Axis, BsParams, Method, OmParams, OpaParams, OpoParams, Regime, SqueezedAxis, SweepGrid,
};

pub fn bs_point() -> BsParams {
    BsParams::new(1.2, 0.3).unwrap()
}

pub fn opo_point(regime: Regime) -> OpoParams {
    OpoParams::new(0.8, 0.05, regime).unwrap()
}

pub fn opa_params(t_max: f64) -> OpaParams {
    OpaParams::new(0.05, t_max, Regime::PhaseSqueezing).unwrap()
}

pub fn om_point() -> OmParams {
    OmParams::new(2.0, 0.3, 0.0, SqueezedAxis::Amplitude).unwrap()
}

/// A grid of roughly `n × n` points for `method`, over its default ranges.
pub fn square_grid(method: Method, n: usize) -> SweepGrid {
    let mut g = SweepGrid::default_for(method);
    g.axes = g
        .axes
        .iter()
        .map(|a| Axis {
            count: n,
            ..a.clone()
        })
        .collect();
    g
}
