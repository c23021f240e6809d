// SPDX-License-Identifier: Apache-2.0

use sqzlab_bench::{bs_point, om_point, opa_params, opo_point, square_grid};
use sqzlab_core::{bs_evaluate, om_evaluate, opa_propagate, opo_evaluate, Method, Regime};

#[test]
fn fixtures_evaluate() {
    assert!(bs_evaluate(&bs_point()).is_ok());
    assert!(opo_evaluate(&opo_point(Regime::PhaseSqueezing)).is_ok());
    assert!(opo_evaluate(&opo_point(Regime::AmplitudeSqueezing)).is_ok());
    assert!(om_evaluate(&om_point()).is_ok());
    assert!(opa_propagate(&opa_params(1.0)).is_ok());
}

#[test]
fn square_grids_are_valid() {
    for method in Method::ALL {
        let g = square_grid(method, 7);
        g.validate().unwrap();
        assert_eq!(g.len(), 49);
    }
}
