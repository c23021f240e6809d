// SPDX-License-Identifier: Apache-2.0

//! Cross-module invariants through the public API.

use proptest::prelude::*;
use sqzlab_core::opa::opa_sample;
use sqzlab_core::oracle::{bs_oracle, GaussianState};
use sqzlab_core::{
    bs_evaluate, frontier, om_evaluate, opa_evaluate, opa_propagate, opo_evaluate, AlphaBins,
    BsParams, MethodPoint, OmParams, OpaParams, OpoParams, Regime, SqueezedAxis,
};

const SLACK: f64 = 1e-9;

fn regime() -> impl Strategy<Value = Regime> {
    prop_oneof![
        Just(Regime::PhaseSqueezing),
        Just(Regime::AmplitudeSqueezing)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bs_is_pure_and_matches_oracle(b in 0.0..5.0f64, theta in 0.0..std::f64::consts::FRAC_PI_2) {
        let p = BsParams::new(b, theta).unwrap();
        let pt = bs_evaluate(&p).unwrap();
        let o = bs_oracle(&p).unwrap();
        prop_assert!(pt.uncertainty() >= 1.0 - SLACK);
        prop_assert!((pt.alpha_sq - theta.sin().powi(2)).abs() < 1e-12);
        prop_assert!((o.stats.var_x - pt.stats.var_x).abs() < 1e-9 * pt.stats.var_x.max(1.0));
        prop_assert!((o.stats.var_p - pt.stats.var_p).abs() < 1e-9 * pt.stats.var_p.max(1.0));
    }

    #[test]
    fn opo_respects_uncertainty(c0 in 0.001..0.999f64, seed in 0.0..10.0f64, r in regime()) {
        let pt = opo_evaluate(&OpoParams::new(c0, seed, r).unwrap()).unwrap();
        prop_assert!(pt.uncertainty() >= 1.0 - SLACK);
        prop_assert!(pt.alpha_sq >= 0.0);
    }

    #[test]
    fn opo_small_seed_amplifies_or_deamplifies(c0 in 0.05..0.95f64, seed in 1e-4..1e-2f64) {
        let amp = opo_evaluate(&OpoParams::new(c0, seed, Regime::PhaseSqueezing).unwrap()).unwrap();
        let de = opo_evaluate(&OpoParams::new(c0, seed, Regime::AmplitudeSqueezing).unwrap()).unwrap();
        prop_assert!(amp.alpha_sq > seed * seed);
        prop_assert!(de.alpha_sq < seed * seed);
    }

    #[test]
    fn om_above_unit_cooperativity_respects_uncertainty(
        cc in 1.0..10.0f64,
        frac in 0.0..1.0f64,
        n_bar in 0.0..10.0f64,
    ) {
        let dd = frac / cc;
        let pt = om_evaluate(&OmParams::new(cc, dd, n_bar, SqueezedAxis::Amplitude).unwrap()).unwrap();
        prop_assert!(pt.uncertainty() >= 1.0 - SLACK);
        let swapped = om_evaluate(&OmParams::new(cc, dd, n_bar, SqueezedAxis::Phase).unwrap()).unwrap();
        prop_assert_eq!(swapped.stats.var_x, pt.stats.var_p);
    }

    #[test]
    fn frontiers_nest(raw in prop::collection::vec((1e-5..1.0f64, 0.01..10.0f64, 1.0..4.0f64), 1..200)) {
        let points: Vec<MethodPoint> = raw
            .iter()
            .map(|&(a2, vx, u)| {
                // var_x·var_p = u²
                let mut p = bs_evaluate(&BsParams::new(0.0, 0.0).unwrap()).unwrap();
                p.alpha_sq = a2;
                p.stats.var_x = vx;
                p.stats.var_p = u * u / vx;
                p
            })
            .collect();
        let bins = AlphaBins::default();
        let tight = frontier(&points, 1.5, &bins).unwrap();
        let loose = frontier(&points, 3.0, &bins).unwrap();
        for p in &tight.points {
            let q = loose.at(p.alpha_sq_bin).unwrap();
            prop_assert!(q.squeeze_db >= p.squeeze_db);
            prop_assert!(p.uncertainty <= 1.5 + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn opa_trajectory_is_physical(seed in 0.005..1.0f64, r in regime()) {
        let traj = opa_propagate(&OpaParams::new(seed, 3.0, r).unwrap()).unwrap();
        for i in (0..traj.len()).step_by(97) {
            prop_assert!(traj.seed_stats(i).uncertainty() >= 1.0 - SLACK);
            prop_assert!((traj.joint_determinant(i) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn opa_sampling_matches_single_evaluation(seed in 0.01..0.5f64, r in regime(), t in 0.1..3.0f64) {
        let p = OpaParams::new(seed, 3.0, r).unwrap();
        let sampled = opa_sample(&p, &[0.0, t, 3.0]).unwrap();
        let direct = opa_evaluate(&p, t).unwrap();
        let s = sampled.seed_stats(1);
        prop_assert!((s.var_x / direct.stats.var_x - 1.0).abs() < 1e-6);
        prop_assert!((s.var_p / direct.stats.var_p - 1.0).abs() < 1e-6);
        prop_assert!((sampled.alpha_sq(1) / direct.alpha_sq - 1.0).abs() < 1e-12);
    }
}

#[test]
fn oracle_vacuum_and_squeezer_round_trip() {
    let st = GaussianState::vacuum(2)
        .apply_squeeze(0, 0.7)
        .and_then(|s| s.apply_squeeze(0, -0.7))
        .unwrap();
    assert!(st.is_physical());
    let s = st.mode_stats(0).unwrap();
    let (vx, vp) = (s.var_x, s.var_p);
    assert!((vx - 1.0).abs() < 1e-12 && (vp - 1.0).abs() < 1e-12);
}
