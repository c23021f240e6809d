// SPDX-License-Identifier: Apache-2.0

//! Squeezed vacuum mixed with a strong coherent state on a beam splitter.
//!
//! The squeezed vacuum (squeeze parameter `B`) enters the output port; the
//! coherent pump leaks in with weight `sin²θ`, where `θ = ηt` is the mixing
//! angle generated by the beam-splitter Hamiltonian. In the limit of a strong
//! pump the pump amplitude drops out: the output displacement relative to the
//! pump is `α² = sin²θ` and
//!
//! ```text
//! var_x = e^{−2B} cos²θ + sin²θ
//! var_p = e^{+2B} cos²θ + sin²θ
//! ```

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{MethodParams, MethodPoint, QuadratureStats};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsParams {
    /// Squeeze parameter of the input vacuum; `B > 0` squeezes amplitude.
    pub b: f64,
    /// Mixing angle `ηt` in radians, within `[0, π/2]`.
    pub theta: f64,
}

impl BsParams {
    pub fn new(b: f64, theta: f64) -> Result<Self> {
        let p = BsParams { b, theta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.b.is_finite() {
            return Err(Error::domain(format!("b must be finite, got {}", self.b)));
        }
        if !(0.0..=FRAC_PI_2).contains(&self.theta) {
            return Err(Error::domain(format!(
                "theta must lie in [0,pi/2], got {}",
                self.theta
            )));
        }
        Ok(())
    }
}

pub fn bs_evaluate(params: &BsParams) -> Result<MethodPoint> {
    params.validate()?;
    let (s, c) = params.theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let var_x = (-2.0 * params.b).exp() * c2 + s2;
    let var_p = (2.0 * params.b).exp() * c2 + s2;
    Ok(MethodPoint {
        alpha_sq: s2,
        stats: QuadratureStats { var_x, var_p },
        params: MethodParams::BeamSplitter(*params),
    })
}

/// `ΔX·ΔP = sqrt(1 + 4α²(1−α²) sinh²B)`.
pub fn bs_uncertainty(params: &BsParams) -> Result<f64> {
    params.validate()?;
    let a2 = params.theta.sin().powi(2);
    let sh = params.b.sinh();
    Ok((1.0 + 4.0 * a2 * (1.0 - a2) * sh * sh).sqrt())
}

/// The same uncertainty written in the mixing angle,
/// `sqrt(1 + 2cos²θ sin²θ (cosh 2B − 1))`.
pub fn bs_uncertainty_from_angle(params: &BsParams) -> Result<f64> {
    params.validate()?;
    let (s, c) = params.theta.sin_cos();
    Ok((1.0 + 2.0 * c * c * s * s * ((2.0 * params.b).cosh() - 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn unsqueezed_input_gives_coherent_output() {
        let pt = bs_evaluate(&BsParams::new(0.0, 0.7).unwrap()).unwrap();
        assert!((pt.stats.var_x - 1.0).abs() < 1e-15);
        assert!((pt.stats.var_p - 1.0).abs() < 1e-15);
        assert!((pt.alpha_sq - 0.7f64.sin().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn no_mixing_passes_squeezed_vacuum() {
        let pt = bs_evaluate(&BsParams::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(pt.alpha_sq, 0.0);
        assert!((pt.stats.var_x - (-2.0f64).exp()).abs() < 1e-15);
        assert!((pt.stats.var_p - 2.0f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn balanced_mixing_values() {
        let p = BsParams::new(1.0, FRAC_PI_4).unwrap();
        let pt = bs_evaluate(&p).unwrap();
        // mpmath, 40 digits: e^{∓2}/2 + 1/2.
        assert!((pt.alpha_sq - 0.5).abs() < 1e-15);
        assert!((pt.stats.var_x - 0.5676676416183063).abs() < 1e-12);
        assert!((pt.stats.var_p - 4.194528049465325).abs() < 1e-12);
        // sqrt(1 + sinh²1) = cosh 1.
        assert!((bs_uncertainty(&p).unwrap() - 1.0f64.cosh()).abs() < 1e-12);
        assert!((bs_uncertainty(&p).unwrap() - 1.5430806348152437).abs() < 1e-12);
    }

    #[test]
    fn uncertainty_trivial_limits() {
        for b in [-2.0, 0.3, 3.0] {
            assert_eq!(
                bs_uncertainty(&BsParams::new(b, 0.0).unwrap()).unwrap(),
                1.0
            );
        }
        for theta in [0.0, 0.4, FRAC_PI_2] {
            assert_eq!(
                bs_uncertainty(&BsParams::new(0.0, theta).unwrap()).unwrap(),
                1.0
            );
        }
    }

    #[test]
    fn rejects_angle_outside_quarter_period() {
        assert!(BsParams::new(1.0, -0.1).is_err());
        assert!(BsParams::new(1.0, 1.6).is_err());
        assert!(bs_evaluate(&BsParams {
            b: f64::NAN,
            theta: 0.1
        })
        .is_err());
    }

    proptest! {
        #[test]
        fn closed_forms_agree(b in -3.0f64..3.0, theta in 0.0f64..FRAC_PI_2) {
            let p = BsParams::new(b, theta).unwrap();
            let u = bs_uncertainty(&p).unwrap();
            prop_assert!((u - bs_evaluate(&p).unwrap().uncertainty()).abs() < 1e-12);
            prop_assert!((u - bs_uncertainty_from_angle(&p).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn sign_of_b_swaps_quadratures(b in -3.0f64..3.0, theta in 0.0f64..FRAC_PI_2) {
            let a = bs_evaluate(&BsParams::new(b, theta).unwrap()).unwrap();
            let m = bs_evaluate(&BsParams::new(-b, theta).unwrap()).unwrap();
            prop_assert_eq!(a.stats.swapped(), m.stats);
        }

        #[test]
        fn squeezed_variance_grows_with_brightness(
            b in 0.01f64..3.0,
            t1 in 1e-3f64..1.57,
            t2 in 1e-3f64..1.57,
        ) {
            prop_assume!(t2 - t1 > 1e-9);
            let lo = bs_evaluate(&BsParams::new(b, t1).unwrap()).unwrap();
            let hi = bs_evaluate(&BsParams::new(b, t2).unwrap()).unwrap();
            prop_assert!(lo.alpha_sq < hi.alpha_sq);
            prop_assert!(lo.stats.var_x < hi.stats.var_x);
        }
    }
}
