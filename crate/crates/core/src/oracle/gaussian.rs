// SPDX-License-Identifier: Apache-2.0

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::beamsplitter::BsParams;
use crate::error::{Error, Result};
use crate::quadrature::{MethodParams, MethodPoint, QuadratureStats};

/// Smallest eigenvalue of `cov + iΩ` still accepted as physical.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;

/// Multimode Gaussian state over `(X₁, P₁, X₂, P₂, …)` with vacuum covariance
/// equal to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

/// `Ω = ⊕ [[0, 1], [−1, 0]]` over `n` modes.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// `S Ω Sᵀ = Ω` entrywise within `tol`.
pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> bool {
    if !s.is_square() || s.nrows() % 2 != 0 {
        return false;
    }
    let omega = symplectic_form(s.nrows() / 2);
    (s * &omega * s.transpose() - omega).amax() <= tol
}

/// Squeezing of `mode`: `X → e^{−b} X`, `P → e^{b} P`.
pub fn squeeze_matrix(n: usize, mode: usize, b: f64) -> Result<DMatrix<f64>> {
    check_mode(n, mode)?;
    let mut s = DMatrix::identity(2 * n, 2 * n);
    s[(2 * mode, 2 * mode)] = (-b).exp();
    s[(2 * mode + 1, 2 * mode + 1)] = b.exp();
    Ok(s)
}

/// Beam splitter generated by `H = −η(a†b + ab†)` for `θ = ηt`, which maps
/// `a → cos θ a + i sin θ b` and `b → cos θ b + i sin θ a`. In quadratures:
///
/// ```text
/// X_a' = c X_a − s P_b    P_a' = c P_a + s X_b
/// X_b' = c X_b − s P_a    P_b' = c P_b + s X_a
/// ```
///
/// A real displacement entering `b` therefore leaves `a` along `P`.
pub fn beamsplitter_matrix(n: usize, a: usize, b: usize, theta: f64) -> Result<DMatrix<f64>> {
    check_mode(n, a)?;
    check_mode(n, b)?;
    if a == b {
        return Err(Error::domain(format!(
            "beam splitter needs two distinct modes, got {a} twice"
        )));
    }
    let (s, c) = theta.sin_cos();
    let mut m = DMatrix::identity(2 * n, 2 * n);
    let (xa, pa, xb, pb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
    m[(xa, xa)] = c;
    m[(xa, pb)] = -s;
    m[(pa, pa)] = c;
    m[(pa, xb)] = s;
    m[(xb, xb)] = c;
    m[(xb, pa)] = -s;
    m[(pb, pb)] = c;
    m[(pb, xa)] = s;
    Ok(m)
}

fn check_mode(n: usize, mode: usize) -> Result<()> {
    if mode >= n {
        return Err(Error::domain(format!(
            "mode {mode} out of range for {n} modes"
        )));
    }
    Ok(())
}

impl GaussianState {
    pub fn vacuum(n: usize) -> Self {
        GaussianState {
            mean: DVector::zeros(2 * n),
            cov: DMatrix::identity(2 * n, 2 * n),
        }
    }

    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || dim % 2 != 0 || cov.shape() != (dim, dim) {
            return Err(Error::domain(format!(
                "need an even-length mean and matching square covariance, got {} and {:?}",
                dim,
                cov.shape()
            )));
        }
        if (&cov - cov.transpose()).amax() > 1e-12 * cov.amax().max(1.0) {
            return Err(Error::domain("covariance is not symmetric"));
        }
        Ok(GaussianState { mean, cov })
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    /// `mean → S mean`, `cov → S cov Sᵀ`.
    pub fn transform(&self, s: &DMatrix<f64>) -> Result<Self> {
        if s.shape() != self.cov.shape() {
            return Err(Error::domain(format!(
                "transform shape {:?} does not match state dimension {}",
                s.shape(),
                self.mean.len()
            )));
        }
        Ok(GaussianState {
            mean: s * &self.mean,
            cov: s * &self.cov * s.transpose(),
        })
    }

    pub fn apply_squeeze(&self, mode: usize, b: f64) -> Result<Self> {
        self.transform(&squeeze_matrix(self.n_modes(), mode, b)?)
    }

    /// Coherent displacement by `amp`, shifting `(X, P)` by `(2 Re amp, 2 Im amp)`.
    pub fn apply_displacement(&self, mode: usize, amp: Complex<f64>) -> Result<Self> {
        check_mode(self.n_modes(), mode)?;
        let mut out = self.clone();
        out.mean[2 * mode] += 2.0 * amp.re;
        out.mean[2 * mode + 1] += 2.0 * amp.im;
        Ok(out)
    }

    pub fn apply_beamsplitter(&self, a: usize, b: usize, theta: f64) -> Result<Self> {
        self.transform(&beamsplitter_matrix(self.n_modes(), a, b, theta)?)
    }

    pub fn mode_stats(&self, mode: usize) -> Result<QuadratureStats> {
        check_mode(self.n_modes(), mode)?;
        Ok(QuadratureStats {
            var_x: self.cov[(2 * mode, 2 * mode)],
            var_p: self.cov[(2 * mode + 1, 2 * mode + 1)],
        })
    }

    pub fn mode_mean(&self, mode: usize) -> Result<(f64, f64)> {
        check_mode(self.n_modes(), mode)?;
        Ok((self.mean[2 * mode], self.mean[2 * mode + 1]))
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + iΩ`, read off its
    /// real embedding `[[cov, −Ω], [Ω, cov]]`.
    pub fn min_physical_eigenvalue(&self) -> f64 {
        let d = self.cov.nrows();
        let omega = symplectic_form(self.n_modes());
        let mut big = DMatrix::zeros(2 * d, 2 * d);
        big.view_mut((0, 0), (d, d)).copy_from(&self.cov);
        big.view_mut((d, d), (d, d)).copy_from(&self.cov);
        big.view_mut((0, d), (d, d)).copy_from(&(-&omega));
        big.view_mut((d, 0), (d, d)).copy_from(&omega);
        SymmetricEigen::new(big).eigenvalues.min()
    }

    pub fn is_physical(&self) -> bool {
        self.min_physical_eigenvalue() >= -PHYSICALITY_TOLERANCE
    }

    /// 1 for pure states.
    pub fn cov_determinant(&self) -> f64 {
        self.cov.determinant()
    }
}

/// Beam-splitter output built from scratch: squeezed vacuum in mode 0, a
/// unit coherent pump in mode 1, mixed at angle θ. `α²` is the squared
/// output displacement relative to the pump's.
pub fn bs_oracle(params: &BsParams) -> Result<MethodPoint> {
    params.validate()?;
    let pump = Complex::new(1.0, 0.0);
    let out = GaussianState::vacuum(2)
        .apply_squeeze(0, params.b)?
        .apply_displacement(1, pump)?
        .apply_beamsplitter(0, 1, params.theta)?;
    let (x, p) = out.mode_mean(0)?;
    Ok(MethodPoint {
        alpha_sq: (x * x + p * p) / (4.0 * pump.norm_sqr()),
        stats: out.mode_stats(0)?,
        params: MethodParams::BeamSplitter(*params),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamsplitter::bs_evaluate;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        (a - b).amax() <= tol
    }

    #[test]
    fn squeeze_on_vacuum() {
        let v = GaussianState::vacuum(1);
        assert_eq!(v.apply_squeeze(0, 0.0).unwrap(), v);
        let s = v.apply_squeeze(0, 1.0).unwrap();
        let want = DMatrix::from_diagonal(&DVector::from_vec(vec![(-2.0f64).exp(), 2.0f64.exp()]));
        assert!(close(&s.cov, &want, 1e-12));
    }

    #[test]
    fn squeeze_group_property() {
        let v = GaussianState::vacuum(2)
            .apply_displacement(1, Complex::new(0.3, -0.2))
            .unwrap();
        let twice = v
            .apply_squeeze(1, 0.5)
            .unwrap()
            .apply_squeeze(1, 0.5)
            .unwrap();
        let once = v.apply_squeeze(1, 1.0).unwrap();
        assert!(close(&twice.cov, &once.cov, 1e-12));
        assert!((twice.mean - once.mean).amax() < 1e-12);
    }

    #[test]
    fn displacement_convention() {
        let v = GaussianState::vacuum(1);
        assert_eq!(v.apply_displacement(0, Complex::new(0.0, 0.0)).unwrap(), v);
        let d = v.apply_displacement(0, Complex::new(3.0, 0.0)).unwrap();
        assert_eq!(d.mode_mean(0).unwrap(), (6.0, 0.0));
        assert_eq!(d.cov, v.cov);
    }

    #[test]
    fn displacement_and_squeeze_do_not_commute() {
        let v = GaussianState::vacuum(1);
        let amp = Complex::new(1.0, 1.0);
        let ds = v
            .apply_displacement(0, amp)
            .unwrap()
            .apply_squeeze(0, 0.7)
            .unwrap();
        let sd = v
            .apply_squeeze(0, 0.7)
            .unwrap()
            .apply_displacement(0, amp)
            .unwrap();
        assert_eq!(sd.mode_mean(0).unwrap(), (2.0, 2.0));
        let (x, p) = ds.mode_mean(0).unwrap();
        assert!((x - 2.0 * (-0.7f64).exp()).abs() < 1e-12);
        assert!((p - 2.0 * 0.7f64.exp()).abs() < 1e-12);
        assert_eq!(ds.cov, sd.cov);
    }

    #[test]
    fn beamsplitter_limits() {
        let s = GaussianState::vacuum(2)
            .apply_squeeze(0, 0.8)
            .unwrap()
            .apply_displacement(1, Complex::new(1.5, 0.0))
            .unwrap();
        assert_eq!(s.apply_beamsplitter(0, 1, 0.0).unwrap(), s);
        let swapped = s.apply_beamsplitter(0, 1, FRAC_PI_2).unwrap();
        // Full exchange with X ↔ P relabeling from the ±i coupling.
        let a = s.mode_stats(0).unwrap();
        let b = swapped.mode_stats(1).unwrap();
        assert!((a.var_x - b.var_p).abs() < 1e-12 && (a.var_p - b.var_x).abs() < 1e-12);
        assert!((swapped.mode_mean(0).unwrap().1 - 3.0).abs() < 1e-12);
        assert!(swapped.mode_mean(0).unwrap().0.abs() < 1e-12);
    }

    #[test]
    fn bad_modes_are_rejected() {
        let v = GaussianState::vacuum(2);
        assert!(v.apply_squeeze(2, 0.1).is_err());
        assert!(v.apply_displacement(5, Complex::new(1.0, 0.0)).is_err());
        assert!(v.apply_beamsplitter(1, 1, 0.3).is_err());
        assert!(GaussianState::new(DVector::zeros(3), DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn unphysical_covariance_detected() {
        let bad = GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 0.5).unwrap();
        assert!(!bad.is_physical());
        assert!(GaussianState::vacuum(3).is_physical());
    }

    proptest! {
        #[test]
        fn transforms_are_symplectic(b in -3.0f64..3.0, theta in -4.0f64..4.0) {
            prop_assert!(is_symplectic(&squeeze_matrix(3, 1, b).unwrap(), 1e-12));
            prop_assert!(is_symplectic(&beamsplitter_matrix(3, 0, 2, theta).unwrap(), 1e-12));
        }

        #[test]
        fn pure_inputs_stay_pure(
            b0 in -2.0f64..2.0,
            b1 in -2.0f64..2.0,
            re in -3.0f64..3.0,
            im in -3.0f64..3.0,
            theta in 0.0f64..FRAC_PI_2,
        ) {
            let s = GaussianState::vacuum(2)
                .apply_squeeze(0, b0).unwrap()
                .apply_displacement(1, Complex::new(re, im)).unwrap()
                .apply_squeeze(1, b1).unwrap()
                .apply_beamsplitter(0, 1, theta).unwrap();
            prop_assert!((s.cov_determinant() - 1.0).abs() < 1e-9);
            prop_assert!(s.is_physical());
        }

        #[test]
        fn reproduces_beamsplitter_closed_form(b in -3.0f64..3.0, theta in 0.0f64..FRAC_PI_2) {
            let p = BsParams::new(b, theta).unwrap();
            let want = bs_evaluate(&p).unwrap();
            let got = bs_oracle(&p).unwrap();
            prop_assert!((got.alpha_sq - want.alpha_sq).abs() < 1e-10);
            prop_assert!((got.stats.var_x - want.stats.var_x).abs() < 1e-10 * want.stats.var_x.max(1.0));
            prop_assert!((got.stats.var_p - want.stats.var_p).abs() < 1e-10 * want.stats.var_p.max(1.0));
        }
    }
}
