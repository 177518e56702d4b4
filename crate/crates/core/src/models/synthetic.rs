//! Synthetic compact-quotient spectrum.
//!
//! Reproduces the spectral features the inversion and isometry limits
//! depend on — λ_0 = 0, user-chosen low eigenvalues inside [0, ρ²), a
//! Weyl-law tail λ_n = C n^{2/d}, and polynomial sup-norm bounds — while
//! honestly refusing everything geometric: there are no eigenfunctions
//! to evaluate, no base quadrature, and no holomorphic extension. The
//! analyticity radius is a free configuration parameter; results on
//! this model are conditional on it.

use super::{capability_error, SpectralModel};
use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct SyntheticModel {
    dim: usize,
    rho_sq: f64,
    weyl_const: f64,
    n_modes: usize,
    low_spectrum: Vec<f64>,
    seed: u64,
    sup_norm_constant: f64,
    analyticity_radius: f64,
}

impl SyntheticModel {
    pub fn new(
        dim: usize,
        rho_sq: f64,
        weyl_const: f64,
        n_modes: usize,
        low_spectrum: Vec<f64>,
        seed: u64,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if !(rho_sq >= 0.0) {
            return Err(Error::InvalidInput("rho_sq must be nonnegative".into()));
        }
        if !(weyl_const > 0.0) {
            return Err(Error::InvalidInput("weyl_const must be positive".into()));
        }
        if n_modes < 1 + low_spectrum.len() {
            return Err(Error::InvalidInput(format!(
                "need at least {} modes to hold the low spectrum",
                1 + low_spectrum.len()
            )));
        }
        for w in low_spectrum.windows(2) {
            if w[1] < w[0] {
                return Err(Error::InvalidInput("low spectrum must be sorted".into()));
            }
        }
        if let Some(&worst) = low_spectrum.last() {
            if low_spectrum[0] < 0.0 || worst >= rho_sq {
                return Err(Error::InvalidInput(format!(
                    "low spectrum must lie in [0, {rho_sq}), got up to {worst}"
                )));
            }
            let first_tail =
                weyl_const * ((low_spectrum.len() + 1) as f64).powf(2.0 / dim as f64);
            if first_tail < worst {
                return Err(Error::InvalidInput(format!(
                    "Weyl tail starts at {first_tail}, below the top low eigenvalue {worst}"
                )));
            }
        }
        Ok(SyntheticModel {
            dim,
            rho_sq,
            weyl_const,
            n_modes,
            low_spectrum,
            seed,
            sup_norm_constant: 1.0,
            analyticity_radius: 1.0,
        })
    }

    /// Constant C₂ in the sup-norm bound C₂ n^{(d-1)/2d}.
    pub fn with_sup_norm_constant(mut self, c2: f64) -> Self {
        self.sup_norm_constant = c2;
        self
    }

    /// Declared radius R₀; purely informational for this model.
    pub fn with_analyticity_radius(mut self, r0: f64) -> Self {
        self.analyticity_radius = r0;
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl SpectralModel for SyntheticModel {
    fn name(&self) -> &str {
        "synthetic"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn rho_sq(&self) -> f64 {
        self.rho_sq
    }

    fn analyticity_radius(&self) -> f64 {
        self.analyticity_radius
    }

    fn mode_count(&self) -> usize {
        self.n_modes
    }

    fn eigenvalue(&self, n: usize) -> f64 {
        if n == 0 {
            0.0
        } else if n <= self.low_spectrum.len() {
            self.low_spectrum[n - 1]
        } else {
            self.weyl_const * (n as f64).powf(2.0 / self.dim as f64)
        }
    }

    fn sup_norm_bound(&self, n: usize) -> f64 {
        let d = self.dim as f64;
        self.sup_norm_constant * (n.max(1) as f64).powf((d - 1.0) / (2.0 * d))
    }

    fn has_point_evaluation(&self) -> bool {
        false
    }

    fn has_complex_extension(&self) -> bool {
        false
    }

    fn eigenfunction(&self, _n: usize, _x: &[f64]) -> Result<Complex64> {
        Err(capability_error(self, "eigenfunction evaluation"))
    }

    fn eigenfunction_complex(&self, _n: usize, _x: &[f64], _y: &[f64]) -> Result<Complex64> {
        Err(capability_error(self, "complexified eigenfunction evaluation"))
    }

    fn integrate(&self, _g: &mut dyn FnMut(&[f64]) -> Complex64) -> Result<Complex64> {
        Err(capability_error(self, "base-manifold integration"))
    }

    fn tail_log_amplification(&self, _t: f64, _y_norm: f64, _from: usize) -> Result<f64> {
        Err(capability_error(self, "holomorphic continuation bounds"))
    }

    fn conjugate_mode(&self, _n: usize) -> Option<usize> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_model() -> SyntheticModel {
        SyntheticModel::new(3, 1.0, 1.0, 2000, vec![0.5], 42).unwrap()
    }

    #[test]
    fn spectrum_layout() {
        let m = default_model();
        assert_eq!(m.eigenvalue(0), 0.0);
        assert_eq!(m.eigenvalue(1), 0.5);
        assert!((m.eigenvalue(2) - 2.0f64.powf(2.0 / 3.0)).abs() < 1e-15);
        let mut prev = 0.0;
        for n in 0..m.mode_count() {
            assert!(m.eigenvalue(n) >= prev);
            prev = m.eigenvalue(n);
        }
    }

    #[test]
    fn weyl_tail_ratio() {
        // λ_n / n^{2/d} constant within a factor of 4 over n in [100, 1000].
        let m = default_model();
        let base = m.eigenvalue(100) / 100.0f64.powf(2.0 / 3.0);
        for n in (100..=1000).step_by(50) {
            let ratio = m.eigenvalue(n) / (n as f64).powf(2.0 / 3.0) / base;
            assert!(ratio < 4.0 && ratio > 0.25);
        }
    }

    #[test]
    fn sup_norm_growth_exponent() {
        // d = 3: bound grows like n^{1/3}.
        let m = default_model();
        let g = m.sup_norm_bound(8000) / m.sup_norm_bound(1000);
        assert!((g - 2.0).abs() < 1e-12, "8x the index must double the bound");
    }

    #[test]
    fn geometric_capabilities_refuse() {
        let m = default_model();
        assert!(matches!(
            m.eigenfunction(0, &[0.0; 3]),
            Err(Error::Capability { .. })
        ));
        assert!(matches!(
            m.eigenfunction_complex(0, &[0.0; 3], &[0.1; 3]),
            Err(Error::Capability { .. })
        ));
        assert!(matches!(
            m.integrate(&mut |_| Complex64::new(1.0, 0.0)),
            Err(Error::Capability { .. })
        ));
    }

    #[test]
    fn invalid_configurations() {
        assert!(SyntheticModel::new(3, 1.0, 1.0, 100, vec![1.0], 0).is_err());
        assert!(SyntheticModel::new(3, 1.0, 1.0, 100, vec![0.9, 0.2], 0).is_err());
        assert!(SyntheticModel::new(3, 1.0, 0.0, 100, vec![], 0).is_err());
        assert!(SyntheticModel::new(3, 1.0, 1.0, 1, vec![0.5], 0).is_err());
        // A huge low eigenvalue that the Weyl tail would undercut.
        assert!(SyntheticModel::new(3, 1.0, 1e-3, 100, vec![0.99], 0).is_err());
    }
}
