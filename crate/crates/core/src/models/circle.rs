//! The circle ℝ/ℤ: the one-dimensional Euclidean prototype.
//!
//! Modes in flat order 0, +1, -1, +2, -2, … with λ = (2πk)² and
//! ψ_k(x) = e^{2πikx}; the adapted complexification is the cylinder,
//! ψ_k(exp_x iy) = e^{2πik(x+iy)}, entire in y. Integration over the
//! base uses a uniform grid, exact for trigonometric polynomials of
//! degree below the grid size.

use super::{check_radius, SpectralModel};
use crate::error::{Error, Result};
use num_complex::Complex64;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct CircleModel {
    n_modes: usize,
    grid_points: usize,
}

impl CircleModel {
    pub fn new(n_modes: usize) -> Self {
        assert!(n_modes >= 1, "need at least the constant mode");
        let k_max = Self::frequency_of(n_modes.saturating_sub(1)).unsigned_abs() as usize;
        CircleModel {
            n_modes,
            grid_points: (4 * k_max).max(8),
        }
    }

    pub fn with_grid_points(mut self, grid_points: usize) -> Self {
        assert!(grid_points >= 2);
        self.grid_points = grid_points;
        self
    }

    /// Flat index -> signed frequency: 0, +1, -1, +2, -2, …
    pub fn frequency_of(n: usize) -> i64 {
        if n == 0 {
            0
        } else if n % 2 == 1 {
            ((n + 1) / 2) as i64
        } else {
            -((n / 2) as i64)
        }
    }

    /// Signed frequency -> flat index.
    pub fn index_of(k: i64) -> usize {
        if k == 0 {
            0
        } else if k > 0 {
            (2 * k - 1) as usize
        } else {
            (-2 * k) as usize
        }
    }

    fn check_mode(&self, n: usize) -> Result<i64> {
        if n >= self.n_modes {
            return Err(Error::InvalidInput(format!(
                "mode {n} out of range ({} modes)",
                self.n_modes
            )));
        }
        Ok(Self::frequency_of(n))
    }
}

impl SpectralModel for CircleModel {
    fn name(&self) -> &str {
        "circle"
    }

    fn dim(&self) -> usize {
        1
    }

    fn rho_sq(&self) -> f64 {
        0.0
    }

    fn analyticity_radius(&self) -> f64 {
        f64::INFINITY
    }

    fn mode_count(&self) -> usize {
        self.n_modes
    }

    fn eigenvalue(&self, n: usize) -> f64 {
        let k = Self::frequency_of(n) as f64;
        (TWO_PI * k).powi(2)
    }

    fn sup_norm_bound(&self, _n: usize) -> f64 {
        1.0
    }

    fn has_point_evaluation(&self) -> bool {
        true
    }

    fn has_complex_extension(&self) -> bool {
        true
    }

    fn eigenfunction(&self, n: usize, x: &[f64]) -> Result<Complex64> {
        let k = self.check_mode(n)? as f64;
        Ok((Complex64::i() * TWO_PI * k * x[0]).exp())
    }

    fn eigenfunction_complex(&self, n: usize, x: &[f64], y: &[f64]) -> Result<Complex64> {
        let k = self.check_mode(n)? as f64;
        check_radius(self, y)?;
        let z = Complex64::new(x[0], y[0]);
        Ok((Complex64::i() * TWO_PI * k * z).exp())
    }

    fn integrate(&self, g: &mut dyn FnMut(&[f64]) -> Complex64) -> Result<Complex64> {
        let m = self.grid_points;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..m {
            acc += g(&[i as f64 / m as f64]);
        }
        Ok(acc / m as f64)
    }

    fn tail_log_amplification(&self, t: f64, y_norm: f64, from: usize) -> Result<f64> {
        let kappa_min = match (0..from)
            .map(|n| Self::frequency_of(n).unsigned_abs())
            .max()
        {
            None => 0.0,
            Some(k_used) => k_used as f64 + 1.0,
        };
        Ok(frequency_tail_log_amplification(t, y_norm, kappa_min))
    }

    fn conjugate_mode(&self, n: usize) -> Option<usize> {
        let m = Self::index_of(-Self::frequency_of(n));
        (m < self.n_modes).then_some(m)
    }
}

/// sup over frequencies κ >= κ_min of `-t (2πκ)²/2 + 2πκ y`, the log of
/// the heat decay against the continuation growth of one mode.
pub(super) fn frequency_tail_log_amplification(t: f64, y_norm: f64, kappa_min: f64) -> f64 {
    let g = |kappa: f64| -t * (TWO_PI * kappa).powi(2) / 2.0 + TWO_PI * kappa * y_norm;
    let vertex = y_norm / (TWO_PI * t);
    g(vertex.max(kappa_min))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_frequency_roundtrip() {
        for n in 0..100 {
            assert_eq!(CircleModel::index_of(CircleModel::frequency_of(n)), n);
        }
        let freqs: Vec<i64> = (0..5).map(CircleModel::frequency_of).collect();
        assert_eq!(freqs, vec![0, 1, -1, 2, -2]);
    }

    #[test]
    fn first_mode_is_the_constant() {
        let m = CircleModel::new(8);
        assert_eq!(m.eigenvalue(0), 0.0);
        let v = m.eigenfunction(0, &[0.77]).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn complexified_single_mode_closed_form() {
        // ψ_1 at x = 0, y = 0.3 is e^{-2π·0.3}.
        let m = CircleModel::new(8);
        let v = m.eigenfunction_complex(1, &[0.0], &[0.3]).unwrap();
        let expect = (-TWO_PI * 0.3).exp();
        assert!((v.re - expect).abs() < 1e-15 && v.im.abs() < 1e-18);
    }

    #[test]
    fn tail_amplification_decreases_with_frequency_floor() {
        let a1 = frequency_tail_log_amplification(0.1, 0.2, 2.0);
        let a2 = frequency_tail_log_amplification(0.1, 0.2, 6.0);
        assert!(a2 < a1);
        // Below the vertex the sup sits at the vertex, not the floor.
        let vertex_val = frequency_tail_log_amplification(0.1, 10.0, 1.0);
        assert!((vertex_val - 10.0f64.powi(2) / (2.0 * 0.1)).abs() < 1e-9);
    }
}
