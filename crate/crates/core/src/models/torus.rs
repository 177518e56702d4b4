//! The flat torus (ℝ/ℤ)^d: product of circles.
//!
//! Lattice modes k ∈ ℤ^d with |k_i| <= m per axis, flat-ordered by
//! (|k|², lexicographic), λ_k = 4π²|k|², ψ_k(x) = e^{2πi k·x} and
//! ψ_k(exp_x iY) = e^{2πi k·(x+iY)}. Base integration is a uniform
//! product grid, exact for the trigonometric polynomials in play.

use super::{check_radius, circle::frequency_tail_log_amplification, SpectralModel};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct TorusModel {
    dim: usize,
    per_axis: usize,
    modes: Vec<Vec<i64>>,
    index_of: HashMap<Vec<i64>, usize>,
    grid_points_per_axis: usize,
}

impl TorusModel {
    pub fn new(dim: usize, per_axis: usize) -> Self {
        assert!(dim >= 1 && per_axis >= 1);
        let range: Vec<i64> = (-(per_axis as i64)..=per_axis as i64).collect();
        let mut modes: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..dim {
            let mut next = Vec::with_capacity(modes.len() * range.len());
            for prefix in &modes {
                for &k in &range {
                    let mut v = prefix.clone();
                    v.push(k);
                    next.push(v);
                }
            }
            modes = next;
        }
        modes.sort_by(|a, b| {
            let na: i64 = a.iter().map(|k| k * k).sum();
            let nb: i64 = b.iter().map(|k| k * k).sum();
            na.cmp(&nb).then_with(|| a.cmp(b))
        });
        let index_of = modes
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        TorusModel {
            dim,
            per_axis,
            modes,
            index_of,
            grid_points_per_axis: 4 * per_axis,
        }
    }

    pub fn per_axis(&self) -> usize {
        self.per_axis
    }

    pub fn lattice_point(&self, n: usize) -> &[i64] {
        &self.modes[n]
    }

    pub fn index_of_lattice_point(&self, k: &[i64]) -> Option<usize> {
        self.index_of.get(k).copied()
    }

    fn check_mode(&self, n: usize) -> Result<&[i64]> {
        self.modes.get(n).map(Vec::as_slice).ok_or_else(|| {
            Error::InvalidInput(format!(
                "mode {n} out of range ({} modes)",
                self.modes.len()
            ))
        })
    }
}

impl SpectralModel for TorusModel {
    fn name(&self) -> &str {
        "torus"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn rho_sq(&self) -> f64 {
        0.0
    }

    fn analyticity_radius(&self) -> f64 {
        f64::INFINITY
    }

    fn mode_count(&self) -> usize {
        self.modes.len()
    }

    fn eigenvalue(&self, n: usize) -> f64 {
        let norm_sq: i64 = self.modes[n].iter().map(|k| k * k).sum();
        TWO_PI * TWO_PI * norm_sq as f64
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
        let k = self.check_mode(n)?;
        let phase: f64 = k.iter().zip(x).map(|(&ki, &xi)| ki as f64 * xi).sum();
        Ok((Complex64::i() * TWO_PI * phase).exp())
    }

    fn eigenfunction_complex(&self, n: usize, x: &[f64], y: &[f64]) -> Result<Complex64> {
        let k = self.check_mode(n)?;
        check_radius(self, y)?;
        let mut z = Complex64::new(0.0, 0.0);
        for ((&ki, &xi), &yi) in k.iter().zip(x).zip(y) {
            z += ki as f64 * Complex64::new(xi, yi);
        }
        Ok((Complex64::i() * TWO_PI * z).exp())
    }

    fn integrate(&self, g: &mut dyn FnMut(&[f64]) -> Complex64) -> Result<Complex64> {
        let m = self.grid_points_per_axis;
        let total = m.pow(self.dim as u32);
        let mut x = vec![0.0; self.dim];
        let mut acc = Complex64::new(0.0, 0.0);
        for flat in 0..total {
            let mut rest = flat;
            for xi in x.iter_mut() {
                *xi = (rest % m) as f64 / m as f64;
                rest /= m;
            }
            acc += g(&x);
        }
        Ok(acc / total as f64)
    }

    fn tail_log_amplification(&self, t: f64, y_norm: f64, from: usize) -> Result<f64> {
        // |k·Y| <= |k||Y|, so one mode of Euclidean norm κ grows at most
        // like e^{2πκ|Y|}; the first norm not fully represented below
        // `from` floors the tail.
        let kappa_min = if from == 0 {
            0.0
        } else if from < self.modes.len() {
            self.eigenvalue(from).sqrt() / TWO_PI
        } else {
            (self.eigenvalue(self.modes.len() - 1).sqrt() / TWO_PI).floor() + 1.0
        };
        Ok(frequency_tail_log_amplification(t, y_norm, kappa_min))
    }

    fn conjugate_mode(&self, n: usize) -> Option<usize> {
        let neg: Vec<i64> = self.modes[n].iter().map(|k| -k).collect();
        self.index_of_lattice_point(&neg)
    }
}
