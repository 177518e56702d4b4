//! Eigenbasis oracles standing in for the compact base manifold.
//!
//! A [`SpectralModel`] supplies an orthonormal eigenbasis {ψ_n} of the
//! (negative) Laplacian with nondecreasing eigenvalues λ_n, λ_0 = 0 and
//! ψ_0 constant, plus whatever subset of these capabilities it can
//! honestly provide:
//!
//! * pointwise evaluation of ψ_n on the base,
//! * evaluation of the holomorphic extension ψ_n(exp_x iY) inside the
//!   model's analyticity radius,
//! * integration of functions over the base.
//!
//! The circle and torus models are entire and exact; the synthetic
//! quotient model supplies only the spectral side (eigenvalues, sup-norm
//! bounds) and reports a capability error for anything geometric. This
//! split keeps spectral-side computations (multiplier application,
//! Parseval-type limits, surjectivity algebra) available on spectra that
//! have no computable eigenfunctions.
//!
//! Mode ordering is a single flat index: circle 0, +1, -1, +2, -2, …;
//! torus lexicographic within shells of equal |k|²; synthetic by
//! construction.

mod circle;
mod euclidean;
mod synthetic;
mod torus;

pub use circle::CircleModel;
pub use euclidean::{EuclideanEigenfunction, EuclideanKind};
pub use synthetic::SyntheticModel;
pub use torus::TorusModel;

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub type ModelRef = Arc<dyn SpectralModel>;

pub trait SpectralModel: Send + Sync {
    fn name(&self) -> &str;

    /// Manifold dimension d.
    fn dim(&self) -> usize;

    /// |ρ|² of the associated geometry (0 for Euclidean models).
    fn rho_sq(&self) -> f64;

    /// Radius within which complexified evaluation is supplied
    /// (infinite for entire models).
    fn analyticity_radius(&self) -> f64;

    /// Number of enumerated modes.
    fn mode_count(&self) -> usize;

    /// λ_n for n < mode_count; nondecreasing, λ_0 = 0.
    fn eigenvalue(&self, n: usize) -> f64;

    /// Upper bound for the sup norm of the L²-normalized ψ_n.
    fn sup_norm_bound(&self, n: usize) -> f64;

    fn has_point_evaluation(&self) -> bool;

    fn has_complex_extension(&self) -> bool;

    /// ψ_n(x) for x on the base.
    fn eigenfunction(&self, n: usize, x: &[f64]) -> Result<Complex64>;

    /// ψ_n(exp_x iY), defined for |Y| < analyticity radius.
    fn eigenfunction_complex(&self, n: usize, x: &[f64], y: &[f64]) -> Result<Complex64>;

    /// Integral over the base with the Riemannian volume, via the
    /// model's quadrature rule.
    fn integrate(&self, g: &mut dyn FnMut(&[f64]) -> Complex64) -> Result<Complex64>;

    /// Log of the per-mode amplification sup_{m >= from}
    /// e^{-t λ_m / 2} · sup_x |ψ_m(exp_x iY)| at |Y| = y_norm, used to
    /// bound truncation tails of analytically continued heat images.
    fn tail_log_amplification(&self, t: f64, y_norm: f64, from: usize) -> Result<f64>;

    /// Index of the mode whose restriction to the base is the complex
    /// conjugate of ψ_n, when the basis is closed under conjugation.
    fn conjugate_mode(&self, n: usize) -> Option<usize>;
}

pub(crate) fn capability_error(model: &dyn SpectralModel, what: &str) -> Error {
    Error::Capability {
        model: model.name().to_string(),
        capability: what.to_string(),
    }
}

pub(crate) fn check_radius(model: &dyn SpectralModel, y: &[f64]) -> Result<f64> {
    let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm >= model.analyticity_radius() {
        return Err(Error::RadiusExceeded {
            requested: norm,
            radius: model.analyticity_radius(),
        });
    }
    Ok(norm)
}

/// A function on the base expressed by its finite eigenbasis coefficient
/// vector. The vector is authoritative: the function *is* the finite
/// sum. `tail_l2_bound` may declare an L² bound for discarded higher
/// modes when the coefficients came from sampling rather than exact
/// construction; continuation evaluations then propagate it into a
/// quantitative tail bound.
#[derive(Clone)]
pub struct SpectralFunction {
    model: ModelRef,
    coeffs: Vec<Complex64>,
    declared_sobolev_order: Option<f64>,
    tail_l2_bound: f64,
}

impl SpectralFunction {
    pub fn new(model: ModelRef, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() > model.mode_count() {
            return Err(Error::InvalidInput(format!(
                "{} coefficients exceed the model's {} modes",
                coeffs.len(),
                model.mode_count()
            )));
        }
        Ok(SpectralFunction {
            model,
            coeffs,
            declared_sobolev_order: None,
            tail_l2_bound: 0.0,
        })
    }

    pub fn zero(model: ModelRef) -> Self {
        SpectralFunction {
            model,
            coeffs: Vec::new(),
            declared_sobolev_order: None,
            tail_l2_bound: 0.0,
        }
    }

    /// The single basis mode ψ_n.
    pub fn single_mode(model: ModelRef, n: usize) -> Result<Self> {
        if n >= model.mode_count() {
            return Err(Error::InvalidInput(format!(
                "mode {n} out of range ({} modes)",
                model.mode_count()
            )));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self::new(model, coeffs)
    }

    /// Random function with `active` nonzero coefficients drawn among
    /// the first `max_index` modes. Deterministic for a fixed RNG state.
    pub fn random(
        model: ModelRef,
        active: usize,
        max_index: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self> {
        use rand::Rng;
        let max_index = max_index.min(model.mode_count());
        if active == 0 || active > max_index {
            return Err(Error::InvalidInput(format!(
                "cannot choose {active} modes among {max_index}"
            )));
        }
        let mut indices: Vec<usize> = (0..max_index).collect();
        // Partial Fisher-Yates: the first `active` entries are the draw.
        for i in 0..active {
            let j = rng.gen_range(i..max_index);
            indices.swap(i, j);
        }
        let mut chosen = indices[..active].to_vec();
        chosen.sort_unstable();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); chosen[active - 1] + 1];
        for &n in &chosen {
            let re = rng.gen_range(-1.0..1.0);
            let im = rng.gen_range(-1.0..1.0);
            coeffs[n] = Complex64::new(re, im);
        }
        Self::new(model, coeffs)
    }

    pub fn model(&self) -> &ModelRef {
        &self.model
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| *a == Complex64::new(0.0, 0.0))
    }

    /// Declared Sobolev order l (largest power of the Laplacian whose
    /// domain contains the function). Finite coefficient vectors lie in
    /// every domain, so `None` reads as "unrestricted"; a declared value
    /// drives the pointwise-inversion gate diagnostics.
    pub fn declared_sobolev_order(&self) -> Option<f64> {
        self.declared_sobolev_order
    }

    pub fn with_declared_sobolev_order(mut self, l: f64) -> Self {
        self.declared_sobolev_order = Some(l);
        self
    }

    pub fn tail_l2_bound(&self) -> f64 {
        self.tail_l2_bound
    }

    pub fn with_tail_l2_bound(mut self, bound: f64) -> Self {
        self.tail_l2_bound = bound;
        self
    }

    /// New function with coefficients `f(n, λ_n, a_n)`, same model.
    pub fn map_coefficients<F: Fn(usize, f64, Complex64) -> Complex64>(
        &self,
        f: F,
    ) -> SpectralFunction {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &a)| f(n, self.model.eigenvalue(n), a))
            .collect();
        SpectralFunction {
            model: Arc::clone(&self.model),
            coeffs,
            declared_sobolev_order: self.declared_sobolev_order,
            tail_l2_bound: self.tail_l2_bound,
        }
    }

    /// Σ a_n ψ_n(x).
    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, &a) in self.coeffs.iter().enumerate() {
            if a != Complex64::new(0.0, 0.0) {
                acc += a * self.model.eigenfunction(n, x)?;
            }
        }
        Ok(acc)
    }

    /// The function whose holomorphic extension satisfies
    /// `F̃(x, Y) = conj(F(x, -Y))`: conjugated coefficients transported
    /// to the conjugate modes (the map (x, Y) -> (x, -Y) is
    /// antiholomorphic).
    pub fn conjugate_reflection(&self) -> Result<SpectralFunction> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len()];
        let mut max_needed = 0usize;
        let mut entries = Vec::new();
        for (n, &a) in self.coeffs.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let m = self.model.conjugate_mode(n).ok_or_else(|| {
                capability_error(self.model.as_ref(), "a conjugation-closed basis")
            })?;
            max_needed = max_needed.max(m);
            entries.push((m, a.conj()));
        }
        if max_needed >= coeffs.len() {
            coeffs.resize(max_needed + 1, Complex64::new(0.0, 0.0));
        }
        for (m, a) in entries {
            coeffs[m] += a;
        }
        SpectralFunction::new(Arc::clone(&self.model), coeffs)
    }
}

impl std::fmt::Debug for SpectralFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralFunction")
            .field("model", &self.model.name())
            .field("modes", &self.coeffs.len())
            .field("norm", &self.norm())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::mc::seeded_rng;

    fn orthonormality_defect(model: &dyn SpectralModel, modes: usize) -> f64 {
        let mut worst = 0.0f64;
        for n in 0..modes {
            for m in 0..modes {
                let inner = model
                    .integrate(&mut |x| {
                        let a = model.eigenfunction(n, x).unwrap();
                        let b = model.eigenfunction(m, x).unwrap();
                        a * b.conj()
                    })
                    .unwrap();
                let expect = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((inner - expect).norm());
            }
        }
        worst
    }

    #[test]
    fn circle_orthonormality_on_a_64_point_grid() {
        let model = CircleModel::new(11).with_grid_points(64);
        assert!(orthonormality_defect(&model, 11) < 1e-14);
    }

    #[test]
    fn torus_orthonormality_at_shipped_resolution() {
        let model = TorusModel::new(2, 3);
        assert!(orthonormality_defect(&model, 20) < 1e-12);
    }

    #[test]
    fn all_models_start_at_zero_with_nondecreasing_spectrum() {
        let models: Vec<ModelRef> = vec![
            Arc::new(CircleModel::new(64)),
            Arc::new(TorusModel::new(2, 5)),
            Arc::new(SyntheticModel::new(3, 1.0, 1.0, 500, vec![0.5], 7).unwrap()),
        ];
        for model in models {
            assert_eq!(model.eigenvalue(0), 0.0);
            let mut prev = 0.0;
            for n in 0..model.mode_count() {
                let l = model.eigenvalue(n);
                assert!(l >= prev - 1e-14, "{}: λ_{n} decreased", model.name());
                prev = l;
            }
            // ψ_0 is the unit constant where evaluation exists.
            if model.has_point_evaluation() {
                let x = vec![0.3; model.dim()];
                let v = model.eigenfunction(0, &x).unwrap();
                assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn complexified_evaluation_restricts_to_real() {
        let models: Vec<ModelRef> = vec![
            Arc::new(CircleModel::new(32)),
            Arc::new(TorusModel::new(2, 4)),
        ];
        for model in models {
            let x = vec![0.17; model.dim()];
            let zero_y = vec![0.0; model.dim()];
            for n in 0..12 {
                let real = model.eigenfunction(n, &x).unwrap();
                let cont = model.eigenfunction_complex(n, &x, &zero_y).unwrap();
                assert_eq!(real, cont);
            }
        }
    }

    #[test]
    fn antiholomorphic_reflection_identity() {
        // conj(F(exp_x iY)) equals the conjugated-coefficient function
        // evaluated at (x, -Y).
        let mut rng = seeded_rng(5);
        let models: Vec<ModelRef> = vec![
            Arc::new(CircleModel::new(16)),
            Arc::new(TorusModel::new(2, 3)),
        ];
        for model in models {
            let f = SpectralFunction::random(Arc::clone(&model), 5, 12, &mut rng).unwrap();
            let reflected = f.conjugate_reflection().unwrap();
            let x = vec![0.31; model.dim()];
            let y: Vec<f64> = (0..model.dim()).map(|i| 0.1 + 0.05 * i as f64).collect();
            let neg_y: Vec<f64> = y.iter().map(|v| -v).collect();
            let mut direct = Complex64::new(0.0, 0.0);
            for (n, &a) in f.coefficients().iter().enumerate() {
                direct += a * model.eigenfunction_complex(n, &x, &y).unwrap();
            }
            let mut mirrored = Complex64::new(0.0, 0.0);
            for (n, &a) in reflected.coefficients().iter().enumerate() {
                mirrored += a * model.eigenfunction_complex(n, &x, &neg_y).unwrap();
            }
            assert!(
                (direct.conj() - mirrored).norm() < 1e-12,
                "{}: {direct} vs {mirrored}",
                model.name()
            );
        }
    }

    #[test]
    fn random_functions_are_deterministic_per_seed() {
        let model: ModelRef = Arc::new(CircleModel::new(32));
        let draw = |seed: u64| {
            let mut rng = seeded_rng(seed);
            SpectralFunction::random(Arc::clone(&model), 8, 20, &mut rng)
                .unwrap()
                .coefficients()
                .to_vec()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }

    #[test]
    fn coefficient_vector_must_fit_the_model() {
        let model: ModelRef = Arc::new(CircleModel::new(4));
        let too_long = vec![Complex64::new(1.0, 0.0); 5];
        assert!(SpectralFunction::new(Arc::clone(&model), too_long).is_err());
        assert!(SpectralFunction::single_mode(model, 4).is_err());
    }
}
