//! The heat semigroup and everything built on top of it: analytic
//! continuation of heat images, partial and global inversion, isometry
//! functionals, surjectivity reconstruction, and two standalone
//! identity checks. Wherever the model supplies eigenfunctions the
//! geometric-integral path and the spectral-multiplier path are both
//! available and cross-checked.

mod identities;
mod inversion;
mod isometry;

pub use identities::{
    holo_change_check_circle, lemma5_check, HoloChangeCheck, IdentityCheck, RadialProfile,
};
pub use inversion::{
    global_inversion_l2, global_inversion_pointwise, partial_inversion_geometric,
    partial_inversion_spectral, uniform_probes, L2InversionReport, PointwiseInversionReport,
    SobolevGateReport,
};
pub use isometry::{isometry_curve, isometry_geometric, isometry_limit_estimate, isometry_spectral};

use crate::error::{Error, Result};
use crate::models::{ModelRef, SpectralFunction};
use crate::multiplier;
use num_complex::Complex64;

/// Heat time.
#[derive(Debug, Clone, Copy)]
pub struct HeatParams {
    pub t: f64,
}

impl HeatParams {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::InvalidInput(format!("heat time must be positive, got {t}")));
        }
        Ok(HeatParams { t })
    }
}

/// Forward heat operator: a_n -> e^{-t λ_n / 2} a_n. Never increases
/// the norm.
pub fn heat(f: &SpectralFunction, p: HeatParams) -> SpectralFunction {
    f.map_coefficients(|_, lambda, a| a * (-p.t * lambda / 2.0).exp())
}

/// Value of an analytically continued truncated series, with the bound
/// on what the discarded tail could contribute at this point.
#[derive(Debug, Clone, Copy)]
pub struct ContinuationValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// Evaluate the holomorphic extension of the heat image,
/// `F(exp_x iY) = Σ e^{-t λ_n/2} a_n ψ_n(exp_x iY)`.
///
/// The truncated sum is exact when the coefficient vector is exact
/// (`tail_l2_bound = 0`). A declared nonzero tail is amplified by the
/// leading-mode continuation growth `e^{-tλ/2 + growth(|Y|)}`; if that
/// bound exceeds 1e-8 of the partial sum, the evaluation refuses rather
/// than return a value it cannot back.
pub fn sb_eval(
    f: &SpectralFunction,
    p: HeatParams,
    x: &[f64],
    y: &[f64],
) -> Result<ContinuationValue> {
    let model = f.model();
    if !model.has_complex_extension() {
        return Err(crate::models::capability_error(
            model.as_ref(),
            "complexified eigenfunction evaluation",
        ));
    }
    crate::models::check_radius(model.as_ref(), y)?;
    let value = continuation_sum(f, p, x, y)?;
    let tail_bound = if f.tail_l2_bound() > 0.0 {
        let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let log_amp = model.tail_log_amplification(p.t, y_norm, f.coefficients().len())?;
        f.tail_l2_bound() * log_amp.exp()
    } else {
        0.0
    };
    if tail_bound > 1e-8 * value.norm() {
        return Err(Error::TailBound {
            bound: tail_bound,
            partial: value.norm(),
        });
    }
    Ok(ContinuationValue { value, tail_bound })
}

/// The bare continued sum, shared by [`sb_eval`] and the geometric
/// integrators (which run their own aggregate tail check upfront).
pub(crate) fn continuation_sum(
    f: &SpectralFunction,
    p: HeatParams,
    x: &[f64],
    y: &[f64],
) -> Result<Complex64> {
    let model = f.model();
    let mut value = Complex64::new(0.0, 0.0);
    for (n, &a) in f.coefficients().iter().enumerate() {
        if a != Complex64::new(0.0, 0.0) {
            let damped = a * (-p.t * model.eigenvalue(n) / 2.0).exp();
            value += damped * model.eigenfunction_complex(n, x, y)?;
        }
    }
    Ok(value)
}

/// Validate everything a geometric ball integral of the continuation
/// needs: a holomorphic extension, a radius inside it, and (when the
/// coefficient vector declares a discarded tail) a tail bound that stays
/// below 1e-8 of the function norm at the worst point of the ball.
/// After this passes, per-point continuation sums cannot fail.
pub(crate) fn geometric_readiness(f: &SpectralFunction, p: HeatParams, r: f64) -> Result<()> {
    let model = f.model();
    if !model.has_complex_extension() {
        return Err(crate::models::capability_error(
            model.as_ref(),
            "complexified eigenfunction evaluation",
        ));
    }
    if r >= model.analyticity_radius() {
        return Err(Error::RadiusExceeded {
            requested: r,
            radius: model.analyticity_radius(),
        });
    }
    if f.tail_l2_bound() > 0.0 {
        let log_amp = model.tail_log_amplification(p.t, r, f.coefficients().len())?;
        let bound = f.tail_l2_bound() * log_amp.exp();
        if bound > 1e-8 * f.norm() {
            return Err(Error::TailBound {
                bound,
                partial: f.norm(),
            });
        }
    }
    Ok(())
}

/// The stated Sobolev gate for uniform pointwise inversion:
/// l > (3d² - d)/4. Sufficient for a positive gate exponent in every
/// dimension; necessary only at d = 1 (the exponent alone changes sign
/// at l = (3d - 1)/4, a factor d lower).
pub fn sobolev_gate_threshold(dim: usize) -> f64 {
    let d = dim as f64;
    (3.0 * d * d - d) / 4.0
}

/// Gate exponent ε = 2l/d - (d-1)/(2d) - 1: the uniform-convergence
/// majorant series is Σ n^{-(1+ε)}, summable exactly when ε > 0.
pub fn sobolev_gate_exponent(l: f64, dim: usize) -> f64 {
    let d = dim as f64;
    2.0 * l / d - (d - 1.0) / (2.0 * d) - 1.0
}

/// Result of reading a holomorphic-side coefficient vector back through
/// the heat operator.
#[derive(Debug, Clone)]
pub struct SurjectivityOutcome {
    /// f = Σ a_n e^{t λ_n / 2} ψ_n, the unique preimage.
    pub reconstructed: SpectralFunction,
    /// Σ |a_n|² e^{t λ_n}, the predicted limit of the isometry
    /// functional of the reconstructed function.
    pub predicted_limit: f64,
}

/// Given the eigenbasis coefficients of a holomorphic-side function F,
/// produce the f with `heat(f) = F` exactly, plus the predicted
/// isometry limit (finite for every finite vector; reported so the
/// admissibility check is visible).
pub fn surjectivity_reconstruct(
    model: ModelRef,
    f_coeffs: &[Complex64],
    p: HeatParams,
) -> Result<SurjectivityOutcome> {
    let capital = SpectralFunction::new(model, f_coeffs.to_vec())?;
    let mut predicted_limit = 0.0;
    for (n, &a) in capital.coefficients().iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let lambda = capital.model().eigenvalue(n);
        if p.t * lambda > 1400.0 {
            return Err(Error::InvalidInput(format!(
                "e^{{t λ}} overflows at mode {n} (t λ = {})",
                p.t * lambda
            )));
        }
        predicted_limit += a.norm_sqr() * (p.t * lambda).exp();
    }
    let reconstructed =
        capital.map_coefficients(|_, lambda, a| a * (p.t * lambda / 2.0).exp());
    Ok(SurjectivityOutcome {
        reconstructed,
        predicted_limit,
    })
}

/// Largest eigenvalue carried by a nonzero coefficient (0 for the zero
/// function): the scale that fixes how far "R -> infinity" must reach.
pub(crate) fn max_active_eigenvalue(f: &SpectralFunction) -> f64 {
    f.coefficients()
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != Complex64::new(0.0, 0.0))
        .map(|(n, _)| f.model().eigenvalue(n))
        .fold(0.0, f64::max)
}

/// Stand-in for the infinite-radius limit, adapted to the function's
/// active spectrum.
pub fn r_infinity_for(f: &SpectralFunction, p: HeatParams) -> f64 {
    multiplier::r_infinity(
        p.t,
        f.model().dim(),
        max_active_eigenvalue(f),
        f.model().rho_sq(),
    )
}

/// The shipped default radius grid: geometric from 0.05 to the
/// function's infinite-radius stand-in, 40 points.
pub fn default_r_grid(f: &SpectralFunction, p: HeatParams) -> Vec<f64> {
    let hi = r_infinity_for(f, p).max(0.1);
    crate::numerics::geometric_grid(0.05, hi, 40)
}
