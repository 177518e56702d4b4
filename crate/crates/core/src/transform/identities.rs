//! Standalone dual-path identity checks.
//!
//! * The Euclidean ball identity: for ΔΨ = σΨ on a ball and any bounded
//!   measurable rotationally invariant β,
//!   `∫_{|Y|<=R} Ψ β dY = Ψ(0) ∫_{|Y|<=R} e^{√σ y₁} β dY`.
//!   Left side by direct d-dimensional quadrature or Monte Carlo, right
//!   side by the same one-dimensional reduction machinery the
//!   multipliers use. Either square root of σ works (the right side is
//!   even in it).
//!
//! * The circle holomorphic change of variable: for trig polynomials
//!   F₁, F₂ and bounded even α,
//!   `∫_x conj(F₁(x)) ∫_{-2R}^{2R} F₂(x+iy) α(y) dy dx =
//!    ∫_x ∫_{-2R}^{2R} conj(F₁(x+iy/2)) F₂(x+iy/2) α(y) dy dx`,
//!   the shift x -> x - iy/2 made legal by holomorphy. Both sides by
//!   independent product quadrature.

use crate::error::{Error, Result};
use crate::models::{CircleModel, EuclideanEigenfunction};
use crate::numerics::mc::{ball_integral, seeded_rng};
use crate::numerics::quad::{integrate_complex, integrate_with_breakpoints, QuadratureSettings};
use crate::numerics::special::unit_sphere_area;
use num_complex::Complex64;

/// A named radial (hence even) profile.
pub struct RadialProfile {
    name: String,
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl RadialProfile {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RadialProfile {
            name: name.into(),
            f: Box::new(f),
        }
    }

    /// The heat-kernel Gaussian e^{-r²/2t}/(2πt)^{d/2}.
    pub fn heat_gaussian(t: f64, dim: usize) -> Self {
        let norm = (2.0 * std::f64::consts::PI * t).powi(dim as i32).sqrt();
        RadialProfile::new(format!("gaussian(t={t},d={dim})"), move |r| {
            (-r * r / (2.0 * t)).exp() / norm
        })
    }

    /// Constant 1 (the ball indicator relative to the integration domain).
    pub fn indicator() -> Self {
        RadialProfile::new("indicator", |_| 1.0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RadialProfile({})", self.name)
    }
}

/// Two independently computed sides of an identity.
#[derive(Debug, Clone, Copy)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub difference: f64,
    /// Standard error of the Monte Carlo side, when one was used.
    pub mc_std_error: Option<f64>,
}

/// Check the ball identity for the given eigenfunction and radial
/// profile over the ball of radius `r`. Dimensions 1 and 2 use
/// deterministic quadrature on the left side; higher dimensions draw
/// `budget` Monte Carlo samples.
pub fn lemma5_check(
    psi: &EuclideanEigenfunction,
    beta_profile: &RadialProfile,
    r: f64,
    budget: usize,
    seed: u64,
    settings: &QuadratureSettings,
) -> Result<IdentityCheck> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    let d = psi.dim();
    let (lhs, mc_std_error) = match d {
        1 => {
            let v = integrate_with_breakpoints(
                |y| psi.eval(&[y]) * beta_profile.eval(y.abs()),
                &[-r, 0.0, r],
                settings,
            )?;
            (v.value, None)
        }
        2 => {
            let theta_points = 256;
            let ring = |radius: f64| -> f64 {
                let mut acc = 0.0;
                for i in 0..theta_points {
                    let theta = 2.0 * std::f64::consts::PI * i as f64 / theta_points as f64;
                    acc += psi.eval(&[radius * theta.cos(), radius * theta.sin()]);
                }
                acc * 2.0 * std::f64::consts::PI / theta_points as f64
            };
            let v = integrate_with_breakpoints(
                |radius| radius * beta_profile.eval(radius) * ring(radius),
                &[0.0, 0.5 * r, r],
                settings,
            )?;
            (v.value, None)
        }
        _ => {
            if budget < 1000 {
                return Err(Error::InvalidInput(format!(
                    "Monte Carlo budget {budget} too small (need >= 1000)"
                )));
            }
            let mut rng = seeded_rng(seed);
            let est = ball_integral(d, r, budget, &mut rng, |y| {
                let radius = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                psi.eval(y) * beta_profile.eval(radius)
            });
            (est.value, Some(est.std_error))
        }
    };

    let rhs = psi.at_origin() * tilted_profile_ball_integral(psi.sigma(), beta_profile, r, d, settings)?;
    Ok(IdentityCheck {
        lhs,
        rhs,
        difference: lhs - rhs,
        mc_std_error,
    })
}

/// `∫_{|Y|<=R} e^{√σ y₁} β(|Y|) dY` via the symmetric (cosh/cos) form
/// and reduction of the transverse coordinates to a radial integral.
fn tilted_profile_ball_integral(
    sigma: f64,
    beta_profile: &RadialProfile,
    r: f64,
    d: usize,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let tilt: Box<dyn Fn(f64) -> f64> = if sigma >= 0.0 {
        let c = sigma.sqrt();
        Box::new(move |y: f64| (c * y).cosh())
    } else {
        let w = (-sigma).sqrt();
        Box::new(move |y: f64| (w * y).cos())
    };
    if d == 1 {
        let v = integrate_with_breakpoints(
            |y| tilt(y) * beta_profile.eval(y.abs()),
            &[-r, 0.0, r],
            settings,
        )?;
        return Ok(v.value);
    }
    // Transverse shell: ∫_{|Y'|<=s} β(√(y² + |Y'|²)) dY' in ℝ^{d-1},
    // radially reduced with the unit-sphere area of S^{d-2}.
    let shell_area = unit_sphere_area(d - 1);
    let exponent = (d - 2) as i32;
    let inner_failure = std::cell::RefCell::new(None);
    let inner = |y: f64| -> f64 {
        let s = ((r - y.abs()) * (r + y.abs())).max(0.0).sqrt();
        if s == 0.0 {
            return 0.0;
        }
        let result = integrate_with_breakpoints(
            |u: f64| beta_profile.eval((y * y + u * u).sqrt()) * u.powi(exponent),
            &[0.0, 0.5 * s, s],
            settings,
        );
        match result {
            Ok(v) => shell_area * v.value,
            Err(e) => {
                inner_failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let v = integrate_with_breakpoints(
        |y| tilt(y) * inner(y),
        &[-r, -0.5 * r, 0.0, 0.5 * r, r],
        settings,
    )?;
    if let Some(e) = inner_failure.into_inner() {
        return Err(e);
    }
    Ok(v.value)
}

/// Two sides of the circle change-of-variable identity.
#[derive(Debug, Clone, Copy)]
pub struct HoloChangeCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub difference: f64,
}

/// Check the S¹ holomorphic change of variable for trig polynomials
/// given by circle-ordered coefficient vectors and an even weight
/// profile, over the strip |y| <= 2R.
pub fn holo_change_check_circle(
    f1_coeffs: &[Complex64],
    f2_coeffs: &[Complex64],
    alpha_profile: &RadialProfile,
    r: f64,
    settings: &QuadratureSettings,
) -> Result<HoloChangeCheck> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    let max_freq = |coeffs: &[Complex64]| {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(n, _)| CircleModel::frequency_of(n).unsigned_abs())
            .max()
            .unwrap_or(0)
    };
    let grid = (4 * (max_freq(f1_coeffs) + max_freq(f2_coeffs)) as usize).max(8);
    let eval = |coeffs: &[Complex64], x: f64, y: f64| -> Complex64 {
        let z = Complex64::new(x, y);
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, &c) in coeffs.iter().enumerate() {
            if c != Complex64::new(0.0, 0.0) {
                let k = CircleModel::frequency_of(n) as f64;
                acc += c * (Complex64::i() * 2.0 * std::f64::consts::PI * k * z).exp();
            }
        }
        acc
    };

    // x averages are exact for trig polynomials on a uniform grid.
    let x_average = |g: &dyn Fn(f64) -> Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..grid {
            acc += g(i as f64 / grid as f64);
        }
        acc / grid as f64
    };

    let strip = 2.0 * r;
    let mesh = [-strip, -r, 0.0, r, strip];
    let (lhs, _) = integrate_complex(
        |y| {
            x_average(&|x| eval(f1_coeffs, x, 0.0).conj() * eval(f2_coeffs, x, y))
                * alpha_profile.eval(y.abs())
        },
        &mesh,
        settings,
    )?;
    let (rhs, _) = integrate_complex(
        |y| {
            x_average(&|x| {
                eval(f1_coeffs, x, y / 2.0).conj() * eval(f2_coeffs, x, y / 2.0)
            }) * alpha_profile.eval(y.abs())
        },
        &mesh,
        settings,
    )?;
    Ok(HoloChangeCheck {
        lhs,
        rhs,
        difference: (lhs - rhs).norm(),
    })
}
