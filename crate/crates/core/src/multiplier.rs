//! The spectral multipliers `alpha_{t,R}` and `beta_{t,R}`.
//!
//! Both are Gaussian ball integrals over ℝ^d tilted by
//! `exp(sqrt(lambda - rho²) · y₁)`:
//!
//! ```text
//! alpha_{t,R}(λ) = e^{-tλ/2} e^{t ρ²/2} ∫_{|Y|<=R}  e^{√(λ-ρ²) y₁} e^{-|Y|²/2t} / (2πt)^{d/2} dY
//! beta_{t,R}(λ)  = e^{-tλ/2} e^{t ρ²}   ∫_{|Y|<=2R} e^{√(λ-ρ²) y₁} e^{-|Y|²/4t} / (4πt)^{d/2} dY
//! ```
//!
//! Since the ball is symmetric under `Y -> -Y`, the tilt can be replaced
//! by `cosh(√(λ-ρ²) y₁)`, which is even in the square root: either
//! branch gives the same value, and for `λ < ρ²` (pure imaginary root)
//! it becomes `cos(√(ρ²-λ) y₁)`, making realness structural rather than
//! a numerical cancellation.
//!
//! The d-dimensional integral collapses to one dimension by integrating
//! out the d-1 transverse Gaussian coordinates over their disk section:
//!
//! ```text
//! ∫_{|Y|<=P} cosh(c y₁) e^{-|Y|²/2σ}/(2πσ)^{d/2} dY
//!   = ∫_{-P}^{P} cosh(c y₁) e^{-y₁²/2σ}/√(2πσ) · P_gamma((d-1)/2, (P²-y₁²)/(2σ)) dy₁
//! ```
//!
//! with `P_gamma` the regularized lower incomplete gamma function
//! (`P_gamma(0, x) = 1` covers d = 1).

use crate::error::{Error, Result};
use crate::numerics::quad::{integrate_with_breakpoints, QuadratureSettings};
use crate::numerics::special::gamma_p;
use crate::table::ResultTable;
use num_complex::Complex64;

/// Parameters of a single multiplier evaluation.
#[derive(Debug, Clone, Copy)]
pub struct MultiplierQuery {
    /// Heat time, > 0.
    pub t: f64,
    /// Ball radius, > 0. For `beta` the effective domain is `|Y| <= 2R`.
    pub r: f64,
    /// Laplace eigenvalue (-Δ convention), >= 0.
    pub lambda: f64,
    /// |ρ|² of the geometry, >= 0.
    pub rho_sq: f64,
    /// Manifold dimension, >= 1.
    pub dim: usize,
}

impl MultiplierQuery {
    pub fn new(t: f64, r: f64, lambda: f64, rho_sq: f64, dim: usize) -> Result<Self> {
        let q = MultiplierQuery {
            t,
            r,
            lambda,
            rho_sq,
            dim,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) {
            return Err(Error::InvalidInput(format!("t must be positive, got {}", self.t)));
        }
        if !(self.r > 0.0) {
            return Err(Error::InvalidInput(format!("R must be positive, got {}", self.r)));
        }
        if !(self.lambda >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "lambda must be nonnegative, got {}",
                self.lambda
            )));
        }
        if !(self.rho_sq >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "rho_sq must be nonnegative, got {}",
                self.rho_sq
            )));
        }
        if self.dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        Ok(())
    }
}

/// Radius standing in for "R -> infinity": beyond it the Gaussian tail
/// and the tilt contribute less than ~1e-30 relative. With the tilted
/// integrand peaking at `y* = sqrt(max(lambda - rho², 0)) · t` and
/// standard deviation `sqrt(t)` per coordinate, twelve radial widths
/// past the peak bound the missing mass by
/// `exp(-144/2) < 1e-31` of the total.
pub fn r_infinity(t: f64, dim: usize, lambda: f64, rho_sq: f64) -> f64 {
    12.0 * (t * dim as f64).sqrt() + 12.0 * (t * (lambda - rho_sq).max(0.0)).sqrt() * t
}

/// `∫_{|Y| <= p} cosh(c y₁) e^{-|Y|²/2σ} / (2πσ)^{d/2} dY`, reduced to a
/// one-dimensional adaptive quadrature. `c` must be real or purely
/// imaginary (the square `c²` is what enters; `cosh` is even, so the
/// two square-root branches produce bitwise-identical inputs here).
pub fn reduce_ball_integral(
    c: Complex64,
    sigma: f64,
    p: f64,
    dim: usize,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if !(sigma > 0.0) || !(p > 0.0) || dim == 0 {
        return Err(Error::InvalidInput(format!(
            "reduce_ball_integral requires sigma > 0, P > 0, d >= 1 (got {sigma}, {p}, {dim})"
        )));
    }
    let c_sq = if c.im == 0.0 {
        c.re * c.re
    } else if c.re == 0.0 {
        -(c.im * c.im)
    } else {
        return Err(Error::InvalidInput(
            "c must be real or purely imaginary for a real ball integral".into(),
        ));
    };
    tilted_ball_mass(c_sq, sigma, p, dim, 0.0, settings)
}

/// `alpha_{t,R}(lambda)`.
///
/// Evaluated with the scale factor `e^{-tλ/2} e^{tρ²/2}` folded into the
/// integrand exponent, so the computation never overflows: for
/// `λ >= ρ²` the combined exponent is `-(y - ct)²/2t <= 0` with
/// `c = sqrt(λ-ρ²)`, which also yields the operational bound
/// `alpha_{t,R}(λ) <= (2R/√(2πt)) · exp(-(max(0, ct - R))²/(2t))`.
pub fn alpha(q: &MultiplierQuery, settings: &QuadratureSettings) -> Result<f64> {
    q.validate()?;
    let c_sq = q.lambda - q.rho_sq;
    let log_scale = -q.t * q.lambda / 2.0 + q.t * q.rho_sq / 2.0;
    tilted_ball_mass(c_sq, q.t, q.r, q.dim, log_scale, settings)
}

/// `beta_{t,R}(lambda)`: Gaussian time `2t`, radius `2R`, scale
/// `e^{-tλ/2} e^{tρ²}`. Satisfies
/// `beta_{t,R}(λ) = e^{tλ/2} · alpha_{2t,2R}(λ)`.
pub fn beta(q: &MultiplierQuery, settings: &QuadratureSettings) -> Result<f64> {
    q.validate()?;
    let c_sq = q.lambda - q.rho_sq;
    let log_scale = -q.t * q.lambda / 2.0 + q.t * q.rho_sq;
    tilted_ball_mass(c_sq, 2.0 * q.t, 2.0 * q.r, q.dim, log_scale, settings)
}

/// Shared reduction core: computes
/// `e^{log_scale} ∫_{|Y|<=p} cosh_or_cos(√|c²| y₁) e^{-|Y|²/2σ}/(2πσ)^{d/2} dY`
/// with `log_scale` folded into the pointwise exponent for stability.
fn tilted_ball_mass(
    c_sq: f64,
    sigma: f64,
    p: f64,
    dim: usize,
    log_scale: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let gauss_norm = (2.0 * std::f64::consts::PI * sigma).sqrt();
    let a = (dim as f64 - 1.0) / 2.0;
    let transverse = move |y: f64| gamma_p(a, ((p - y) * (p + y)).max(0.0) / (2.0 * sigma));
    let integrand: Box<dyn Fn(f64) -> f64> = if c_sq >= 0.0 {
        let c = c_sq.sqrt();
        Box::new(move |y: f64| {
            let base = log_scale - y * y / (2.0 * sigma);
            0.5 * ((base + c * y).exp() + (base - c * y).exp()) / gauss_norm * transverse(y)
        })
    } else {
        let w = (-c_sq).sqrt();
        Box::new(move |y: f64| {
            (log_scale - y * y / (2.0 * sigma)).exp() * (w * y).cos() / gauss_norm * transverse(y)
        })
    };
    let mesh = initial_mesh(c_sq, sigma, p);
    let result = integrate_with_breakpoints(integrand, &mesh, settings)?;
    Ok(result.value)
}

/// Initial mesh: panels of width ~sqrt(sigma) around the tilt centers
/// `±c·σ` and the origin, so the refinement never misses the Gaussian
/// mass even when `p` is a large stand-in for infinity.
fn initial_mesh(c_sq: f64, sigma: f64, p: f64) -> Vec<f64> {
    let width = sigma.sqrt();
    let center = if c_sq > 0.0 { (c_sq.sqrt() * sigma).min(p) } else { 0.0 };
    let mut mesh = vec![-p, p];
    for m in [-center, 0.0, center] {
        for j in -6..=6 {
            let x = m + width * j as f64;
            if x > -p && x < p {
                mesh.push(x);
            }
        }
    }
    mesh.sort_by(f64::total_cmp);
    mesh.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * width.max(1e-300));
    mesh
}

fn validated_grid(r_grid: &[f64]) -> Result<()> {
    if r_grid.is_empty() {
        return Err(Error::InvalidInput("R grid must be nonempty".into()));
    }
    if r_grid[0] <= 0.0 || r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "R grid must be strictly increasing and positive".into(),
        ));
    }
    Ok(())
}

/// Sample `alpha_{t,R}(lambda)` over an increasing radius grid.
pub fn alpha_curve(
    t: f64,
    lambda: f64,
    rho_sq: f64,
    dim: usize,
    r_grid: &[f64],
    settings: &QuadratureSettings,
) -> Result<ResultTable> {
    multiplier_curve(MultiplierKind::Alpha, t, lambda, rho_sq, dim, r_grid, settings)
}

/// Sample `beta_{t,R}(lambda)` over an increasing radius grid.
pub fn beta_curve(
    t: f64,
    lambda: f64,
    rho_sq: f64,
    dim: usize,
    r_grid: &[f64],
    settings: &QuadratureSettings,
) -> Result<ResultTable> {
    multiplier_curve(MultiplierKind::Beta, t, lambda, rho_sq, dim, r_grid, settings)
}

#[derive(Debug, Clone, Copy)]
enum MultiplierKind {
    Alpha,
    Beta,
}

fn multiplier_curve(
    kind: MultiplierKind,
    t: f64,
    lambda: f64,
    rho_sq: f64,
    dim: usize,
    r_grid: &[f64],
    settings: &QuadratureSettings,
) -> Result<ResultTable> {
    validated_grid(r_grid)?;
    let label = match kind {
        MultiplierKind::Alpha => "alpha",
        MultiplierKind::Beta => "beta",
    };
    let mut table = ResultTable::new(format!("{label}-curve"), vec!["R", label]);
    let values: Vec<Result<f64>> = crate::numerics::parallel_map(r_grid, |&r| {
        let q = MultiplierQuery::new(t, r, lambda, rho_sq, dim)?;
        match kind {
            MultiplierKind::Alpha => alpha(&q, settings),
            MultiplierKind::Beta => beta(&q, settings),
        }
    });
    for (&r, value) in r_grid.iter().zip(values) {
        table.push_row(vec![r, value?]);
    }
    table.tag("kind", label);
    table.tag("t", t);
    table.tag("lambda", lambda);
    table.tag("rho_sq", rho_sq);
    table.tag("d", dim);
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::mc::{ball_integral, seeded_rng};
    use crate::numerics::special::erf;

    fn settings() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    #[test]
    fn alpha_is_erf_at_the_spectral_gap_in_1d() {
        // λ = ρ², d = 1: the tilt vanishes and alpha is the plain
        // Gaussian mass erf(R / sqrt(2t)).
        for (t, r, rho_sq) in [(0.25, 0.8, 1.0), (1.0, 1.5, 4.0), (0.1, 0.3, 0.0)] {
            let q = MultiplierQuery::new(t, r, rho_sq, rho_sq, 1).unwrap();
            let got = alpha(&q, &settings()).unwrap();
            let expect = erf(r / (2.0 * t).sqrt());
            assert!((got - expect).abs() < 1e-12, "t={t}, R={r}");
        }
    }

    #[test]
    fn beta_is_scaled_erf_at_the_spectral_gap_in_1d() {
        for (t, r, rho_sq) in [(0.25, 0.8, 1.0), (0.5, 1.2, 2.0)] {
            let q = MultiplierQuery::new(t, r, rho_sq, rho_sq, 1).unwrap();
            let got = beta(&q, &settings()).unwrap();
            let expect = (t * rho_sq / 2.0).exp() * erf(r / t.sqrt());
            assert!((got - expect).abs() < 1e-12 * expect, "t={t}, R={r}");
        }
    }

    #[test]
    fn alpha_limit_is_one() {
        for (t, d, rho_sq, lambda) in [
            (0.5, 3, 1.0, 2.0),
            (0.1, 1, 0.0, 10.0),
            (1.0, 6, 4.0, 4.5),
            (0.5, 3, 1.0, 0.25),
        ] {
            let r = r_infinity(t, d, lambda, rho_sq);
            let q = MultiplierQuery::new(t, r, lambda, rho_sq, d).unwrap();
            let got = alpha(&q, &settings()).unwrap();
            assert!((got - 1.0).abs() < 1e-8, "limit miss: {got} at t={t}, d={d}");
        }
    }

    #[test]
    fn beta_limit_is_heat_gain() {
        for (t, d, rho_sq, lambda) in [(0.5, 3, 1.0, 2.0), (0.25, 2, 1.0, 6.0)] {
            let r = r_infinity(t, d, lambda, rho_sq);
            let q = MultiplierQuery::new(t, r, lambda, rho_sq, d).unwrap();
            let got = beta(&q, &settings()).unwrap();
            let expect = (t * lambda / 2.0).exp();
            assert!(
                ((got - expect) / expect).abs() < 1e-6,
                "beta limit miss: {got} vs {expect}"
            );
        }
    }

    // Frozen Monte Carlo oracle (1e8 uniform samples over the 3-ball,
    // computed ahead of this implementation): alpha at
    // t = 0.5, λ = 2, ρ² = 1, d = 3, R = 1.
    const V1_MC: f64 = 0.363_346_033_3;
    const V1_SE: f64 = 1.679e-5;

    #[test]
    fn alpha_matches_frozen_ball_oracle() {
        let q = MultiplierQuery::new(0.5, 1.0, 2.0, 1.0, 3).unwrap();
        let got = alpha(&q, &settings()).unwrap();
        assert!(
            (got - V1_MC).abs() <= 4.0 * V1_SE,
            "alpha {got} vs frozen {V1_MC} ± {V1_SE}"
        );
    }

    // Frozen Monte Carlo oracle (1e8 uniform samples over the 4-ball):
    // reduce_ball_integral at c = 2, σ = 0.5, P = 1.5, d = 4.
    const V2_MC: f64 = 1.157_580_779_5;
    const V2_SE: f64 = 6.858e-5;

    #[test]
    fn reduction_matches_frozen_ball_oracle() {
        let got = reduce_ball_integral(
            Complex64::new(2.0, 0.0),
            0.5,
            1.5,
            4,
            &settings(),
        )
        .unwrap();
        assert!(
            (got - V2_MC).abs() <= 4.0 * V2_SE,
            "reduction {got} vs frozen {V2_MC} ± {V2_SE}"
        );
    }

    #[test]
    fn untilted_reduction_is_chi_square_mass() {
        // c = 0: the ball mass of the Gaussian is P_gamma(d/2, P²/2σ),
        // an independent closed form for the radial bookkeeping.
        for d in 1..=5 {
            for (sigma, p) in [(0.5, 1.0), (1.0, 2.5), (0.2, 0.6)] {
                let got =
                    reduce_ball_integral(Complex64::new(0.0, 0.0), sigma, p, d, &settings())
                        .unwrap();
                let expect = gamma_p(d as f64 / 2.0, p * p / (2.0 * sigma));
                assert!(
                    (got - expect).abs() < 1e-11,
                    "d={d}, sigma={sigma}, P={p}: {got} vs {expect}"
                );
            }
        }
        // d = 1 special form: erf.
        let got = reduce_ball_integral(Complex64::new(0.0, 0.0), 0.5, 1.0, 1, &settings())
            .unwrap();
        assert!((got - erf(1.0)).abs() < 1e-12);
    }

    #[test]
    fn reduction_agrees_with_direct_monte_carlo() {
        // 3x3 grid of (c, P) per dimension, 4 standard errors.
        for d in 1..=4 {
            for &c in &[0.5, 1.5, 3.0] {
                for &p in &[0.5, 1.0, 1.8] {
                    let sigma = 0.5;
                    let exact = reduce_ball_integral(
                        Complex64::new(c, 0.0),
                        sigma,
                        p,
                        d,
                        &settings(),
                    )
                    .unwrap();
                    let mut rng = seeded_rng(1000 + d as u64 + (c * 10.0) as u64);
                    let norm = (2.0 * std::f64::consts::PI * sigma).powi(d as i32).sqrt();
                    let mc = ball_integral(d, p, 120_000, &mut rng, |y| {
                        (c * y[0]).cosh()
                            * (-y.iter().map(|v| v * v).sum::<f64>() / (2.0 * sigma)).exp()
                            / norm
                    });
                    assert!(
                        (exact - mc.value).abs() <= 4.0 * mc.std_error,
                        "d={d}, c={c}, P={p}: {exact} vs {} ± {}",
                        mc.value,
                        mc.std_error
                    );
                }
            }
        }
    }

    #[test]
    fn branch_independence_is_bitwise() {
        for (re, im) in [(1.7, 0.0), (0.0, 2.3)] {
            let plus = reduce_ball_integral(Complex64::new(re, im), 0.7, 1.1, 3, &settings())
                .unwrap();
            let minus =
                reduce_ball_integral(Complex64::new(-re, -im), 0.7, 1.1, 3, &settings())
                    .unwrap();
            assert_eq!(plus.to_bits(), minus.to_bits());
        }
    }

    #[test]
    fn mixed_complex_c_is_rejected() {
        let err =
            reduce_ball_integral(Complex64::new(1.0, 1.0), 0.5, 1.0, 2, &settings())
                .unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn low_spectrum_cos_branch_agrees_with_complex_quadrature() {
        // For λ < ρ² the implementation takes the cos form; check it
        // against a literal complex-arithmetic evaluation of the
        // reduced integrand with c = i·sqrt(ρ²-λ).
        use crate::numerics::quad::integrate_complex;
        let (t, r, rho_sq, d) = (0.4, 0.9, 1.0, 3usize);
        for &lambda in &[0.0, 0.3, 0.7, 0.99] {
            let q = MultiplierQuery::new(t, r, lambda, rho_sq, d).unwrap();
            let got = alpha(&q, &settings()).unwrap();
            assert!(got.is_finite());

            let w = (rho_sq - lambda).sqrt();
            let scale = (-t * lambda / 2.0 + t * rho_sq / 2.0).exp();
            let gauss_norm = (2.0 * std::f64::consts::PI * t).sqrt();
            let a = (d as f64 - 1.0) / 2.0;
            let (complex_val, _) = integrate_complex(
                |y| {
                    let tilt = (Complex64::new(0.0, w) * y).exp();
                    tilt * (-y * y / (2.0 * t)).exp() / gauss_norm
                        * gamma_p(a, (r * r - y * y).max(0.0) / (2.0 * t))
                },
                &[-r, 0.0, r],
                &settings(),
            )
            .unwrap();
            let reference = scale * complex_val;
            assert!(reference.im.abs() < 1e-12 * reference.re.abs().max(1e-12));
            assert!(
                (got - reference.re).abs() < 1e-10 * reference.re.abs().max(1.0),
                "λ={lambda}: {got} vs {}",
                reference.re
            );
        }
    }

    #[test]
    fn beta_alpha_identity_on_a_grid() {
        let (rho_sq, d) = (1.0, 3usize);
        for &t in &[0.2, 0.6, 1.1] {
            for &r in &[0.3, 0.8, 1.6] {
                for &lambda in &[0.0, 0.5, 1.0, 3.0, 9.0] {
                    let qb = MultiplierQuery::new(t, r, lambda, rho_sq, d).unwrap();
                    let qa = MultiplierQuery::new(2.0 * t, 2.0 * r, lambda, rho_sq, d).unwrap();
                    let b = beta(&qb, &settings()).unwrap();
                    let a = (t * lambda / 2.0).exp() * alpha(&qa, &settings()).unwrap();
                    assert!(
                        (b - a).abs() <= 1e-9 * a.abs().max(1e-12),
                        "t={t}, R={r}, λ={lambda}: {b} vs {a}"
                    );
                }
            }
        }
    }

    #[test]
    fn alpha_monotone_and_bounded_above_the_gap() {
        let grid = crate::numerics::geometric_grid(0.05, 6.0, 24);
        for &lambda in &[1.0, 2.0, 11.0] {
            let table = alpha_curve(0.5, lambda, 1.0, 3, &grid, &settings()).unwrap();
            let values = table.column("alpha").unwrap();
            for w in values.windows(2) {
                assert!(w[1] >= w[0] - 1e-12, "not monotone: {w:?}");
            }
            for v in &values {
                assert!(*v > 0.0 && *v <= 1.0 + 1e-12, "out of (0,1]: {v}");
            }
        }
    }

    #[test]
    fn alpha_curve_low_spectrum_is_finite_and_real() {
        let grid = crate::numerics::geometric_grid(0.1, 8.0, 12);
        let table = alpha_curve(0.5, 0.0, 1.0, 3, &grid, &settings()).unwrap();
        for v in table.column("alpha").unwrap() {
            assert!(v.is_finite());
        }
    }

    #[test]
    fn single_point_grid_gives_single_row() {
        let table = alpha_curve(0.5, 2.0, 1.0, 3, &[1.0], &settings()).unwrap();
        assert_eq!(table.rows.len(), 1);
        let bad = alpha_curve(0.5, 2.0, 1.0, 3, &[1.0, 0.5], &settings());
        assert!(bad.is_err());
    }

    #[test]
    fn huge_lambda_stays_finite() {
        // The scale folding keeps the evaluation in range even when the
        // unfolded integrand factor cosh(√λ·y) would overflow.
        for &lambda in &[1e4, 1e6, 1e8] {
            let q = MultiplierQuery::new(1.0, 1.0, lambda, 0.0, 3).unwrap();
            let a = alpha(&q, &settings()).unwrap();
            assert!(a.is_finite() && a >= 0.0 && a <= 1.0 + 1e-12, "λ={lambda}: {a}");
        }
    }

    #[test]
    fn quadrature_budget_exhaustion_surfaces_as_error() {
        // d = 2 puts a square-root feature at the ball boundary; with no
        // subdivision budget and a tolerance below the embedded-rule
        // error floor, the quadrature must report non-convergence with
        // its achieved error.
        let tight = QuadratureSettings {
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            max_subdivisions: 0,
        };
        let q = MultiplierQuery::new(0.5, 1.0, 2.0, 1.0, 2).unwrap();
        match alpha(&q, &tight) {
            Err(Error::QuadratureNonConvergence { achieved, .. }) => assert!(achieved > 0.0),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn invalid_queries_are_rejected() {
        assert!(MultiplierQuery::new(0.0, 1.0, 1.0, 1.0, 3).is_err());
        assert!(MultiplierQuery::new(1.0, -1.0, 1.0, 1.0, 3).is_err());
        assert!(MultiplierQuery::new(1.0, 1.0, -0.5, 1.0, 3).is_err());
        assert!(MultiplierQuery::new(1.0, 1.0, 1.0, 1.0, 0).is_err());
    }
}
