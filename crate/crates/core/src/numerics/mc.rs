//! Monte Carlo integration over Euclidean balls.
//!
//! Points are drawn uniformly from the ball by normalizing a Gaussian
//! direction and scaling by `radius * U^{1/d}`. Used as the independent
//! oracle for the one-dimensional ball reductions and for the
//! higher-dimensional side of the eigenfunction ball identity.

use super::special::unit_ball_volume;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Deterministic RNG for reproducible experiments.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draw a point uniformly from the ball of the given radius in ℝ^d,
/// writing coordinates into `out`.
pub fn sample_ball(rng: &mut ChaCha8Rng, radius: f64, out: &mut [f64]) {
    let d = out.len();
    loop {
        let mut norm_sq = 0.0;
        for x in out.iter_mut() {
            // Box-Muller from two uniforms.
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen();
            *x = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            norm_sq += *x * *x;
        }
        if norm_sq > 0.0 {
            let r = radius * rng.gen::<f64>().powf(1.0 / d as f64);
            let scale = r / norm_sq.sqrt();
            for x in out.iter_mut() {
                *x *= scale;
            }
            return;
        }
    }
}

/// Estimate `∫_{|Y| <= radius} f(Y) dY` in ℝ^d with `samples` draws.
pub fn ball_integral<F: FnMut(&[f64]) -> f64>(
    d: usize,
    radius: f64,
    samples: usize,
    rng: &mut ChaCha8Rng,
    mut f: F,
) -> McEstimate {
    assert!(d >= 1 && radius > 0.0 && samples > 1);
    let volume = unit_ball_volume(d) * radius.powi(d as i32);
    let mut point = vec![0.0; d];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        sample_ball(rng, radius, &mut point);
        let v = f(&point);
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let variance = (sum_sq / n - mean * mean).max(0.0);
    McEstimate {
        value: volume * mean,
        std_error: volume * (variance / n).sqrt(),
        samples,
    }
}
