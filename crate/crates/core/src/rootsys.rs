//! Restricted root systems of complex type and their radial Jacobians.
//!
//! Every restricted root carries multiplicity 2 (the complex-type
//! hallmark), so the radial Jacobian of the exponential map and its
//! compact-dual counterpart are the squared products
//!
//! ```text
//! j(H)   = ∏_{α>0} (sinh α(H) / α(H))²
//! j^c(H) = ∏_{α>0} (sin  α(H) / α(H))²
//! ```
//!
//! together with the analytic signed square root
//! `j^c(H)^{1/2} = ∏ sin α(H)/α(H)`, which is *not* the positive root:
//! it is the real-analytic branch that equals 1 at the origin.
//!
//! Conventions fixed here (not read from any source): the A1 root is
//! scaled to unit length so that `j^c(Y) = (sin|Y|/|Y|)²`, the
//! hyperbolic-3-manifold case, which pins `|ρ|² = 1` and `d = 3`; the
//! polar-coordinate normalization is calibrated once per system by a
//! seeded Monte Carlo run against the exact ball volume.

use crate::error::{Error, Result};
use crate::numerics::mc::{sample_ball, seeded_rng};
use crate::numerics::special::unit_ball_volume;
use std::sync::OnceLock;

/// All restricted roots of a complex-type space have multiplicity 2.
pub const COMPLEX_TYPE_MULTIPLICITY: usize = 2;

/// Sample count for the one-time polar-normalization calibration.
const CALIBRATION_SAMPLES: usize = 2_000_000;
const CALIBRATION_SEED: u64 = 0x6a63_6861_6c66;

/// Built-in small families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootFamily {
    A1,
    A1xA1,
    A2,
}

#[derive(Debug)]
pub struct RootSystem {
    name: String,
    rank: usize,
    positive_roots: Vec<Vec<f64>>,
    dim: usize,
    rho: Vec<f64>,
    rho_norm_sq: f64,
    polar: OnceLock<PolarCalibration>,
}

#[derive(Debug, Clone, Copy)]
pub struct PolarCalibration {
    /// Constant `c` in μ(H) = c · ∏ α(H)².
    pub constant: f64,
    /// Standard error of the Monte Carlo calibration (0 for empty systems).
    pub std_error: f64,
}

/// A point of the closed fundamental Weyl chamber, checked on construction.
#[derive(Debug, Clone)]
pub struct RadialPoint {
    coords: Vec<f64>,
}

impl RadialPoint {
    pub fn new(sys: &RootSystem, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != sys.rank {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates, rank is {}",
                coords.len(),
                sys.rank
            )));
        }
        if let Some(i) = sys.chamber_violation(&coords) {
            return Err(Error::InvalidInput(format!(
                "point lies outside the closed Weyl chamber: root #{i} pairs negatively"
            )));
        }
        Ok(RadialPoint { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// sinh(u)/u, by series below 1e-4 to avoid cancellation.
pub fn sinhc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 + u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sinh() / u
    }
}

/// sin(u)/u, by series below 1e-4.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}

impl RootSystem {
    /// A1 with a unit-length root: the hyperbolic-3-manifold geometry,
    /// `d = 3`, `|ρ|² = 1`, `j^c(Y) = (sin|Y|/|Y|)²`.
    pub fn a1() -> Self {
        Self::build("A1", 1, vec![vec![1.0]]).expect("built-in family is valid")
    }

    /// A1 x A1: rank 2, d = 6, ρ = ρ₁ ⊕ ρ₂.
    pub fn a1xa1() -> Self {
        Self::build("A1xA1", 2, vec![vec![1.0, 0.0], vec![0.0, 1.0]])
            .expect("built-in family is valid")
    }

    /// A2 with unit-length roots at 120°: rank 2, d = 8.
    pub fn a2() -> Self {
        let half = 0.5;
        let s3 = 3.0f64.sqrt() / 2.0;
        Self::build(
            "A2",
            2,
            vec![vec![1.0, 0.0], vec![-half, s3], vec![half, s3]],
        )
        .expect("built-in family is valid")
    }

    pub fn from_family(family: RootFamily) -> Self {
        match family {
            RootFamily::A1 => Self::a1(),
            RootFamily::A1xA1 => Self::a1xa1(),
            RootFamily::A2 => Self::a2(),
        }
    }

    /// Custom positive-root list. An empty list yields the Euclidean
    /// degenerate case (d = rank, ρ = 0).
    pub fn custom(rank: usize, positive_roots: Vec<Vec<f64>>) -> Result<Self> {
        Self::build("custom", rank, positive_roots)
    }

    fn build(name: &str, rank: usize, positive_roots: Vec<Vec<f64>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput("rank must be positive".into()));
        }
        for (i, root) in positive_roots.iter().enumerate() {
            if root.len() != rank {
                return Err(Error::InvalidInput(format!(
                    "root #{i} has {} coordinates, rank is {rank}",
                    root.len()
                )));
            }
            if dot(root, root) == 0.0 {
                return Err(Error::InvalidInput(format!("root #{i} is zero")));
            }
        }
        // Reduced-configuration check: no positive root may be a positive
        // multiple of another.
        for i in 0..positive_roots.len() {
            for j in (i + 1)..positive_roots.len() {
                let (a, b) = (&positive_roots[i], &positive_roots[j]);
                let ab = dot(a, b);
                let parallel =
                    (ab * ab - dot(a, a) * dot(b, b)).abs() <= 1e-12 * dot(a, a) * dot(b, b);
                if parallel && ab > 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "roots #{i} and #{j} are positive multiples of each other"
                    )));
                }
            }
        }
        let dim = rank + COMPLEX_TYPE_MULTIPLICITY * positive_roots.len();
        // ρ = ½ Σ m_α α with m_α = 2 collapses to the plain sum of
        // positive roots.
        let mut rho = vec![0.0; rank];
        for root in &positive_roots {
            for (r, x) in rho.iter_mut().zip(root) {
                *r += x;
            }
        }
        let rho_norm_sq = dot(&rho, &rho);
        Ok(RootSystem {
            name: name.into(),
            rank,
            positive_roots,
            dim,
            rho,
            rho_norm_sq,
            polar: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn positive_roots(&self) -> &[Vec<f64>] {
        &self.positive_roots
    }
    pub fn multiplicity(&self) -> usize {
        COMPLEX_TYPE_MULTIPLICITY
    }
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }
    pub fn rho_norm_sq(&self) -> f64 {
        self.rho_norm_sq
    }

    fn pairings<'a>(&'a self, h: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        assert_eq!(h.len(), self.rank, "point dimension mismatch");
        self.positive_roots.iter().map(move |root| dot(root, h))
    }

    /// Radial Jacobian of the exponential map, `∏ (sinh α(H)/α(H))²`.
    /// Defined (and Weyl-invariant) on all of the Cartan subspace.
    pub fn j_radial(&self, h: &[f64]) -> f64 {
        self.pairings(h).map(|u| sinhc(u) * sinhc(u)).product()
    }

    /// Compact-dual radial Jacobian, `∏ (sin α(H)/α(H))²`.
    pub fn j_c_radial(&self, h: &[f64]) -> f64 {
        self.pairings(h).map(|u| sinc(u) * sinc(u)).product()
    }

    /// Analytic signed square root `∏ sin α(H)/α(H)` (may be negative).
    pub fn j_c_half_radial(&self, h: &[f64]) -> f64 {
        self.pairings(h).map(sinc).product()
    }

    /// Noncompact-dual Jacobian j^{nc}(Y) = j(iY) of the compact-group
    /// picture; radially the same evaluator as [`Self::j_radial`].
    pub fn j_nc_radial(&self, h: &[f64]) -> f64 {
        self.j_radial(h)
    }

    /// Index of the first positive root pairing negatively with `h`,
    /// if any (tolerance scaled to the point size).
    fn chamber_violation(&self, h: &[f64]) -> Option<usize> {
        let scale = h.iter().map(|x| x.abs()).fold(1.0, f64::max);
        self.pairings(h).position(|u| u < -1e-12 * scale)
    }

    pub fn in_chamber(&self, h: &[f64]) -> bool {
        h.len() == self.rank && self.chamber_violation(h).is_none()
    }

    /// Reflection of `h` across the hyperplane of positive root `index`.
    pub fn reflect(&self, index: usize, h: &[f64]) -> Vec<f64> {
        let root = &self.positive_roots[index];
        let factor = 2.0 * dot(root, h) / dot(root, root);
        h.iter().zip(root).map(|(x, a)| x - factor * a).collect()
    }

    /// Generalized polar-coordinate density μ(H) = c · ∏ α(H)² on the
    /// closed chamber, normalized so that for radial `g`
    /// `∫_{ℝ^d, |Y| <= s} g(|Y|) dY = ∫_{chamber, |H| <= s} g(|H|) μ(H) dH`.
    pub fn polar_density(&self, h: &[f64]) -> Result<f64> {
        if h.len() != self.rank {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates, rank is {}",
                h.len(),
                self.rank
            )));
        }
        if let Some(i) = self.chamber_violation(h) {
            return Err(Error::InvalidInput(format!(
                "polar density requires a chamber point: root #{i} pairs negatively"
            )));
        }
        let weight: f64 = self.pairings(h).map(|u| u * u).product();
        Ok(self.polar_calibration().constant * weight)
    }

    /// The calibrated polar normalization (computed once, then cached).
    pub fn polar_calibration(&self) -> PolarCalibration {
        *self.polar.get_or_init(|| self.calibrate_polar())
    }

    /// Calibrate `c` by matching the exact unit-ball volume of ℝ^d:
    /// `c = vol(B_d) / ∫_{chamber, |H| <= 1} ∏ α(H)² dH`, the chamber
    /// integral estimated by seeded Monte Carlo over the unit ball of
    /// the Cartan subspace.
    fn calibrate_polar(&self) -> PolarCalibration {
        let target = unit_ball_volume(self.dim);
        if self.positive_roots.is_empty() {
            // Chamber is the whole space and the weight is 1: the
            // integral is the exact rank-ball volume.
            return PolarCalibration {
                constant: target / unit_ball_volume(self.rank),
                std_error: 0.0,
            };
        }
        let mut rng = seeded_rng(CALIBRATION_SEED);
        let volume = unit_ball_volume(self.rank);
        let mut point = vec![0.0; self.rank];
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..CALIBRATION_SAMPLES {
            sample_ball(&mut rng, 1.0, &mut point);
            let v = if self.chamber_violation(&point).is_none() {
                self.pairings(&point).map(|u| u * u).product()
            } else {
                0.0
            };
            sum += v;
            sum_sq += v * v;
        }
        let n = CALIBRATION_SAMPLES as f64;
        let mean = sum / n;
        let variance = (sum_sq / n - mean * mean).max(0.0);
        let integral = volume * mean;
        let integral_se = volume * (variance / n).sqrt();
        let constant = target / integral;
        PolarCalibration {
            constant,
            // First-order propagation through the reciprocal.
            std_error: constant * integral_se / integral,
        }
    }
}
