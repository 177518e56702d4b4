//! Euclidean eigenfunctions of the flat Laplacian on ℝ^d, used as test
//! inputs for the ball-integral eigenfunction identity: Ψ with
//! ΔΨ = σΨ, either oscillatory (σ = -|k|²) or exponential (σ = |k|²).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EuclideanKind {
    /// Ψ(Y) = cos(k·Y + phase), σ = -|k|².
    PlaneWaveRealPart,
    /// Ψ(Y) = e^{k·Y}, σ = |k|².
    Exponential,
}

#[derive(Debug, Clone)]
pub struct EuclideanEigenfunction {
    wave_vector: Vec<f64>,
    kind: EuclideanKind,
    phase: f64,
}

impl EuclideanEigenfunction {
    pub fn new(wave_vector: Vec<f64>, kind: EuclideanKind) -> Result<Self> {
        if wave_vector.is_empty() {
            return Err(Error::InvalidInput("wave vector must be nonempty".into()));
        }
        Ok(EuclideanEigenfunction {
            wave_vector,
            kind,
            phase: 0.0,
        })
    }

    /// Shift the plane-wave argument: cos(k·Y + phase). Ignored by the
    /// exponential kind.
    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn dim(&self) -> usize {
        self.wave_vector.len()
    }

    pub fn kind(&self) -> EuclideanKind {
        self.kind
    }

    /// The eigenvalue σ in ΔΨ = σΨ.
    pub fn sigma(&self) -> f64 {
        let k_sq: f64 = self.wave_vector.iter().map(|k| k * k).sum();
        match self.kind {
            EuclideanKind::PlaneWaveRealPart => -k_sq,
            EuclideanKind::Exponential => k_sq,
        }
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        debug_assert_eq!(y.len(), self.dim());
        let dot: f64 = self.wave_vector.iter().zip(y).map(|(k, v)| k * v).sum();
        match self.kind {
            EuclideanKind::PlaneWaveRealPart => (dot + self.phase).cos(),
            EuclideanKind::Exponential => dot.exp(),
        }
    }

    pub fn at_origin(&self) -> f64 {
        match self.kind {
            EuclideanKind::PlaneWaveRealPart => self.phase.cos(),
            EuclideanKind::Exponential => 1.0,
        }
    }
}
