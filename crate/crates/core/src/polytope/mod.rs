//! Newton polytopes of spectra, their support functions, the log-sum-exp
//! smoothing of support functions, classical mixed volumes, and the mixed
//! pseudo-volume obtained as the `t → ∞` limit of smoothed Monge–Ampère
//! integrals.

mod hull;
mod mixed;

pub use hull::{convex_hull, Hull, SNAP_TOL};
pub use mixed::{
    asymptotic_prediction, asymptotic_zero_density, minkowski_sum, mixed_pseudo_volume, mixed_volume, AsymptoticRow,
    AsymptoticTable, PseudoVolumeEstimate, PseudoVolumeOptions,
};

use crate::error::invalid;
use crate::prelude::*;
use crate::sections::SpectrumPoint;
use crate::{Error, Result};
use num_complex::Complex64;

/// How polytope coordinates map to points of `ℂⁿ*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    /// Coordinates in `ℝⁿ ⊂ ℂⁿ*`.
    Real,
    /// Coordinates `(Re λ₁,…,Re λₙ, Im λ₁,…,Im λₙ)` in `ℝ²ⁿ`.
    Complex,
}

/// A convex polytope stored by its minimal vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    n: usize,
    embedding: Embedding,
    vertices: Vec<Vec<f64>>,
}

impl Polytope {
    /// Convex hull of real points of `ℝⁿ`.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let n = points.first().ok_or_else(|| invalid("polytope needs at least one point"))?.len();
        Self::hull_of(n, Embedding::Real, points)
    }

    fn hull_of(n: usize, embedding: Embedding, points: &[Vec<f64>]) -> Result<Self> {
        let m = points[0].len();
        if points.iter().any(|p| p.len() != m) {
            return Err(invalid("polytope points have mixed dimensions"));
        }
        if m == 0 || m > 4 {
            return Err(Error::Unsupported(format!("polytopes in ℝ^{m}")));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(invalid("polytope points must be finite"));
        }
        let h = convex_hull(points);
        let mut vertices: Vec<Vec<f64>> = h.vertices.iter().map(|&i| points[i].clone()).collect();
        vertices.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(core::cmp::Ordering::Equal));
        Ok(Polytope { n, embedding, vertices })
    }

    /// Builds a polytope from an explicit vertex list (hull is recomputed).
    pub fn from_vertices(n: usize, embedding: Embedding, vertices: &[Vec<f64>]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(invalid("polytope needs at least one vertex"));
        }
        let m = match embedding {
            Embedding::Real => n,
            Embedding::Complex => 2 * n,
        };
        if vertices.iter().any(|v| v.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: vertices[0].len() });
        }
        Self::hull_of(n, embedding, vertices)
    }

    /// Complex dimension `n` of the space the spectrum pairs with.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn embedding(&self) -> Embedding {
        self.embedding
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        convex_hull(&self.vertices).dim
    }

    /// Vertices as points of `ℂⁿ*`.
    pub fn spectrum(&self) -> Vec<SpectrumPoint> {
        self.vertices
            .iter()
            .map(|v| {
                let coords = match self.embedding {
                    Embedding::Real => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
                    Embedding::Complex => (0..self.n).map(|j| Complex64::new(v[j], v[self.n + j])).collect(),
                };
                SpectrumPoint::new(coords).expect("vertices are finite")
            })
            .collect()
    }

    pub fn support_function(&self) -> SupportFunction {
        SupportFunction { spectrum: self.spectrum() }
    }

    /// Volume in the ambient real space (zero unless full-dimensional).
    pub fn volume(&self) -> f64 {
        let h = convex_hull(&self.vertices);
        if h.dim == self.vertices[0].len() {
            h.volume
        } else {
            0.0
        }
    }

    /// `λ·K` for `λ ≥ 0`.
    pub fn scaled(&self, factor: f64) -> Result<Polytope> {
        let pts: Vec<Vec<f64>> = self.vertices.iter().map(|v| v.iter().map(|x| x * factor).collect()).collect();
        Self::hull_of(self.n, self.embedding, &pts)
    }

    pub fn translated(&self, shift: &[f64]) -> Result<Polytope> {
        let pts: Vec<Vec<f64>> =
            self.vertices.iter().map(|v| v.iter().zip(shift).map(|(x, s)| x + s).collect()).collect();
        Self::hull_of(self.n, self.embedding, &pts)
    }
}

/// Newton polytope `conv(Λ)`. Real supports give a polytope in `ℝⁿ`,
/// complex ones a polytope in `ℝ²ⁿ`.
pub fn newton_polytope(support: &[SpectrumPoint]) -> Result<Polytope> {
    let n = support.first().ok_or_else(|| invalid("empty support"))?.dim();
    if support.iter().any(|p| p.dim() != n) {
        return Err(invalid("support points have mixed dimensions"));
    }
    if support.iter().all(SpectrumPoint::is_real) {
        let pts: Vec<Vec<f64>> = support.iter().map(|p| p.coords().iter().map(|c| c.re).collect()).collect();
        Polytope::hull_of(n, Embedding::Real, &pts)
    } else {
        let pts: Vec<Vec<f64>> = support
            .iter()
            .map(|p| p.coords().iter().map(|c| c.re).chain(p.coords().iter().map(|c| c.im)).collect())
            .collect();
        Polytope::hull_of(n, Embedding::Complex, &pts)
    }
}

/// `h(z) = max_{λ∈Λ} Re⟨z, λ⟩`.
#[derive(Debug, Clone)]
pub struct SupportFunction {
    spectrum: Vec<SpectrumPoint>,
}

impl SupportFunction {
    pub fn from_spectrum(spectrum: Vec<SpectrumPoint>) -> Result<Self> {
        if spectrum.is_empty() {
            return Err(invalid("empty spectrum"));
        }
        Ok(SupportFunction { spectrum })
    }

    pub fn evaluate(&self, z: &[Complex64]) -> f64 {
        support_value(&self.spectrum, z)
    }

    pub fn spectrum(&self) -> &[SpectrumPoint] {
        &self.spectrum
    }
}

pub fn support_value(spectrum: &[SpectrumPoint], z: &[Complex64]) -> f64 {
    spectrum.iter().map(|l| l.pairing(z).re).fold(f64::NEG_INFINITY, f64::max)
}

/// `h_t(z) − h(z) = (1/2t) log Σ_λ e^{2t(Re⟨z,λ⟩ − h(z))}`, computed without
/// forming either term. The sum contains the term `1` and `#Λ − 1` terms in
/// `[0, 1]`, so the result lies in `[0, log(#Λ)/(2t)]`.
pub fn smoothing_gap(spectrum: &[SpectrumPoint], t: f64, z: &[Complex64]) -> Result<f64> {
    if !(t > 0.0) {
        return Err(invalid(format!("smoothing parameter must be positive, got {t}")));
    }
    if spectrum.is_empty() {
        return Err(invalid("empty spectrum"));
    }
    let values: Vec<f64> = spectrum.iter().map(|l| l.pairing(z).re).collect();
    let h = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = values.iter().map(|v| (2.0 * t * (v - h)).exp()).sum();
    Ok(sum.ln() / (2.0 * t))
}

/// Smoothed support function `h_t(z) = (1/2t) log Σ_λ e^{2t·Re⟨z,λ⟩}`,
/// which converges uniformly to `h` with `0 ≤ h_t − h ≤ log(#Λ)/(2t)`.
pub fn smoothed_support(spectrum: &[SpectrumPoint], t: f64, z: &[Complex64]) -> Result<f64> {
    Ok(support_value(spectrum, z) + smoothing_gap(spectrum, t, z)?)
}

/// The uniform bound `log(#Λ)/(2t)` on the smoothing gap.
pub fn smoothing_bound(spectrum_size: usize, t: f64) -> f64 {
    (spectrum_size as f64).ln() / (2.0 * t)
}
