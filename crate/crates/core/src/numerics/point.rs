use crate::error::invalid;
use crate::prelude::*;
use crate::Result;
use core::ops::Deref;
use num_complex::Complex64;

/// A point `z = (z₁,…,zₙ)` of `ℂⁿ` with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoint(Vec<Complex64>);

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("a point needs at least one coordinate"));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(invalid(format!("non-finite coordinate in {coords:?}")));
        }
        Ok(ComplexPoint(coords))
    }

    pub fn origin(n: usize) -> Self {
        ComplexPoint(vec![Complex64::new(0.0, 0.0); n.max(1)])
    }

    /// Builds a point from interleaved real coordinates
    /// `(Re z₁, Im z₁, Re z₂, Im z₂, …)`.
    pub fn from_real(xs: &[f64]) -> Result<Self> {
        if xs.len() % 2 != 0 {
            return Err(invalid("real coordinate list must have even length"));
        }
        Self::new(xs.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
    }

    pub fn to_real(&self) -> Vec<f64> {
        self.0.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn scaled(&self, factor: f64) -> ComplexPoint {
        ComplexPoint(self.0.iter().map(|c| c * factor).collect())
    }
}

impl Deref for ComplexPoint {
    type Target = [Complex64];
    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

/// Interleaved real coordinates to complex ones, without validation.
pub(crate) fn complex_from_real(xs: &[f64]) -> Vec<Complex64> {
    xs.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect()
}
