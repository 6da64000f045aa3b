use crate::error::invalid;
use crate::prelude::*;
use crate::Result;
use core::f64::consts::PI;

use super::{factorial, ComplexPoint};

/// A bounded region of `ℂⁿ ≅ ℝ²ⁿ`.
///
/// Real coordinates are interleaved: `(Re z₁, Im z₁, Re z₂, Im z₂, …)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Ball { center: ComplexPoint, radius: f64 },
    /// One interval per real coordinate (`2n` intervals).
    Box { intervals: Vec<(f64, f64)> },
}

impl Domain {
    pub fn ball(center: ComplexPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Domain::Ball { center, radius })
    }

    /// Ball of the given radius about the origin of `ℂⁿ`.
    pub fn centered_ball(n: usize, radius: f64) -> Result<Self> {
        Self::ball(ComplexPoint::origin(n), radius)
    }

    pub fn boxed(intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() || intervals.len() % 2 != 0 {
            return Err(invalid("a box needs an even, nonzero number of real intervals"));
        }
        for &(a, b) in &intervals {
            if !(a < b && a.is_finite() && b.is_finite()) {
                return Err(invalid(format!("empty or unbounded interval [{a}, {b}]")));
            }
        }
        Ok(Domain::Box { intervals })
    }

    /// Complex dimension `n`.
    pub fn dim(&self) -> usize {
        self.real_dim() / 2
    }

    pub fn real_dim(&self) -> usize {
        match self {
            Domain::Ball { center, .. } => 2 * center.dim(),
            Domain::Box { intervals } => intervals.len(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::Ball { center, radius } => {
                let mut r2 = 0.0;
                for (c, p) in center.iter().zip(x.chunks_exact(2)) {
                    r2 += (p[0] - c.re) * (p[0] - c.re) + (p[1] - c.im) * (p[1] - c.im);
                }
                r2 <= radius * radius
            }
            Domain::Box { intervals } => intervals.iter().zip(x).all(|(&(a, b), &v)| a <= v && v <= b),
        }
    }

    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        match self {
            Domain::Ball { center, radius } => center
                .iter()
                .flat_map(|c| [(c.re - radius, c.re + radius), (c.im - radius, c.im + radius)])
                .collect(),
            Domain::Box { intervals } => intervals.clone(),
        }
    }

    /// Lebesgue volume in `ℝ²ⁿ`.
    pub fn volume(&self) -> f64 {
        match self {
            Domain::Ball { center, radius } => {
                let n = center.dim();
                PI.powi(n as i32) * radius.powi(2 * n as i32) / factorial(n)
            }
            Domain::Box { intervals } => intervals.iter().map(|(a, b)| b - a).product(),
        }
    }

    /// A representative interior point (ball center or box midpoint).
    pub fn center(&self) -> Vec<f64> {
        match self {
            Domain::Ball { center, .. } => center.to_real(),
            Domain::Box { intervals } => intervals.iter().map(|(a, b)| 0.5 * (a + b)).collect(),
        }
    }

    /// True when `self ⊆ other`, decided for ball/ball and box/box pairs.
    pub fn is_subset_of(&self, other: &Domain) -> bool {
        match (self, other) {
            (Domain::Ball { center: c1, radius: r1 }, Domain::Ball { center: c2, radius: r2 }) => {
                let d2: f64 = c1.iter().zip(c2.iter()).map(|(a, b)| (a - b).norm_sqr()).sum();
                d2.sqrt() + r1 <= *r2
            }
            (Domain::Box { intervals: a }, Domain::Box { intervals: b }) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| y.0 <= x.0 && x.1 <= y.1)
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes() {
        let disk = Domain::centered_ball(1, 2.0).unwrap();
        assert!((disk.volume() - 4.0 * PI).abs() < 1e-12);
        let b4 = Domain::centered_ball(2, 1.0).unwrap();
        assert!((b4.volume() - PI * PI / 2.0).abs() < 1e-12);
        let bx = Domain::boxed(vec![(0.0, 2.0), (-1.0, 1.0)]).unwrap();
        assert_eq!(bx.volume(), 4.0);
    }

    #[test]
    fn rejects_bad_domains() {
        assert!(Domain::centered_ball(1, 0.0).is_err());
        assert!(Domain::centered_ball(1, -1.0).is_err());
        assert!(Domain::boxed(vec![(1.0, 1.0), (0.0, 1.0)]).is_err());
        assert!(Domain::boxed(vec![(0.0, 1.0)]).is_err());
    }

    #[test]
    fn containment() {
        let disk = Domain::centered_ball(1, 1.0).unwrap();
        assert!(disk.contains(&[0.6, 0.6]));
        assert!(!disk.contains(&[0.8, 0.8]));
        let small = Domain::centered_ball(1, 0.5).unwrap();
        assert!(small.is_subset_of(&disk));
        assert!(!disk.is_subset_of(&small));
    }
}
