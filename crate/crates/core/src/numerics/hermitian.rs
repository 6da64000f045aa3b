use crate::error::invalid;
use crate::prelude::*;
use crate::{Error, Result};
use core::cmp::Ordering;
use num_complex::Complex64;

use super::factorial;

const HERMITIAN_TOL: f64 = 1e-12;

/// A dense `n × n` complex Hermitian matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Validates conjugate symmetry to `1e-12` relative to the largest entry.
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        let m = HermitianMatrix { n, entries };
        let scale = m.max_abs().max(1.0);
        let asymmetry = m.asymmetry();
        if !(asymmetry <= HERMITIAN_TOL * scale) {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(m)
    }

    /// Builds the matrix from its upper triangle; the lower triangle is
    /// filled by conjugation and the diagonal is made real.
    pub fn from_upper(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            entries[j * n + j] = Complex64::new(f(j, j).re, 0.0);
            for k in j + 1..n {
                let v = f(j, k);
                entries[j * n + k] = v;
                entries[k * n + j] = v.conj();
            }
        }
        HermitianMatrix { n, entries }
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix { n, entries: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self::from_upper(n, |j, k| if j == k { Complex64::new(d[j], 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries[j * self.n + k]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    fn asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in j..n {
                worst = worst.max((self.get(j, k) - self.get(k, j).conj()).norm());
            }
        }
        worst
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(HermitianMatrix { n: self.n, entries })
    }

    pub fn scale(&self, factor: f64) -> Self {
        HermitianMatrix { n: self.n, entries: self.entries.iter().map(|a| a * factor).collect() }
    }

    /// `α·self + β·other`.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        check_dim(self.n, other.n)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a * alpha + b * beta).collect();
        Ok(HermitianMatrix { n: self.n, entries })
    }

    /// Real determinant (the imaginary part of a Hermitian determinant is
    /// rounding noise and is dropped).
    pub fn determinant(&self) -> f64 {
        determinant(self.n, &self.entries).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = nalgebra::DMatrix::from_row_slice(self.n, self.n, &self.entries);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// True when every eigenvalue is at least `-tol · ‖H‖`.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let scale = self.max_abs();
        self.eigenvalues().first().map_or(true, |&l| l >= -tol * scale)
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.entries.iter().zip(&other.entries) {
            let ord = a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Determinant of a row-major complex `n × n` matrix by LU with partial
/// pivoting.
pub fn determinant(n: usize, entries: &[Complex64]) -> Complex64 {
    debug_assert_eq!(entries.len(), n * n);
    let mut a = entries.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))
            .unwrap_or(col);
        let p = a[pivot * n + col];
        if p.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        det *= p;
        for r in col + 1..n {
            let factor = a[r * n + col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col + 1..n {
                let v = a[col * n + k];
                a[r * n + k] -= factor * v;
            }
        }
    }
    det
}

/// Mixed discriminant `D(H₁,…,Hₙ)`, the polarization of the determinant,
/// normalized so that `D(H,…,H) = det H`.
///
/// Computed by inclusion–exclusion over the `2ⁿ − 1` nonempty subsets,
/// `D = (1/n!) Σ_S (−1)^{n−|S|} det(Σ_{i∈S} Hᵢ)`, which costs
/// `O(2ⁿ n³)`. Arguments are put into a canonical order first, so the result
/// is bitwise invariant under permutation of the inputs.
pub fn mixed_discriminant(matrices: &[&HermitianMatrix]) -> Result<f64> {
    let n = matrices.len();
    if n == 0 {
        return Err(invalid("mixed discriminant of an empty tuple"));
    }
    for m in matrices {
        check_dim(n, m.dim())?;
    }
    let mut sorted: Vec<&HermitianMatrix> = matrices.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));

    let mut sum = vec![Complex64::new(0.0, 0.0); n * n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut scale: f64 = 0.0;
    for mask in 1u32..(1u32 << n) {
        sum.iter_mut().for_each(|s| *s = Complex64::new(0.0, 0.0));
        for (i, m) in sorted.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum.iter_mut().zip(&m.entries).for_each(|(s, e)| *s += e);
            }
        }
        let det = determinant(n, &sum);
        scale = scale.max(det.norm());
        if (n - mask.count_ones() as usize) % 2 == 0 {
            total += det;
        } else {
            total -= det;
        }
    }
    debug_assert!(total.im.abs() <= 1e-10 * scale.max(1e-300) || scale == 0.0);
    Ok(total.re / factorial(n))
}
