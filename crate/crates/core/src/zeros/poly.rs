//! Univariate complex polynomials (coefficients in ascending order).

use crate::prelude::*;
use nalgebra::{linalg::Schur, DMatrix};
use num_complex::Complex64;

pub(crate) fn eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

fn eval_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    coeffs.iter().rev().fold((zero, zero), |(p, d), c| (p * x + c, d * x + p))
}

/// Range `lo..=hi` of coefficients whose modulus exceeds `rel_tol` times the
/// largest one. `None` when every coefficient is negligible.
pub(crate) fn significant_range(coeffs: &[Complex64], rel_tol: f64) -> Option<(usize, usize)> {
    let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    if max == 0.0 {
        return None;
    }
    let keep = |c: &Complex64| c.norm() > rel_tol * max;
    let lo = coeffs.iter().position(keep)?;
    let hi = coeffs.iter().rposition(keep)?;
    Some((lo, hi))
}

/// Roots of a polynomial with nonzero constant and leading coefficients,
/// as eigenvalues of the companion matrix followed by Newton polishing.
///
/// The variable is rescaled by `ρ = |c₀/c_d|^{1/d}` before building the
/// companion matrix so that the roots have unit geometric mean.
pub(crate) fn roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let d = coeffs.len().checked_sub(1)?;
    match d {
        0 => return Some(Vec::new()),
        1 => return Some(vec![-coeffs[0] / coeffs[1]]),
        _ => {}
    }
    let rho = (coeffs[0].norm() / coeffs[d].norm()).powf(1.0 / d as f64);
    let rho = if rho.is_finite() && rho > 0.0 { rho } else { 1.0 };
    let lead = coeffs[d] * rho.powi(d as i32);
    let scaled: Vec<Complex64> = coeffs.iter().enumerate().map(|(k, c)| c * rho.powi(k as i32) / lead).collect();

    let mut companion = DMatrix::<Complex64>::zeros(d, d);
    for k in 0..d {
        companion[(0, k)] = -scaled[d - 1 - k];
    }
    for k in 1..d {
        companion[(k, k - 1)] = Complex64::new(1.0, 0.0);
    }
    let schur = Schur::try_new(companion, 1e-15, 10_000)?;
    let eig = schur.eigenvalues()?;
    let mut out: Vec<Complex64> = eig.iter().map(|u| u * rho).collect();
    for x in out.iter_mut() {
        *x = polish(coeffs, *x);
    }
    Some(out)
}

fn polish(coeffs: &[Complex64], mut x: Complex64) -> Complex64 {
    let mut best = eval(coeffs, x).norm();
    for _ in 0..3 {
        let (p, dp) = eval_with_derivative(coeffs, x);
        if dp.norm() == 0.0 {
            break;
        }
        let next = x - p / dp;
        let v = eval(coeffs, next).norm();
        if !(v < best) {
            break;
        }
        best = v;
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn recovers_known_roots() {
        let want = [c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0), c(1e-3, 1e-3), c(40.0, -1.0)];
        // expand Π (x − r)
        let mut p = vec![c(1.0, 0.0)];
        for r in want {
            let mut next = vec![c(0.0, 0.0); p.len() + 1];
            for (k, a) in p.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            p = next;
        }
        let got = roots(&p).unwrap();
        for r in want {
            let closest = got.iter().map(|g| (g - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(closest < 1e-9 * (1.0 + r.norm()), "{r} missing from {got:?}");
        }
    }

    #[test]
    fn significant_range_strips_noise() {
        let p = [c(1e-20, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(1e-19, 0.0)];
        assert_eq!(significant_range(&p, 1e-11), Some((1, 2)));
        assert_eq!(significant_range(&[c(0.0, 0.0)], 1e-11), None);
    }
}
