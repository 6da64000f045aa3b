//! Common zeros of two exponential sums with integer spectra on `ℂ²`.
//!
//! With `w = (e^{z₁}, e^{z₂})` each sum becomes a Laurent polynomial. After
//! clearing monomial denominators, `w₂` is eliminated with a Sylvester
//! resultant, the `w₁` roots come from a companion matrix, and each torus
//! root `(w₁, w₂) ∈ (ℂ*)²` lifts to the lattice
//! `z = (log w₁ + 2πia, log w₂ + 2πib)`, `(a, b) ∈ ℤ²`.

use super::poly;
use crate::numerics::{determinant, Domain};
use crate::prelude::*;
use crate::sections::Section;
use crate::{Error, Rejection, Result};
use core::f64::consts::PI;
use num_complex::Complex64;

/// Largest support handled by the resultant route.
pub const MAX_SUPPORT: usize = 12;
const ROOT_MODULUS_LIMIT: f64 = 1e12;
const COEFF_REL_TOL: f64 = 1e-11;
const CANDIDATE_TOL: f64 = 1e-5;
const RESIDUAL_TOL: f64 = 1e-8;
const DEDUP_TOL: f64 = 1e-7;
const BOUNDARY_TOL: f64 = 1e-9;

/// Dense bivariate polynomial `Σ c_{ij} w₁^i w₂^j`.
#[derive(Debug, Clone)]
pub(crate) struct BiPoly {
    deg1: usize,
    deg2: usize,
    coeffs: Vec<Complex64>,
}

impl BiPoly {
    fn zeros(deg1: usize, deg2: usize) -> Self {
        BiPoly { deg1, deg2, coeffs: vec![Complex64::new(0.0, 0.0); (deg1 + 1) * (deg2 + 1)] }
    }

    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.coeffs[i * (self.deg2 + 1) + j]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.coeffs[i * (self.deg2 + 1) + j]
    }

    /// Builds the polynomial from an exponential sum with support in `ℤ²`.
    pub(crate) fn from_section(s: &Section<'_>) -> Result<Self> {
        let support = s.space().support().ok_or_else(|| Error::Unsupported("zero counting on ℂ² needs exponential sums".into()))?;
        if support.len() > MAX_SUPPORT {
            return Err(Error::Unsupported(format!("support of size {} exceeds {MAX_SUPPORT}", support.len())));
        }
        let exps = support
            .iter()
            .map(|p| p.as_integer().filter(|e| e.len() == 2))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Unsupported("zero counting on ℂ² needs integer spectra".into()))?;
        let min1 = exps.iter().map(|e| e[0]).min().unwrap_or(0);
        let min2 = exps.iter().map(|e| e[1]).min().unwrap_or(0);
        let deg1 = exps.iter().map(|e| (e[0] - min1) as usize).max().unwrap_or(0);
        let deg2 = exps.iter().map(|e| (e[1] - min2) as usize).max().unwrap_or(0);
        let mut p = BiPoly::zeros(deg1, deg2);
        for (e, c) in exps.iter().zip(s.coefficients()) {
            *p.at_mut((e[0] - min1) as usize, (e[1] - min2) as usize) += c;
        }
        Ok(p)
    }

    fn transposed(&self) -> Self {
        let mut t = BiPoly::zeros(self.deg2, self.deg1);
        for i in 0..=self.deg1 {
            for j in 0..=self.deg2 {
                *t.at_mut(j, i) = self.at(i, j);
            }
        }
        t
    }

    /// Degree in `w₂` counting only nonzero coefficients.
    fn true_deg2(&self) -> usize {
        (0..=self.deg2).rev().find(|&j| (0..=self.deg1).any(|i| self.at(i, j).norm() != 0.0)).unwrap_or(0)
    }

    fn true_deg1(&self) -> usize {
        (0..=self.deg1).rev().find(|&i| (0..=self.deg2).any(|j| self.at(i, j).norm() != 0.0)).unwrap_or(0)
    }

    /// Coefficients in `w₂` after substituting `w₁`.
    fn in_w2(&self, w1: Complex64) -> Vec<Complex64> {
        (0..=self.deg2)
            .map(|j| (0..=self.deg1).rev().fold(Complex64::new(0.0, 0.0), |acc, i| acc * w1 + self.at(i, j)))
            .collect()
    }

    /// Value, gradient, and the cancellation-free magnitude `Σ|c||w^α|`.
    fn eval(&self, w: [Complex64; 2]) -> (Complex64, [Complex64; 2], f64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut v, mut d1, mut d2, mut mag) = (zero, zero, zero, 0.0);
        let mut p1 = Complex64::new(1.0, 0.0);
        for i in 0..=self.deg1 {
            let mut p2 = Complex64::new(1.0, 0.0);
            for j in 0..=self.deg2 {
                let c = self.at(i, j);
                let term = c * p1 * p2;
                v += term;
                mag += term.norm();
                if i > 0 {
                    d1 += c * i as f64 * w[0].powu(i as u32 - 1) * p2;
                }
                if j > 0 {
                    d2 += c * j as f64 * p1 * w[1].powu(j as u32 - 1);
                }
                p2 *= w[1];
            }
            p1 *= w[0];
        }
        (v, [d1, d2], mag)
    }

    fn relative_residual(&self, w: [Complex64; 2]) -> f64 {
        let (v, _, mag) = self.eval(w);
        if mag > 0.0 {
            v.norm() / mag
        } else {
            0.0
        }
    }
}

/// Sylvester resultant of `a(x)` and `b(x)` (ascending coefficients).
fn sylvester_resultant(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let m = a.len() - 1;
    let k = b.len() - 1;
    let size = m + k;
    if size == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut mat = vec![Complex64::new(0.0, 0.0); size * size];
    for row in 0..k {
        for (t, c) in a.iter().rev().enumerate() {
            mat[row * size + row + t] = *c;
        }
    }
    for row in 0..m {
        for (t, c) in b.iter().rev().enumerate() {
            mat[(k + row) * size + row + t] = *c;
        }
    }
    determinant(size, &mat)
}

/// Coefficients in `w₁` of `Res_{w₂}(p, q)`, by evaluation at roots of unity
/// and an inverse discrete Fourier transform.
fn resultant_in_w1(p: &BiPoly, q: &BiPoly) -> Vec<Complex64> {
    let (m, k) = (p.true_deg2(), q.true_deg2());
    let bound = k * p.true_deg1() + m * q.true_deg1();
    let count = bound + 1;
    let values: Vec<Complex64> = (0..count)
        .map(|s| {
            let w1 = Complex64::from_polar(1.0, 2.0 * PI * s as f64 / count as f64);
            let a = p.in_w2(w1);
            let b = q.in_w2(w1);
            sylvester_resultant(&a[..=m], &b[..=k])
        })
        .collect();
    (0..count)
        .map(|e| {
            values
                .iter()
                .enumerate()
                .map(|(s, v)| v * Complex64::from_polar(1.0, -2.0 * PI * ((s * e) % count) as f64 / count as f64))
                .sum::<Complex64>()
                / count as f64
        })
        .collect()
}

/// All common roots of `p` and `q` in the torus `(ℂ*)²`.
pub(crate) fn torus_roots(p: &BiPoly, q: &BiPoly) -> Result<Vec<[Complex64; 2]>> {
    if p.true_deg2() == 0 && q.true_deg2() == 0 {
        if p.true_deg1() == 0 && q.true_deg1() == 0 {
            return Ok(Vec::new());
        }
        let roots = torus_roots(&p.transposed(), &q.transposed())?;
        return Ok(roots.into_iter().map(|[a, b]| [b, a]).collect());
    }
    let res = resultant_in_w1(p, q);
    let (lo, hi) = poly::significant_range(&res, COEFF_REL_TOL).ok_or(Rejection::Degenerate)?;
    let w1_roots = poly::roots(&res[lo..=hi]).ok_or(Rejection::Degenerate)?;

    let mut found: Vec<[Complex64; 2]> = Vec::new();
    for w1 in w1_roots {
        check_modulus(w1)?;
        let (a, a_vanishes) = fiber(p, w1);
        let (b, b_vanishes) = fiber(q, w1);
        let (source, other) = match (a_vanishes, b_vanishes) {
            (true, true) => return Err(Rejection::Degenerate.into()),
            // p contains the whole line w₁ = const; q cuts it in points
            (true, false) => (&b, p),
            (false, true) => (&a, q),
            (false, false) => {
                let deg_a = poly::significant_range(&a, COEFF_REL_TOL).map_or(0, |r| r.1 - r.0);
                let deg_b = poly::significant_range(&b, COEFF_REL_TOL).map_or(0, |r| r.1 - r.0);
                // a fiber polynomial that is a single monomial only vanishes at w₂ = 0
                if deg_a == 0 || deg_b == 0 {
                    continue;
                }
                if deg_a <= deg_b {
                    (&a, q)
                } else {
                    (&b, p)
                }
            }
        };
        let Some(range) = poly::significant_range(source, COEFF_REL_TOL) else { continue };
        let source = &source[range.0..=range.1];
        let candidates = poly::roots(source).ok_or(Rejection::Degenerate)?;
        for w2 in candidates {
            let w = [w1, w2];
            if other.relative_residual(w) > CANDIDATE_TOL {
                continue;
            }
            check_modulus(w2)?;
            let w = newton_polish(p, q, w);
            if p.relative_residual(w) > RESIDUAL_TOL || q.relative_residual(w) > RESIDUAL_TOL {
                continue;
            }
            let duplicate = found.iter().any(|f| {
                (f[0] - w[0]).norm() <= DEDUP_TOL * (1.0 + w[0].norm()) && (f[1] - w[1]).norm() <= DEDUP_TOL * (1.0 + w[1].norm())
            });
            if !duplicate {
                found.push(w);
            }
        }
    }
    Ok(found)
}

fn check_modulus(w: Complex64) -> Result<()> {
    let r = w.norm();
    if !(r > 1.0 / ROOT_MODULUS_LIMIT && r < ROOT_MODULUS_LIMIT) {
        return Err(Rejection::IllConditionedRoot { modulus: r }.into());
    }
    Ok(())
}

fn newton_polish(p: &BiPoly, q: &BiPoly, mut w: [Complex64; 2]) -> [Complex64; 2] {
    let mut best = p.relative_residual(w).max(q.relative_residual(w));
    for _ in 0..4 {
        let (fp, gp, _) = p.eval(w);
        let (fq, gq, _) = q.eval(w);
        let det = gp[0] * gq[1] - gp[1] * gq[0];
        if det.norm() == 0.0 {
            break;
        }
        let dx = (fp * gq[1] - fq * gp[1]) / det;
        let dy = (gp[0] * fq - gq[0] * fp) / det;
        let next = [w[0] - dx, w[1] - dy];
        let r = p.relative_residual(next).max(q.relative_residual(next));
        if !(r < best) {
            break;
        }
        best = r;
        w = next;
    }
    w
}

/// Fiber polynomial in `w₂` over `w₁`, and whether it vanishes identically
/// relative to the size of its terms.
fn fiber(p: &BiPoly, w1: Complex64) -> (Vec<Complex64>, bool) {
    let coeffs = p.in_w2(w1);
    let r = w1.norm();
    let scale = (0..=p.deg2)
        .map(|j| (0..=p.deg1).rev().fold(0.0, |acc, i| acc * r + p.at(i, j).norm()))
        .fold(0.0, f64::max);
    let size = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    (coeffs, size <= 1e-9 * scale)
}

/// Common roots in `(ℂ*)²` of two exponential sums with integer spectra,
/// in the `w = e^z` coordinates.
pub fn torus_common_roots(s1: &Section<'_>, s2: &Section<'_>) -> Result<Vec<[Complex64; 2]>> {
    if s1.space().n() != 2 || s2.space().n() != 2 {
        return Err(Error::Unsupported("Laurent counting is implemented on ℂ² only".into()));
    }
    torus_roots(&BiPoly::from_section(s1)?, &BiPoly::from_section(s2)?)
}

/// Number of common zeros in `U` of two exponential sums with integer
/// spectra on `ℂ²`.
pub fn count_zeros_laurent_2d(s1: &Section<'_>, s2: &Section<'_>, domain: &Domain) -> Result<u64> {
    if domain.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: domain.dim() });
    }
    let roots = torus_common_roots(s1, s2)?;
    let mut total = 0;
    for w in roots {
        total += count_lifts(w, domain)?;
    }
    Ok(total)
}

/// Lattice lifts `(log w₁ + 2πia, log w₂ + 2πib)` of a torus point inside
/// the domain.
pub fn count_lifts(w: [Complex64; 2], domain: &Domain) -> Result<u64> {
    let x = [w[0].norm().ln(), w[1].norm().ln()];
    let y = [w[0].arg(), w[1].arg()];
    let two_pi = 2.0 * PI;
    match domain {
        Domain::Ball { center, radius } => {
            let r2 = radius * radius;
            let dx: Vec<f64> = (0..2).map(|j| x[j] - center[j].re).collect();
            let rest0 = r2 - dx[0] * dx[0] - dx[1] * dx[1];
            if rest0 < 0.0 {
                return Ok(0);
            }
            let mut count = 0;
            let a_span = range_for(y[0] - center[0].im, rest0.sqrt());
            for a in a_span.0..=a_span.1 {
                let e0 = y[0] + two_pi * a as f64 - center[0].im;
                let rest1 = (rest0 - e0 * e0).max(0.0);
                let b_span = range_for(y[1] - center[1].im, rest1.sqrt());
                for b in b_span.0..=b_span.1 {
                    let e1 = y[1] + two_pi * b as f64 - center[1].im;
                    let dist2 = rest0 - e0 * e0 - e1 * e1;
                    // dist2 = r² − |z − c|²
                    let gap = (r2 - dist2).sqrt() - radius;
                    if gap.abs() < BOUNDARY_TOL * radius {
                        return Err(Rejection::BoundaryMargin { margin: gap.abs() / radius }.into());
                    }
                    if dist2 >= 0.0 {
                        count += 1;
                    }
                }
            }
            Ok(count)
        }
        Domain::Box { intervals } => {
            let mut count = 1u64;
            for j in 0..2 {
                let (xa, xb) = intervals[2 * j];
                if x[j] < xa || x[j] > xb {
                    return Ok(0);
                }
                let (ya, yb) = intervals[2 * j + 1];
                let lo = ((ya - y[j]) / two_pi).ceil() as i64;
                let hi = ((yb - y[j]) / two_pi).floor() as i64;
                count *= (hi - lo + 1).max(0) as u64;
            }
            Ok(count)
        }
    }
}

// integers a with |offset + 2πa| ≤ half, padded by one on each side
fn range_for(offset: f64, half: f64) -> (i64, i64) {
    let lo = ((-half - offset) / (2.0 * PI)).floor() as i64;
    let hi = ((half - offset) / (2.0 * PI)).ceil() as i64;
    (lo, hi)
}
