//! Finite-dimensional Hermitian spaces of holomorphic functions on `ℂⁿ`,
//! their Fubini–Study random sections, and the pulled-back metric.
//!
//! Every space is given by a basis that is declared orthonormal. The metric
//! attached to a space is the complex Hessian of the Kähler potential
//! `P(z) = log Σ_k |f_k(z)|²`; it does not depend on which orthonormal basis
//! is used.

use crate::error::invalid;
use crate::numerics::{halton, ComplexPoint, Domain, HermitianMatrix, RandomStream};
use crate::prelude::*;
use crate::{Error, Result};
use alloc::sync::Arc;
use core::fmt;
use num_complex::Complex64;

const DISTINCT_TOL: f64 = 1e-12;
const BASE_POINT_THRESHOLD: f64 = 1e-30;

/// An element `λ` of the dual space `ℂⁿ*`, paired with `z` bilinearly:
/// `⟨z, λ⟩ = Σ_j z_j λ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint(Vec<Complex64>);

impl SpectrumPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("spectrum point needs at least one coordinate"));
        }
        if coords.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(invalid(format!("non-finite spectrum point {coords:?}")));
        }
        Ok(SpectrumPoint(coords))
    }

    /// A real spectrum point.
    pub fn real(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|c| c.im == 0.0)
    }

    /// Integer exponent vector when the point lies in `ℤⁿ ⊂ ℝⁿ`.
    pub fn as_integer(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|c| {
                let r = c.re.round();
                (c.im == 0.0 && (c.re - r).abs() < 1e-12 && r.abs() < 1e9).then_some(r as i64)
            })
            .collect()
    }

    pub fn pairing(&self, z: &[Complex64]) -> Complex64 {
        self.0.iter().zip(z).map(|(l, z)| l * z).sum()
    }

    fn distance(&self, other: &SpectrumPoint) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }
}

/// A holomorphic basis function supplied together with its first
/// derivatives.
pub trait BasisFunction: fmt::Debug + Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, z: &[Complex64]) -> Complex64;
    /// `∂f/∂z_j` for each `j`.
    fn gradient(&self, z: &[Complex64]) -> Vec<Complex64>;
}

/// `coefficient · z^exponents`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coefficient: Complex64,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(coefficient: Complex64, exponents: Vec<u32>) -> Self {
        Monomial { coefficient, exponents }
    }
}

impl BasisFunction for Monomial {
    fn dim(&self) -> usize {
        self.exponents.len()
    }

    fn value(&self, z: &[Complex64]) -> Complex64 {
        self.exponents.iter().zip(z).fold(self.coefficient, |acc, (&e, zj)| acc * zj.powu(e))
    }

    fn gradient(&self, z: &[Complex64]) -> Vec<Complex64> {
        (0..self.exponents.len())
            .map(|j| {
                if self.exponents[j] == 0 {
                    return Complex64::new(0.0, 0.0);
                }
                self.exponents.iter().zip(z).enumerate().fold(self.coefficient, |acc, (k, (&e, zk))| {
                    if k == j {
                        acc * zk.powu(e - 1) * e as f64
                    } else {
                        acc * zk.powu(e)
                    }
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub enum SpaceKind {
    /// Exponentials `e^{⟨z,λ⟩}` for `λ` in a finite support.
    ExponentialSum { support: Vec<SpectrumPoint> },
    /// One-variable polynomials of degree `d` with basis `√C(d,k)·z^k`.
    Kostlan { degree: u32 },
    /// User-supplied basis functions with derivatives.
    ExplicitBasis { basis: Vec<Arc<dyn BasisFunction>> },
}

/// A Hermitian space of holomorphic functions on `ℂⁿ` with a declared
/// orthonormal basis. Immutable once built.
#[derive(Debug, Clone)]
pub struct SectionSpace {
    n: usize,
    kind: SpaceKind,
}

/// Basis values and gradients at a point, all multiplied by `e^{-log_scale}`.
#[derive(Debug, Clone)]
pub struct BasisJet {
    pub log_scale: f64,
    pub values: Vec<Complex64>,
    /// Row-major `N × n`: `gradients[a * n + j] = ∂_j f_a · e^{-log_scale}`.
    pub gradients: Vec<Complex64>,
}

impl SectionSpace {
    pub fn exponential_sum(support: Vec<SpectrumPoint>) -> Result<Self> {
        let n = support.first().ok_or_else(|| invalid("empty support"))?.dim();
        for p in &support {
            if p.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
            }
        }
        for (i, p) in support.iter().enumerate() {
            if support[..i].iter().any(|q| q.distance(p) <= DISTINCT_TOL) {
                return Err(invalid(format!("repeated support point {:?}", p.coords())));
            }
        }
        Ok(SectionSpace { n, kind: SpaceKind::ExponentialSum { support } })
    }

    /// Exponential sums with a real support given as coordinate rows.
    pub fn real_exponential_sum(points: &[&[f64]]) -> Result<Self> {
        Self::exponential_sum(points.iter().map(|p| SpectrumPoint::real(p)).collect::<Result<_>>()?)
    }

    pub fn kostlan(degree: u32) -> Self {
        SectionSpace { n: 1, kind: SpaceKind::Kostlan { degree } }
    }

    pub fn explicit(basis: Vec<Arc<dyn BasisFunction>>) -> Result<Self> {
        let n = basis.first().ok_or_else(|| invalid("empty basis"))?.dim();
        if n == 0 {
            return Err(invalid("basis functions need at least one variable"));
        }
        for f in &basis {
            if f.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
            }
        }
        Ok(SectionSpace { n, kind: SpaceKind::ExplicitBasis { basis } })
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `N` of the space (size of the basis).
    pub fn dimension(&self) -> usize {
        match &self.kind {
            SpaceKind::ExponentialSum { support } => support.len(),
            SpaceKind::Kostlan { degree } => *degree as usize + 1,
            SpaceKind::ExplicitBasis { basis } => basis.len(),
        }
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn support(&self) -> Option<&[SpectrumPoint]> {
        match &self.kind {
            SpaceKind::ExponentialSum { support } => Some(support),
            _ => None,
        }
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: z.len() });
        }
        Ok(())
    }

    /// Scaled basis values (and gradients when asked).
    pub fn jet(&self, z: &[Complex64], with_gradients: bool) -> BasisJet {
        let n = self.n;
        match &self.kind {
            SpaceKind::ExponentialSum { support } => {
                let exps: Vec<Complex64> = support.iter().map(|l| l.pairing(z)).collect();
                let m = exps.iter().fold(f64::NEG_INFINITY, |m, e| m.max(e.re));
                let values: Vec<Complex64> = exps.iter().map(|e| (e - m).exp()).collect();
                let gradients = if with_gradients {
                    support.iter().zip(&values).flat_map(|(l, v)| l.coords().iter().map(move |lj| lj * v)).collect()
                } else {
                    Vec::new()
                };
                BasisJet { log_scale: m, values, gradients }
            }
            SpaceKind::Kostlan { degree } => {
                let d = *degree;
                let r = z[0].norm();
                let (log_scale, inv) = if r > 1.0 { (d as f64 * r.ln(), r.powi(-(d as i32))) } else { (0.0, 1.0) };
                let mut values = Vec::with_capacity(d as usize + 1);
                let mut gradients = Vec::new();
                for k in 0..=d {
                    let w = binomial(d, k).sqrt() * inv;
                    values.push(z[0].powu(k) * w);
                    if with_gradients {
                        gradients.push(if k == 0 { Complex64::new(0.0, 0.0) } else { z[0].powu(k - 1) * (w * k as f64) });
                    }
                }
                BasisJet { log_scale, values, gradients }
            }
            SpaceKind::ExplicitBasis { basis } => {
                let values = basis.iter().map(|f| f.value(z)).collect();
                let gradients = if with_gradients {
                    basis.iter().flat_map(|f| {
                        let g = f.gradient(z);
                        debug_assert_eq!(g.len(), n);
                        g
                    })
                    .collect()
                } else {
                    Vec::new()
                };
                BasisJet { log_scale: 0.0, values, gradients }
            }
        }
    }

    /// Kähler potential `P(z) = log Σ_k |f_k(z)|²`.
    pub fn potential(&self, z: &ComplexPoint) -> Result<f64> {
        self.check_point(z)?;
        self.potential_at(z)
    }

    pub(crate) fn potential_at(&self, z: &[Complex64]) -> Result<f64> {
        let jet = self.jet(z, false);
        let q: f64 = jet.values.iter().map(|v| v.norm_sqr()).sum();
        if !(q > 0.0) {
            return Err(Error::BasePoint { point: z.to_vec() });
        }
        Ok(2.0 * jet.log_scale + q.ln())
    }

    /// Complex Hessian `H_{jk} = ∂²P/∂z_j∂z̄_k` of the potential.
    ///
    /// Equal to `(A_{jk}Q − B_j B̄_k)/Q²` with `Q = Σ|f_a|²`,
    /// `B_j = Σ f̄_a ∂_j f_a`, `A_{jk} = Σ ∂_j f_a ∂_k f̄_a`, and evaluated in
    /// the equivalent centered form `Σ_a (∂f_a − u_a b)(∂f_a − u_a b)ᴴ` on
    /// normalized values, which is positive semidefinite term by term.
    pub fn metric_hessian(&self, z: &ComplexPoint) -> Result<HermitianMatrix> {
        self.check_point(z)?;
        self.metric_hessian_at(z)
    }

    pub(crate) fn metric_hessian_at(&self, z: &[Complex64]) -> Result<HermitianMatrix> {
        let n = self.n;
        let jet = self.jet(z, true);
        let q: f64 = jet.values.iter().map(|v| v.norm_sqr()).sum();
        if !(q > 0.0) {
            return Err(Error::BasePoint { point: z.to_vec() });
        }
        let norm = 1.0 / q.sqrt();
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        for (a, v) in jet.values.iter().enumerate() {
            for j in 0..n {
                b[j] += (v * norm).conj() * jet.gradients[a * n + j] * norm;
            }
        }
        let mut h = vec![Complex64::new(0.0, 0.0); n * n];
        let mut centered = vec![Complex64::new(0.0, 0.0); n];
        for (a, v) in jet.values.iter().enumerate() {
            let u = v * norm;
            for j in 0..n {
                centered[j] = jet.gradients[a * n + j] * norm - u * b[j];
            }
            for j in 0..n {
                for k in j..n {
                    h[j * n + k] += centered[j] * centered[k].conj();
                }
            }
        }
        Ok(HermitianMatrix::from_upper(n, |j, k| h[j * n + k]))
    }

    /// Central finite differences of the potential, for cross-checking
    /// [`metric_hessian`](Self::metric_hessian).
    pub fn finite_difference_hessian(&self, z: &ComplexPoint, step: f64) -> Result<HermitianMatrix> {
        self.check_point(z)?;
        let base = z.to_real();
        let d = base.len();
        let p = |x: &[f64]| -> Result<f64> { self.potential_at(&crate::numerics::ComplexPoint::from_real(x)?) };
        let p0 = p(&base)?;
        let mut real = vec![0.0; d * d];
        let mut x = base.clone();
        for a in 0..d {
            for c in a..d {
                let v = if a == c {
                    x[a] = base[a] + step;
                    let plus = p(&x)?;
                    x[a] = base[a] - step;
                    let minus = p(&x)?;
                    x[a] = base[a];
                    (plus - 2.0 * p0 + minus) / (step * step)
                } else {
                    let mut corner = |sa: f64, sc: f64| -> Result<f64> {
                        x[a] = base[a] + sa * step;
                        x[c] = base[c] + sc * step;
                        let v = p(&x);
                        x[a] = base[a];
                        x[c] = base[c];
                        v
                    };
                    (corner(1.0, 1.0)? - corner(1.0, -1.0)? - corner(-1.0, 1.0)? + corner(-1.0, -1.0)?)
                        / (4.0 * step * step)
                };
                real[a * d + c] = v;
                real[c * d + a] = v;
            }
        }
        let n = self.n;
        let r = |a: usize, c: usize| real[a * d + c];
        Ok(HermitianMatrix::from_upper(n, |j, k| {
            let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
            Complex64::new(r(xj, xk) + r(yj, yk), r(xj, yk) - r(yj, xk)) * 0.25
        }))
    }

    /// Draws a section whose projective class is Fubini–Study distributed:
    /// coefficients are i.i.d. standard complex Gaussians in the orthonormal
    /// basis, and the Gaussian measure pushes forward to the normalized
    /// Fubini–Study measure on `ℙ(V)`.
    pub fn sample_section(&self, stream: &mut RandomStream) -> Section<'_> {
        let coefficients = crate::numerics::sample_complex_gaussian(stream, self.dimension());
        Section { space: self, coefficients }
    }

    pub fn section(&self, coefficients: Vec<Complex64>) -> Result<Section<'_>> {
        if coefficients.len() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: coefficients.len() });
        }
        if coefficients.iter().all(|c| c.norm_sqr() == 0.0) {
            return Err(invalid("section coefficients are all zero"));
        }
        Ok(Section { space: self, coefficients })
    }

    /// Probes `Q(z) = Σ|f_k(z)|²` at the domain center and at
    /// quasi-random points of the domain.
    pub fn check_base_point_free(&self, domain: &Domain, probe_count: usize) -> Result<BasePointCheck> {
        if domain.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: domain.dim() });
        }
        let bbox = domain.bounding_box();
        let mut probes = vec![domain.center()];
        let mut index = 1u64;
        while probes.len() < probe_count.max(1) && index < 64 * probe_count as u64 + 64 {
            let x: Vec<f64> = bbox
                .iter()
                .enumerate()
                .map(|(d, &(a, b))| a + (b - a) * halton(index, [2, 3, 5, 7, 11, 13, 17, 19][d % 8]))
                .collect();
            index += 1;
            if domain.contains(&x) {
                probes.push(x);
            }
        }
        let mut best = BasePointCheck { min_value: f64::INFINITY, at: probes[0].clone(), pass: true };
        for x in probes {
            let z = crate::numerics::ComplexPoint::from_real(&x)?;
            let jet = self.jet(&z, false);
            let q: f64 = jet.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * (2.0 * jet.log_scale).exp();
            if q < best.min_value {
                best.min_value = q;
                best.at = x;
            }
        }
        // exponentials never vanish; only underflow could push Q below the threshold
        best.pass = matches!(self.kind, SpaceKind::ExponentialSum { .. }) || best.min_value > BASE_POINT_THRESHOLD;
        Ok(best)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasePointCheck {
    /// Smallest `Σ|f_k|²` over the probes.
    pub min_value: f64,
    /// Real coordinates of the minimizing probe.
    pub at: Vec<f64>,
    pub pass: bool,
}

/// A value `mantissa · e^{log_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl ScaledComplex {
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    pub fn ln_norm(&self) -> f64 {
        self.mantissa.norm().ln() + self.log_scale
    }
}

/// An element `f = Σ c_a f_a` of a [`SectionSpace`].
#[derive(Debug, Clone)]
pub struct Section<'a> {
    space: &'a SectionSpace,
    coefficients: Vec<Complex64>,
}

impl<'a> Section<'a> {
    pub fn space(&self) -> &'a SectionSpace {
        self.space
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// The same projective point with coefficients multiplied by `factor`.
    pub fn rescaled(&self, factor: Complex64) -> Section<'a> {
        Section { space: self.space, coefficients: self.coefficients.iter().map(|c| c * factor).collect() }
    }

    /// `f(z)`. May overflow for exponential sums far from the origin; use
    /// [`evaluate_scaled`](Self::evaluate_scaled) there.
    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        self.evaluate_scaled(z).value()
    }

    /// `f(z)` with the dominant exponential factored out, never infinite for
    /// finite `z`.
    pub fn evaluate_scaled(&self, z: &[Complex64]) -> ScaledComplex {
        let jet = self.space.jet(z, false);
        let mantissa = self.coefficients.iter().zip(&jet.values).map(|(c, v)| c * v).sum();
        ScaledComplex { mantissa, log_scale: jet.log_scale }
    }

    /// Value together with the cancellation-free magnitude `Σ |c_a||f_a(z)|`
    /// on the same scale.
    pub fn evaluate_with_magnitude(&self, z: &[Complex64]) -> (ScaledComplex, f64) {
        let jet = self.space.jet(z, false);
        let mut mantissa = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for (c, v) in self.coefficients.iter().zip(&jet.values) {
            let t = c * v;
            mantissa += t;
            magnitude += t.norm();
        }
        (ScaledComplex { mantissa, log_scale: jet.log_scale }, magnitude)
    }

    /// `∂f/∂z_j` for each `j`.
    pub fn gradient(&self, z: &[Complex64]) -> Vec<Complex64> {
        let n = self.space.n;
        let jet = self.space.jet(z, true);
        let scale = jet.log_scale.exp();
        (0..n)
            .map(|j| {
                self.coefficients.iter().enumerate().map(|(a, c)| c * jet.gradients[a * n + j]).sum::<Complex64>()
                    * scale
            })
            .collect()
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(coords: &[Complex64]) -> ComplexPoint {
        ComplexPoint::new(coords.to_vec()).unwrap()
    }

    /// `Σ_b u_b e^{⟨z,λ_b⟩}`, a rotated exponential basis element.
    #[derive(Debug)]
    struct Rotated {
        weights: Vec<Complex64>,
        support: Vec<SpectrumPoint>,
    }

    impl BasisFunction for Rotated {
        fn dim(&self) -> usize {
            self.support[0].dim()
        }
        fn value(&self, z: &[Complex64]) -> Complex64 {
            self.weights.iter().zip(&self.support).map(|(w, l)| w * l.pairing(z).exp()).sum()
        }
        fn gradient(&self, z: &[Complex64]) -> Vec<Complex64> {
            (0..self.dim())
                .map(|j| {
                    self.weights.iter().zip(&self.support).map(|(w, l)| w * l.coords()[j] * l.pairing(z).exp()).sum()
                })
                .collect()
        }
    }

    fn random_unitary(m: usize, stream: &mut RandomStream) -> Vec<Vec<Complex64>> {
        let mut rows: Vec<Vec<Complex64>> = Vec::new();
        while rows.len() < m {
            let mut v = crate::numerics::sample_complex_gaussian(stream, m);
            for r in &rows {
                let proj: Complex64 = r.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(r).for_each(|(x, a)| *x -= proj * a);
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            rows.push(v.into_iter().map(|x| x / norm).collect());
        }
        rows
    }

    fn random_support(stream: &mut RandomStream, n: usize, count: usize) -> Vec<SpectrumPoint> {
        (0..count)
            .map(|_| {
                SpectrumPoint::new((0..n).map(|_| c(2.0 * stream.uniform() - 1.0, 2.0 * stream.uniform() - 1.0)).collect())
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn constant_section() {
        let v = SectionSpace::real_exponential_sum(&[&[0.0]]).unwrap();
        let s = v.section(vec![c(1.0, 0.0)]).unwrap();
        let z = [c(3.0, -2.0)];
        assert_eq!(s.evaluate(&z), c(1.0, 0.0));
        assert_eq!(s.gradient(&z), vec![c(0.0, 0.0)]);
        assert_eq!(v.potential(&pt(&z)).unwrap(), 0.0);
        assert_eq!(v.metric_hessian(&pt(&z)).unwrap(), HermitianMatrix::zeros(1));
    }

    #[test]
    fn two_term_sum_vanishes_at_origin() {
        let v = SectionSpace::real_exponential_sum(&[&[0.0], &[1.0]]).unwrap();
        let s = v.section(vec![c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(s.evaluate(&[c(0.0, 0.0)]), c(0.0, 0.0));
    }

    #[test]
    fn kostlan_substitution() {
        // basis (1, √2 z, z²) with c = (1, 0, 1): 1 + z², zero at z = i
        let v = SectionSpace::kostlan(2);
        let s = v.section(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(s.evaluate(&[c(0.0, 1.0)]).norm() < 1e-15);
        let g = s.gradient(&[c(0.0, 1.0)]);
        assert!((g[0] - c(0.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn scaled_evaluation_stays_finite() {
        let v = SectionSpace::real_exponential_sum(&[&[0.0], &[1.0]]).unwrap();
        let s = v.section(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let far = s.evaluate_scaled(&[c(1000.0, 0.3)]);
        assert!(far.mantissa.norm().is_finite() && (far.ln_norm() - 1000.0).abs() < 1e-9);
        assert!(s.evaluate(&[c(100.0, 0.0)]).norm().is_finite());
    }

    #[test]
    fn potential_examples() {
        let v = SectionSpace::real_exponential_sum(&[&[0.0], &[1.0]]).unwrap();
        let p0 = v.potential(&pt(&[c(0.0, 5.0)])).unwrap();
        assert!((p0 - 2f64.ln()).abs() < 1e-15);
        let p1 = v.potential(&pt(&[c(1.0, -2.0)])).unwrap();
        assert!((p1 - (1.0 + 2f64.exp()).ln()).abs() < 1e-14);
        let far = v.potential(&pt(&[c(400.0, 0.0)])).unwrap();
        assert!((far - 800.0).abs() < 1e-9);
    }

    #[test]
    fn two_point_hessian_closed_form() {
        // ∂z∂z̄ log(1 + e^{2x}) = ¼·d²/dx² log(1+e^{2x}) = e^{2x}/(1+e^{2x})²
        let v = SectionSpace::real_exponential_sum(&[&[0.0], &[1.0]]).unwrap();
        for x in [-3.0, -0.5, 0.0, 0.7, 2.0] {
            let h = v.metric_hessian(&pt(&[c(x, 0.4)])).unwrap();
            let e = (2.0 * x).exp();
            assert!((h.get(0, 0).re - e / ((1.0 + e) * (1.0 + e))).abs() < 1e-14);
        }
    }

    #[test]
    fn kostlan_hessian_is_degree_times_chart_metric() {
        for d in 1..6u32 {
            let v = SectionSpace::kostlan(d);
            let h0 = v.metric_hessian(&pt(&[c(0.0, 0.0)])).unwrap();
            assert!((h0.get(0, 0).re - d as f64).abs() < 1e-12);
            for z in [c(0.3, -0.2), c(1.5, 2.0), c(-40.0, 3.0)] {
                let h = v.metric_hessian(&pt(&[z])).unwrap().get(0, 0).re;
                let r2 = z.norm_sqr();
                let chart = 1.0 / ((1.0 + r2) * (1.0 + r2));
                assert!((h - d as f64 * chart).abs() < 1e-10 * (1.0 + d as f64 * chart), "d={d} z={z}");
            }
        }
    }

    #[test]
    fn base_point_error() {
        let v = SectionSpace::explicit(vec![Arc::new(Monomial::new(c(1.0, 0.0), vec![1]))]).unwrap();
        assert!(matches!(v.potential(&pt(&[c(0.0, 0.0)])), Err(Error::BasePoint { .. })));
        assert!(matches!(v.metric_hessian(&pt(&[c(0.0, 0.0)])), Err(Error::BasePoint { .. })));
    }

    #[test]
    fn base_point_checks() {
        let disk = Domain::centered_ball(1, 1.0).unwrap();
        let z1 = SectionSpace::explicit(vec![Arc::new(Monomial::new(c(1.0, 0.0), vec![1]))]).unwrap();
        let check = z1.check_base_point_free(&disk, 50).unwrap();
        assert!(!check.pass);
        assert_eq!(check.at, vec![0.0, 0.0]);
        assert!(SectionSpace::kostlan(4).check_base_point_free(&disk, 50).unwrap().pass);
        let far = Domain::ball(pt(&[c(-500.0, 0.0)]), 10.0).unwrap();
        let exp = SectionSpace::real_exponential_sum(&[&[1.0]]).unwrap();
        assert!(exp.check_base_point_free(&far, 50).unwrap().pass);
    }

    #[test]
    fn rejects_bad_spaces() {
        assert!(SectionSpace::real_exponential_sum(&[&[0.0], &[0.0]]).is_err());
        assert!(SectionSpace::real_exponential_sum(&[&[0.0], &[0.0, 1.0]]).is_err());
        assert!(SectionSpace::exponential_sum(vec![]).is_err());
        assert!(SectionSpace::explicit(vec![]).is_err());
        let v = SectionSpace::kostlan(2);
        assert!(v.section(vec![c(0.0, 0.0); 3]).is_err());
        assert!(v.section(vec![c(1.0, 0.0); 2]).is_err());
        assert!(v.potential(&pt(&[c(0.0, 0.0), c(0.0, 0.0)])).is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        let v = SectionSpace::kostlan(3);
        let a = v.sample_section(&mut RandomStream::new(8)).coefficients().to_vec();
        let b = v.sample_section(&mut RandomStream::new(8)).coefficients().to_vec();
        assert_eq!(a, b);
    }

    #[test]
    fn projectivized_gaussian_is_uniform_for_two_coefficients() {
        // For N = 2 the Fubini–Study pushforward of |c₁|²/(|c₁|²+|c₂|²) is U[0,1].
        let v = SectionSpace::kostlan(1);
        let mut root = RandomStream::new(4242);
        let mut xs: Vec<f64> = (0..10_000)
            .map(|_| {
                let s = v.sample_section(&mut root);
                let (a, b) = (s.coefficients()[0].norm_sqr(), s.coefficients()[1].norm_sqr());
                a / (a + b)
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| ((i as f64 + 1.0) / n - x).abs().max((x - i as f64 / n).abs()))
            .fold(0.0, f64::max);
        assert!(ks < 0.02, "KS statistic {ks}");
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let mut s = RandomStream::new(99);
        let mut worst: f64 = 0.0;
        for trial in 0..100 {
            let n = 1 + trial % 2;
            let count = 1 + (s.uniform() * 5.0) as usize;
            let space = if trial % 5 == 4 {
                SectionSpace::kostlan(1 + (trial % 4) as u32)
            } else {
                SectionSpace::exponential_sum(random_support(&mut s, n, count)).unwrap()
            };
            let z: Vec<Complex64> =
                (0..space.n()).map(|_| c(4.0 * s.uniform() - 2.0, 4.0 * s.uniform() - 2.0)).collect();
            let z = pt(&z);
            let h = space.metric_hessian(&z).unwrap();
            let fd = space.finite_difference_hessian(&z, 1e-4).unwrap();
            for (a, b) in h.entries().iter().zip(fd.entries()) {
                worst = worst.max((a - b).norm());
            }
        }
        assert!(worst < 1e-5, "max entry error {worst}");
    }

    #[test]
    fn hessian_is_invariant_under_unitary_basis_change() {
        let mut s = RandomStream::new(5);
        for _ in 0..20 {
            let support = random_support(&mut s, 2, 4);
            let base = SectionSpace::exponential_sum(support.clone()).unwrap();
            let u = random_unitary(4, &mut s);
            let basis: Vec<Arc<dyn BasisFunction>> = u
                .iter()
                .map(|row| Arc::new(Rotated { weights: row.clone(), support: support.clone() }) as Arc<dyn BasisFunction>)
                .collect();
            let rotated = SectionSpace::explicit(basis).unwrap();
            let z = pt(&[c(s.uniform() - 0.5, s.uniform()), c(0.3 * s.uniform(), -s.uniform())]);
            let h1 = base.metric_hessian(&z).unwrap();
            let h2 = rotated.metric_hessian(&z).unwrap();
            for (a, b) in h1.entries().iter().zip(h2.entries()) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn hessian_is_positive_semidefinite(
            pts in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0), 1..6),
            zr in proptest::collection::vec(-5.0f64..5.0, 4),
        ) {
            let support: Vec<SpectrumPoint> =
                pts.iter().map(|p| SpectrumPoint::new(vec![c(p.0, p.1), c(p.2, p.3)]).unwrap()).collect();
            prop_assume!(SectionSpace::exponential_sum(support.clone()).is_ok());
            let v = SectionSpace::exponential_sum(support).unwrap();
            let h = v.metric_hessian(&ComplexPoint::from_real(&zr).unwrap()).unwrap();
            prop_assert!(h.is_positive_semidefinite(1e-9));
        }
    }
}
