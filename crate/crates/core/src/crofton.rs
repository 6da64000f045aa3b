//! The integral side of the Crofton identity: the density of
//! `ω₁∧…∧ωₙ` against Lebesgue measure, the Hermitian mixed volume, and the
//! polynomiality checks of the volume functional.
//!
//! # Normalization
//!
//! Each pulled-back form is `ω = (i/2π)∂∂̄P` with `P` the Kähler potential of
//! the space. With `i dz∧dz̄ = 2 dx∧dy` one gets
//!
//! ```text
//! ω₁∧…∧ωₙ = (n!/πⁿ) · D(H₁,…,Hₙ) · dLeb(ℝ²ⁿ)
//! ```
//!
//! where `D` is the mixed discriminant of the complex Hessians. At `n = 1`
//! this gives `(d/π)(1+|z|²)⁻²` for degree-`d` Kostlan polynomials, whose
//! integral over the plane is `d`, the number of roots. That pins the
//! constant `κₙ = n!/πⁿ`. A prefactor `n!/(2π)ⁿ` in front of
//! `dd^c log Σ e^{2Re⟨z,λ⟩}` is the same quantity only under the convention
//! `dd^c = 2i∂∂̄`; the constant here is fixed by the Kostlan count rather than
//! by either reading.

use crate::error::invalid;
use crate::numerics::{factorial, integrate, mixed_discriminant, ComplexPoint, Domain, Estimate, QuadratureSpec};
use crate::prelude::*;
use crate::sections::SectionSpace;
use crate::{Error, Result};
use core::f64::consts::PI;
use num_complex::Complex64;

/// `κₙ = n!/πⁿ`, the factor between `ω₁∧…∧ωₙ` and `D(H₁,…,Hₙ)·dLeb`.
pub fn normalization_constant(n: usize) -> f64 {
    factorial(n) / PI.powi(n as i32)
}

fn check_tuple(spaces: &[&SectionSpace]) -> Result<usize> {
    let n = spaces.len();
    if n == 0 {
        return Err(invalid("need at least one space"));
    }
    for s in spaces {
        if s.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.n() });
        }
    }
    Ok(n)
}

/// Density of `ω₁∧…∧ωₙ` at `z`: `κₙ · D(H₁(z),…,Hₙ(z))`.
pub fn crofton_density(spaces: &[&SectionSpace], z: &ComplexPoint) -> Result<f64> {
    let n = check_tuple(spaces)?;
    if z.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: z.dim() });
    }
    density_at(spaces, z)
}

fn density_at(spaces: &[&SectionSpace], z: &[Complex64]) -> Result<f64> {
    let n = spaces.len();
    let hessians = spaces.iter().map(|s| s.metric_hessian_at(z)).collect::<Result<Vec<_>>>()?;
    let refs: Vec<_> = hessians.iter().collect();
    // PSD arguments give D ≥ 0; clamp rounding noise
    Ok((normalization_constant(n) * mixed_discriminant(&refs)?).max(0.0))
}

pub(crate) fn density_at_real(spaces: &[&SectionSpace], x: &[f64]) -> Result<f64> {
    let z = crate::numerics::complex_from_real(x);
    density_at(spaces, &z)
}

fn check_domain(n: usize, domain: &Domain) -> Result<()> {
    if domain.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: domain.dim() });
    }
    Ok(())
}

/// `∫_U ω₁∧…∧ωₙ`, the predicted average number of common zeros in `U`.
pub fn expected_zero_count_integral(spaces: &[&SectionSpace], domain: &Domain, spec: &QuadratureSpec) -> Result<Estimate> {
    let n = check_tuple(spaces)?;
    check_domain(n, domain)?;
    integrate(|x| density_at_real(spaces, x), domain, spec)
}

/// Hermitian mixed volume `vol^H_{g₁,…,gₙ}(U) = (1/n!) ∫_U ω₁∧…∧ωₙ`.
pub fn hermitian_mixed_volume(spaces: &[&SectionSpace], domain: &Domain, spec: &QuadratureSpec) -> Result<Estimate> {
    let n = spaces.len();
    Ok(expected_zero_count_integral(spaces, domain, spec)?.scale(1.0 / factorial(n)))
}

/// Hermitian volume of `U` for the combined metric `λ₁g₁ + λ₂g₂` on `ℂ²`:
/// `(1/2!) ∫_U κ₂ det(λ₁H₁ + λ₂H₂)`.
pub fn combined_volume(
    g1: &SectionSpace,
    g2: &SectionSpace,
    weights: (f64, f64),
    domain: &Domain,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    check_tuple(&[g1, g2])?;
    check_domain(2, domain)?;
    let kappa = normalization_constant(2);
    let est = integrate(
        |x| {
            let z = crate::numerics::complex_from_real(x);
            let h = g1.metric_hessian_at(&z)?.combine(weights.0, &g2.metric_hessian_at(&z)?, weights.1)?;
            Ok(kappa * h.determinant())
        },
        domain,
        spec,
    )?;
    Ok(est.scale(0.5))
}

/// Result of [`check_volume_polynomiality`].
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialityReport {
    /// `(λ₁, λ₂, F(λ₁, λ₂))` on the grid.
    pub samples: Vec<(f64, f64, f64)>,
    /// Least-squares fit `F ≈ a λ₁² + b λ₁λ₂ + c λ₂²`.
    pub coefficients: [f64; 3],
    /// `‖F − fit‖ / ‖F‖` over the grid.
    pub relative_residual: f64,
    /// `½(F(1,1) − F(1,0) − F(0,1))`.
    pub polarized: f64,
    pub mixed_volume: Estimate,
    pub polarization_relative_error: f64,
    pub pass: bool,
}

pub const POLYNOMIAL_RESIDUAL_TOL: f64 = 1e-3;
pub const POLARIZATION_TOL: f64 = 1e-6;

/// Checks that `F(λ₁,λ₂) = vol_U(λ₁g₁ + λ₂g₂)` is a homogeneous quadratic
/// in positive weights and that its polarization equals the Hermitian mixed
/// volume. Every evaluation shares the same quadrature nodes.
pub fn check_volume_polynomiality(
    g1: &SectionSpace,
    g2: &SectionSpace,
    domain: &Domain,
    spec: &QuadratureSpec,
    grid: &[(f64, f64)],
) -> Result<PolynomialityReport> {
    if grid.len() < 3 || grid.iter().any(|&(a, b)| !(a >= 0.0 && b >= 0.0 && a + b > 0.0)) {
        return Err(invalid("polynomiality grid needs at least three nonnegative, nonzero weight pairs"));
    }
    let mut samples = Vec::with_capacity(grid.len());
    for &w in grid {
        samples.push((w.0, w.1, combined_volume(g1, g2, w, domain, spec)?.value));
    }

    // normal equations for the monomials (λ₁², λ₁λ₂, λ₂²)
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for &(a, b, f) in &samples {
        let row = [a * a, a * b, b * b];
        for i in 0..3 {
            atb[i] += row[i] * f;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let coefficients = solve3(ata, atb).ok_or_else(|| invalid("polynomiality grid does not determine a quadratic"))?;
    let (mut res2, mut norm2) = (0.0, 0.0);
    for &(a, b, f) in &samples {
        let fit = coefficients[0] * a * a + coefficients[1] * a * b + coefficients[2] * b * b;
        res2 += (f - fit) * (f - fit);
        norm2 += f * f;
    }
    let relative_residual = if norm2 > 0.0 { (res2 / norm2).sqrt() } else { 0.0 };

    let f11 = combined_volume(g1, g2, (1.0, 1.0), domain, spec)?.value;
    let f10 = combined_volume(g1, g2, (1.0, 0.0), domain, spec)?.value;
    let f01 = combined_volume(g1, g2, (0.0, 1.0), domain, spec)?.value;
    let polarized = 0.5 * (f11 - f10 - f01);
    let mixed_volume = hermitian_mixed_volume(&[g1, g2], domain, spec)?;
    let scale = polarized.abs().max(mixed_volume.value.abs());
    let polarization_relative_error =
        if scale > 0.0 { (polarized - mixed_volume.value).abs() / scale } else { 0.0 };
    let pass = relative_residual < POLYNOMIAL_RESIDUAL_TOL && polarization_relative_error < POLARIZATION_TOL;
    Ok(PolynomialityReport {
        samples,
        coefficients,
        relative_residual,
        polarized,
        mixed_volume,
        polarization_relative_error,
        pass,
    })
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let p = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..3 {
            let f = a[r][col] / a[col][col];
            for k in col..3 {
                a[r][k] -= f * a[col][k];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let s: f64 = (r + 1..3).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RandomStream;
    use crate::sections::SpectrumPoint;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(coords: &[Complex64]) -> ComplexPoint {
        ComplexPoint::new(coords.to_vec()).unwrap()
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
        let h = (b - a) / m as f64;
        let mut s = f(a) + f(b);
        for i in 1..m {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn kostlan_normalization_reproduces_root_count() {
        // n = 1: density (d/π)(1+r²)⁻² integrates radially to d·r²/(1+r²);
        // checked by Simpson on 2πr·density, independent of the closed form.
        let d = 3.0;
        let density = |r: f64| d / PI / ((1.0 + r * r) * (1.0 + r * r));
        let radial = simpson(|r| 2.0 * PI * r * density(r), 0.0, 1.0, 2000);
        assert!((radial - 1.5).abs() < 1e-10);
        let v = SectionSpace::kostlan(3);
        for r in [0.0, 0.4, 1.0, 2.5] {
            let got = crofton_density(&[&v], &pt(&[c(r, 0.0)])).unwrap();
            assert!((got - density(r)).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_space_annihilates_density() {
        let k = SectionSpace::real_exponential_sum(&[&[0.0, 0.0]]).unwrap();
        let g = SectionSpace::real_exponential_sum(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(crofton_density(&[&k, &g], &pt(&[c(0.1, 0.2), c(0.3, 0.4)])).unwrap(), 0.0);
        let ball = Domain::centered_ball(2, 1.0).unwrap();
        let est = hermitian_mixed_volume(&[&g, &k], &ball, &QuadratureSpec::monte_carlo(2000, 1)).unwrap();
        assert_eq!(est.value, 0.0);
        let est = expected_zero_count_integral(&[&k, &k], &ball, &QuadratureSpec::monte_carlo(2000, 1)).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn two_point_density_closed_form() {
        let v = SectionSpace::real_exponential_sum(&[&[0.0], &[1.0]]).unwrap();
        for x in [-1.0f64, 0.0, 0.5] {
            let e = (2.0 * x).exp();
            let got = crofton_density(&[&v], &pt(&[c(x, 1.0)])).unwrap();
            assert!((got - e / ((1.0 + e) * (1.0 + e)) / PI).abs() < 1e-14);
        }
    }

    #[test]
    fn kostlan_one_disk_area() {
        let v = SectionSpace::kostlan(1);
        for r in [0.5, 1.0, 2.0] {
            let disk = Domain::centered_ball(1, r).unwrap();
            let est = hermitian_mixed_volume(&[&v], &disk, &QuadratureSpec::monte_carlo(200_000, 17)).unwrap();
            let exact = r * r / (1.0 + r * r);
            assert!((est.value - exact).abs() < 3.5 * est.std_error, "r={r} {est:?} vs {exact}");
            let pg = hermitian_mixed_volume(&[&v], &disk, &QuadratureSpec::product_gauss(300)).unwrap();
            assert!((pg.value - exact).abs() < 5e-3);
        }
    }

    #[test]
    fn two_point_large_disk_grows_like_t_over_pi() {
        let v = SectionSpace::real_exponential_sum(&[&[0.0], &[1.0]]).unwrap();
        let t = 30.0;
        let disk = Domain::centered_ball(1, t).unwrap();
        let est = expected_zero_count_integral(&[&v], &disk, &QuadratureSpec::quasi_monte_carlo(400_000, 2)).unwrap();
        assert!((est.value / t - 1.0 / PI).abs() < 0.01, "{est:?}");
    }

    #[test]
    fn swapping_spaces_is_bitwise_symmetric() {
        let a = SectionSpace::real_exponential_sum(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let b = SectionSpace::real_exponential_sum(&[&[0.0, 0.0], &[2.0, 1.0], &[-1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let ball = Domain::centered_ball(2, 1.5).unwrap();
        let spec = QuadratureSpec::monte_carlo(5000, 3);
        assert_eq!(
            hermitian_mixed_volume(&[&a, &b], &ball, &spec).unwrap(),
            hermitian_mixed_volume(&[&b, &a], &ball, &spec).unwrap()
        );
    }

    #[test]
    fn monotone_in_domain() {
        let a = SectionSpace::real_exponential_sum(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let spec = QuadratureSpec::monte_carlo(20_000, 5);
        let mut prev: Option<Estimate> = None;
        for r in [0.5, 1.0, 1.5, 2.0] {
            let ball = Domain::centered_ball(2, r).unwrap();
            let est = hermitian_mixed_volume(&[&a, &a], &ball, &spec).unwrap();
            if let Some(p) = prev {
                assert!(p.value <= est.value + 3.0 * est.std_error);
            }
            prev = Some(est);
        }
    }

    #[test]
    fn common_phase_leaves_density_unchanged() {
        use crate::sections::Monomial;
        use alloc::sync::Arc;
        let basis = |phase: Complex64| {
            let fs: Vec<Arc<dyn crate::sections::BasisFunction>> = vec![
                Arc::new(Monomial::new(phase, vec![0])),
                Arc::new(Monomial::new(phase * 2f64.sqrt(), vec![1])),
                Arc::new(Monomial::new(phase, vec![2])),
            ];
            SectionSpace::explicit(fs).unwrap()
        };
        let plain = basis(c(1.0, 0.0));
        let turned = basis(Complex64::from_polar(1.0, 0.7));
        for z in [c(0.3, 0.9), c(-2.0, 0.1)] {
            let d1 = crofton_density(&[&plain], &pt(&[z])).unwrap();
            let d2 = crofton_density(&[&turned], &pt(&[z])).unwrap();
            let k = crofton_density(&[&SectionSpace::kostlan(2)], &pt(&[z])).unwrap();
            assert!((d1 - d2).abs() < 1e-14 && (d1 - k).abs() < 1e-14);
        }
    }

    #[test]
    fn polynomiality_of_identical_pair() {
        let a = SectionSpace::real_exponential_sum(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let ball = Domain::centered_ball(2, 1.0).unwrap();
        let spec = QuadratureSpec::monte_carlo(4000, 9);
        let grid = [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 0.0), (0.5, 1.5)];
        let rep = check_volume_polynomiality(&a, &a, &ball, &spec, &grid).unwrap();
        assert!(rep.pass, "{rep:?}");
        let f10 = rep.samples[0].2;
        assert!((rep.samples[2].2 - 4.0 * f10).abs() < 1e-12 * f10.abs().max(1.0));
        assert!((rep.samples[3].2 - 4.0 * f10).abs() < 1e-12 * f10.abs().max(1.0));
    }

    #[test]
    fn rejects_mismatched_tuples() {
        let a = SectionSpace::kostlan(2);
        let ball = Domain::centered_ball(2, 1.0).unwrap();
        assert!(crofton_density(&[&a, &a], &pt(&[c(0.0, 0.0), c(0.0, 0.0)])).is_err());
        assert!(hermitian_mixed_volume(&[&a], &ball, &QuadratureSpec::monte_carlo(10, 1)).is_err());
    }

    fn random_space(stream: &mut RandomStream) -> SectionSpace {
        let count = 1 + (stream.uniform() * 4.0) as usize;
        let support = (0..count)
            .map(|_| {
                SpectrumPoint::new(vec![
                    c(2.0 * stream.uniform() - 1.0, stream.uniform() - 0.5),
                    c(2.0 * stream.uniform() - 1.0, stream.uniform() - 0.5),
                ])
                .unwrap()
            })
            .collect();
        SectionSpace::exponential_sum(support).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn density_is_nonnegative(seed in 0u64..10_000, zr in proptest::collection::vec(-3.0f64..3.0, 4)) {
            let mut s = RandomStream::new(seed);
            let (a, b) = (random_space(&mut s), random_space(&mut s));
            let d = crofton_density(&[&a, &b], &ComplexPoint::from_real(&zr).unwrap()).unwrap();
            prop_assert!(d >= 0.0);
        }
    }
}
