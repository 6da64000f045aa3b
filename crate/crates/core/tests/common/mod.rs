#![allow(dead_code)]

use core::f64::consts::PI;
use std::sync::Arc;

use crofton_core::numerics::{sample_complex_gaussian, Domain, RandomStream};
use crofton_core::sections::{BasisFunction, Section, SectionSpace, SpectrumPoint};
use crofton_core::zeros::{count_zeros_argument_principle, count_zeros_laurent_2d};
use crofton_core::{Complex64, Error};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Zeros of `a + b e^{λz}` are `z_k = (log(−a/b) + 2πik)/λ`. Returns the
/// number inside the open disk `|z| < r`, or `None` when some zero sits
/// within `1e-6·r` of the circle.
pub fn lattice_count(a: Complex64, b: Complex64, lambda: Complex64, r: f64) -> Option<u64> {
    let w = (-a / b).ln();
    let reach = ((r * lambda.norm() + w.norm()) / (2.0 * PI)).ceil() as i64 + 1;
    let mut count = 0;
    for k in -reach..=reach {
        let z = (w + c(0.0, 2.0 * PI * k as f64)) / lambda;
        let d = z.norm() - r;
        if d.abs() < 1e-6 * r {
            return None;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    Some(count)
}

pub struct LatticeTrial {
    pub lambda: Complex64,
    pub radius: f64,
    pub oracle: u64,
    pub counted: u64,
}

/// `count` random sections `a + b e^{λz}` with random complex `λ` and disk
/// radius, each counted by the argument principle and by the explicit lattice.
pub fn argument_principle_trials(count: usize, seed: u64) -> Vec<LatticeTrial> {
    let root = RandomStream::new(seed);
    let mut trials = Vec::with_capacity(count);
    let mut index = 0;
    while trials.len() < count {
        let mut s = root.split(index);
        index += 1;
        let lambda = s.complex_gaussian() * (0.5 + 2.5 * s.uniform());
        let radius = 0.5 + 6.0 * s.uniform();
        let (a, b) = (s.complex_gaussian(), s.complex_gaussian());
        let Some(oracle) = lattice_count(a, b, lambda, radius) else { continue };
        let space = SectionSpace::exponential_sum(vec![
            SpectrumPoint::new(vec![c(0.0, 0.0)]).unwrap(),
            SpectrumPoint::new(vec![lambda]).unwrap(),
        ])
        .unwrap();
        let section = space.section(vec![a, b]).unwrap();
        let disk = Domain::centered_ball(1, radius).unwrap();
        match count_zeros_argument_principle(&section, &disk) {
            Ok(counted) => trials.push(LatticeTrial { lambda, radius, oracle, counted }),
            Err(Error::Rejected(_)) => continue,
            Err(e) => panic!("argument principle failed: {e}"),
        }
    }
    trials
}

fn newton(s1: &Section<'_>, s2: &Section<'_>, start: [Complex64; 2]) -> Option<[Complex64; 2]> {
    let mut z = start;
    for _ in 0..60 {
        let f = [s1.evaluate(&z), s2.evaluate(&z)];
        let (g1, g2) = (s1.gradient(&z), s2.gradient(&z));
        let det = g1[0] * g2[1] - g1[1] * g2[0];
        if !(det.norm() > 1e-300) {
            return None;
        }
        let mut step = [(f[0] * g2[1] - f[1] * g1[1]) / det, (g1[0] * f[1] - g2[0] * f[0]) / det];
        let len = (step[0].norm_sqr() + step[1].norm_sqr()).sqrt();
        if !len.is_finite() {
            return None;
        }
        if len > 0.5 {
            step = [step[0] * (0.5 / len), step[1] * (0.5 / len)];
        }
        z = [z[0] - step[0], z[1] - step[1]];
        if z.iter().any(|v| v.norm() > 1e3) {
            return None;
        }
        if len < 1e-13 {
            break;
        }
    }
    let relative = |s: &Section<'_>| {
        let (v, m) = s.evaluate_with_magnitude(&z);
        v.mantissa.norm() / m
    };
    (relative(s1) < 1e-10 && relative(s2) < 1e-10).then_some(z)
}

/// Common zeros in a box `[x₀,x₁]×[y₀,y₁]` per coordinate, found by Newton
/// iteration from a dense grid of starts and deduplicated. `None` when a
/// zero lies within `1e-6` of the boundary.
pub fn brute_force_count(s1: &Section<'_>, s2: &Section<'_>, x: (f64, f64), y: (f64, f64)) -> Option<u64> {
    let (nx, ny) = (9, 17);
    let axis = |lo: f64, hi: f64, m: usize| -> Vec<f64> {
        let pad = 0.1 * (hi - lo);
        (0..m).map(|i| lo - pad + (hi - lo + 2.0 * pad) * i as f64 / (m - 1) as f64).collect()
    };
    let (xs, ys) = (axis(x.0, x.1, nx), axis(y.0, y.1, ny));
    let mut found: Vec<[Complex64; 2]> = Vec::new();
    for &x1 in &xs {
        for &y1 in &ys {
            for &x2 in &xs {
                for &y2 in &ys {
                    if let Some(z) = newton(s1, s2, [c(x1, y1), c(x2, y2)]) {
                        if !found.iter().any(|f| (f[0] - z[0]).norm() + (f[1] - z[1]).norm() < 1e-6) {
                            found.push(z);
                        }
                    }
                }
            }
        }
    }
    let mut count = 0;
    for z in found {
        let gaps = [z[0].re - x.0, x.1 - z[0].re, z[0].im - y.0, y.1 - z[0].im, z[1].re - x.0, x.1 - z[1].re, z[1].im - y.0, y.1 - z[1].im];
        if gaps.iter().any(|g| g.abs() < 1e-6) {
            return None;
        }
        if gaps.iter().all(|&g| g > 0.0) {
            count += 1;
        }
    }
    Some(count)
}

pub struct LaurentTrial {
    pub supports: (usize, usize),
    pub oracle: u64,
    pub counted: u64,
}

pub const SMALL_SUPPORTS: [&[&[f64]]; 5] = [
    &[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]],
    &[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]],
    &[&[0.0, 0.0], &[2.0, 0.0], &[0.0, 1.0]],
    &[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0]],
    &[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 2.0], &[0.0, 0.0]],
];

/// `count` random systems on small integer supports, counted in the box
/// `[-1.5, 1.5] × [-4, 4]` per coordinate by the Laurent solver and by the
/// brute-force search.
pub fn laurent_trials(count: usize, seed: u64) -> Vec<LaurentTrial> {
    let (x, y) = ((-1.5, 1.5), (-4.0, 4.0));
    let domain = Domain::boxed(vec![x, y, x, y]).unwrap();
    let root = RandomStream::new(seed);
    let mut trials = Vec::with_capacity(count);
    let mut index = 0;
    while trials.len() < count {
        let mut s = root.split(index);
        index += 1;
        let i = (s.uniform() * SMALL_SUPPORTS.len() as f64) as usize;
        let j = (s.uniform() * SMALL_SUPPORTS.len() as f64) as usize;
        let (v1, v2) = (
            SectionSpace::real_exponential_sum(SMALL_SUPPORTS[i]).unwrap(),
            SectionSpace::real_exponential_sum(SMALL_SUPPORTS[j]).unwrap(),
        );
        let (s1, s2) = (v1.sample_section(&mut s), v2.sample_section(&mut s));
        let Some(oracle) = brute_force_count(&s1, &s2, x, y) else { continue };
        match count_zeros_laurent_2d(&s1, &s2, &domain) {
            Ok(counted) => trials.push(LaurentTrial { supports: (i, j), oracle, counted }),
            Err(Error::Rejected(_)) => continue,
            Err(e) => panic!("Laurent counting failed: {e}"),
        }
    }
    trials
}

/// Basis `Σ_b u_ab e^{⟨z, λ_b⟩}`: the exponential basis transformed by a
/// unitary matrix `u`.
#[derive(Debug)]
pub struct Rotated {
    pub weights: Vec<Complex64>,
    pub support: Vec<SpectrumPoint>,
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
            .map(|j| self.weights.iter().zip(&self.support).map(|(w, l)| w * l.coords()[j] * l.pairing(z).exp()).sum())
            .collect()
    }
}

pub fn random_unitary(m: usize, stream: &mut RandomStream) -> Vec<Vec<Complex64>> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    while rows.len() < m {
        let mut v = sample_complex_gaussian(stream, m);
        for r in &rows {
            let proj: Complex64 = r.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(r).for_each(|(x, a)| *x -= proj * a);
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        rows.push(v.into_iter().map(|x| x / norm).collect());
    }
    rows
}

pub fn rotated_space(support: &[SpectrumPoint], unitary: &[Vec<Complex64>]) -> SectionSpace {
    let basis = unitary
        .iter()
        .map(|row| Arc::new(Rotated { weights: row.clone(), support: support.to_vec() }) as Arc<dyn BasisFunction>)
        .collect();
    SectionSpace::explicit(basis).unwrap()
}

pub fn random_complex_support(stream: &mut RandomStream, n: usize, count: usize) -> Vec<SpectrumPoint> {
    (0..count)
        .map(|_| SpectrumPoint::new((0..n).map(|_| c(2.0 * stream.uniform() - 1.0, stream.uniform() - 0.5)).collect()).unwrap())
        .collect()
}
