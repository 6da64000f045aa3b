use crate::error::invalid;
use crate::prelude::*;
use crate::{Error, Result};
use core::f64::consts::PI;

use super::{Domain, RandomStream};

const CELL: usize = 2048;
const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureMethod {
    /// Uniform draws from the domain's bounding box; points outside the
    /// domain contribute zero.
    MonteCarlo { samples: usize },
    /// Randomly shifted Halton points on the bounding box.
    QuasiMonteCarlo { samples: usize },
    /// Tensor Gauss–Legendre rule on the bounding box.
    ProductGauss { nodes_per_axis: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    pub seed: u64,
}

impl QuadratureSpec {
    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        QuadratureSpec { method: QuadratureMethod::MonteCarlo { samples }, seed }
    }

    pub fn quasi_monte_carlo(samples: usize, seed: u64) -> Self {
        QuadratureSpec { method: QuadratureMethod::QuasiMonteCarlo { samples }, seed }
    }

    pub fn product_gauss(nodes_per_axis: usize) -> Self {
        QuadratureSpec { method: QuadratureMethod::ProductGauss { nodes_per_axis }, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        let count = match self.method {
            QuadratureMethod::MonteCarlo { samples } | QuadratureMethod::QuasiMonteCarlo { samples } => samples,
            QuadratureMethod::ProductGauss { nodes_per_axis } => nodes_per_axis,
        };
        if count == 0 {
            return Err(invalid("quadrature needs at least one node"));
        }
        Ok(())
    }
}

/// An integral estimate with its error bar. For Monte Carlo the error is the
/// standard error of the mean; for the deterministic rules it is the
/// difference between two resolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, std_error: 0.0 }
    }

    pub fn scale(self, factor: f64) -> Self {
        Estimate { value: self.value * factor, std_error: self.std_error * factor.abs() }
    }
}

/// Integrates `f` over `domain`. The integrand receives interleaved real
/// coordinates and is only called at points inside the domain.
///
/// Deterministic given `spec.seed`: nodes are grouped into fixed cells and
/// the partial results are reduced pairwise in cell order, whatever the
/// thread count.
pub fn integrate<F>(f: F, domain: &Domain, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    spec.validate()?;
    let bbox = domain.bounding_box();
    let box_volume: f64 = bbox.iter().map(|(a, b)| b - a).product();
    let eval = |x: &[f64]| -> Result<f64> {
        if !domain.contains(x) {
            return Ok(0.0);
        }
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { node: x.to_vec() });
        }
        Ok(v)
    };
    match spec.method {
        QuadratureMethod::MonteCarlo { samples } => {
            let root = RandomStream::new(spec.seed);
            let cells = samples.div_ceil(CELL);
            let parts = par_map(cells, |c| -> Result<Moments> {
                let mut stream = root.split(c as u64);
                let mut m = Moments::default();
                let mut x = vec![0.0; bbox.len()];
                for _ in c * CELL..((c + 1) * CELL).min(samples) {
                    for (xi, &(a, b)) in x.iter_mut().zip(&bbox) {
                        *xi = a + (b - a) * stream.uniform();
                    }
                    m.push(eval(&x)?);
                }
                Ok(m)
            });
            let m = tree_reduce(collect(parts)?, Moments::merge).unwrap_or_default();
            Ok(Estimate {
                value: box_volume * m.mean,
                std_error: box_volume * (m.variance() / m.count).sqrt(),
            })
        }
        QuadratureMethod::QuasiMonteCarlo { samples } => {
            if bbox.len() > PRIMES.len() {
                return Err(Error::Unsupported(format!("Halton points above {} dimensions", PRIMES.len())));
            }
            let mut shift_stream = RandomStream::new(spec.seed);
            let shift: Vec<f64> = bbox.iter().map(|_| shift_stream.uniform()).collect();
            let half = samples / 2;
            let cells = samples.div_ceil(CELL);
            let parts = par_map(cells, |c| -> Result<(f64, f64)> {
                let mut x = vec![0.0; bbox.len()];
                let (mut first, mut second) = (0.0, 0.0);
                for i in c * CELL..((c + 1) * CELL).min(samples) {
                    for (d, (xi, &(a, b))) in x.iter_mut().zip(&bbox).enumerate() {
                        let u = halton(i as u64 + 1, PRIMES[d]) + shift[d];
                        *xi = a + (b - a) * (u - u.floor());
                    }
                    let v = eval(&x)?;
                    if i < half {
                        first += v;
                    } else {
                        second += v;
                    }
                }
                Ok((first, second))
            });
            let (first, second) = tree_reduce(collect(parts)?, |a, b| (a.0 + b.0, a.1 + b.1)).unwrap_or_default();
            let full = box_volume * (first + second) / samples as f64;
            let coarse = if half > 0 { box_volume * first / half as f64 } else { full };
            Ok(Estimate { value: full, std_error: (full - coarse).abs() })
        }
        QuadratureMethod::ProductGauss { nodes_per_axis } => {
            let fine = product_gauss(&eval, &bbox, nodes_per_axis)?;
            let coarse = product_gauss(&eval, &bbox, (nodes_per_axis / 2).max(1))?;
            Ok(Estimate { value: fine, std_error: (fine - coarse).abs() })
        }
    }
}

fn product_gauss<F>(eval: &F, bbox: &[(f64, f64)], m: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let (nodes, weights) = gauss_legendre(m);
    let d = bbox.len();
    let total = m.checked_pow(d as u32).ok_or_else(|| invalid("product rule is too large"))?;
    let cells = total.div_ceil(CELL);
    let parts = par_map(cells, |c| -> Result<f64> {
        let mut x = vec![0.0; d];
        let mut acc = 0.0;
        for flat in c * CELL..((c + 1) * CELL).min(total) {
            let mut rest = flat;
            let mut w = 1.0;
            for (xi, &(a, b)) in x.iter_mut().zip(bbox) {
                let k = rest % m;
                rest /= m;
                let half = 0.5 * (b - a);
                *xi = a + half * (nodes[k] + 1.0);
                w *= half * weights[k];
            }
            acc += w * eval(&x)?;
        }
        Ok(acc)
    });
    Ok(tree_reduce(collect(parts)?, |a, b| a + b).unwrap_or(0.0))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(m, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

// P_m(x) and P_m'(x) by the three-term recurrence.
fn legendre(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Radical inverse of `index` in the given base.
pub fn halton(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    r
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.count += 1.0;
        let delta = v - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (v - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.count == 0.0 {
            return b;
        }
        if b.count == 0.0 {
            return a;
        }
        let count = a.count + b.count;
        let delta = b.mean - a.mean;
        Moments {
            count,
            mean: a.mean + delta * b.count / count,
            m2: a.m2 + b.m2 + delta * delta * a.count * b.count / count,
        }
    }

    fn variance(&self) -> f64 {
        if self.count > 1.0 {
            self.m2 / (self.count - 1.0)
        } else {
            0.0
        }
    }
}

/// Maps `f` over `0..count`, in parallel when the `std` feature is on.
/// Output order always follows the index.
pub(crate) fn par_map<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "std")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "std"))]
    {
        (0..count).map(f).collect()
    }
}

fn collect<T>(parts: Vec<Result<T>>) -> Result<Vec<T>> {
    parts.into_iter().collect()
}

/// Pairwise reduction in index order: `((a₀·a₁)·(a₂·a₃))·…`.
pub(crate) fn tree_reduce<T: Clone>(mut items: Vec<T>, op: impl Fn(T, T) -> T) -> Option<T> {
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(op(a, b)),
                None => next.push(a),
            }
        }
        items = next;
    }
    items.pop()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ComplexPoint;

    fn disk() -> Domain {
        Domain::centered_ball(1, 1.0).unwrap()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(5);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        // ∫ x⁸ = 2/9 is exact for a 5-point rule (degree ≤ 9).
        let m8: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((m8 - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn unit_disk_area() {
        let est = integrate(|_| Ok(1.0), &disk(), &QuadratureSpec::monte_carlo(200_000, 3)).unwrap();
        assert!((est.value - PI).abs() < 3.0 * est.std_error, "{est:?}");
        assert!(est.std_error < 0.01);
    }

    #[test]
    fn zero_integrand_is_exactly_zero() {
        for spec in [
            QuadratureSpec::monte_carlo(1000, 1),
            QuadratureSpec::quasi_monte_carlo(1000, 1),
            QuadratureSpec::product_gauss(8),
        ] {
            let est = integrate(|_| Ok(0.0), &disk(), &spec).unwrap();
            assert_eq!(est.value, 0.0);
            assert_eq!(est.std_error, 0.0);
        }
    }

    #[test]
    fn second_moment_on_disk() {
        // ∫_disk r² = 2π ∫₀¹ r³ dr = π/2
        let f = |x: &[f64]| Ok(x[0] * x[0] + x[1] * x[1]);
        let mc = integrate(f, &disk(), &QuadratureSpec::monte_carlo(400_000, 9)).unwrap();
        assert!((mc.value - PI / 2.0).abs() < 3.0 * mc.std_error);
        let qmc = integrate(f, &disk(), &QuadratureSpec::quasi_monte_carlo(400_000, 9)).unwrap();
        assert!((qmc.value - PI / 2.0).abs() < 2e-3);
        let pg = integrate(f, &disk(), &QuadratureSpec::product_gauss(400)).unwrap();
        assert!((pg.value - PI / 2.0).abs() < 1e-2);
    }

    #[test]
    fn box_product_gauss_is_exact_for_polynomials() {
        let bx = Domain::boxed(vec![(0.0, 1.0), (0.0, 2.0)]).unwrap();
        let est = integrate(|x| Ok(x[0] * x[1] * x[1]), &bx, &QuadratureSpec::product_gauss(4)).unwrap();
        assert!((est.value - 0.5 * 8.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn nan_names_the_node() {
        let err = integrate(|x| Ok(if x[0] > 0.0 { f64::NAN } else { 1.0 }), &disk(), &QuadratureSpec::monte_carlo(100, 1))
            .unwrap_err();
        match err {
            Error::NonFiniteIntegrand { node } => assert!(node[0] > 0.0 && node.len() == 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let f = |x: &[f64]| Ok((x[0] * 3.0).sin() + x[1]);
        let spec = QuadratureSpec::monte_carlo(10_000, 77);
        assert_eq!(integrate(f, &disk(), &spec).unwrap(), integrate(f, &disk(), &spec).unwrap());
    }

    #[test]
    fn doubling_samples_shrinks_error_by_root_two() {
        let ball = Domain::ball(ComplexPoint::origin(1), 1.0).unwrap();
        let f = |x: &[f64]| Ok((2.0 * x[0]).exp());
        let mut ratios = Vec::new();
        for rep in 0..10u64 {
            let a = integrate(f, &ball, &QuadratureSpec::monte_carlo(20_000, rep)).unwrap();
            let b = integrate(f, &ball, &QuadratureSpec::monte_carlo(40_000, 100 + rep)).unwrap();
            ratios.push(b.std_error / a.std_error);
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let target = core::f64::consts::FRAC_1_SQRT_2;
        assert!((mean - target).abs() < 0.2 * target, "mean ratio {mean}");
    }

    #[test]
    fn rejects_empty_spec() {
        assert!(integrate(|_| Ok(1.0), &disk(), &QuadratureSpec::monte_carlo(0, 1)).is_err());
    }
}
