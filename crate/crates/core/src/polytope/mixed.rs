use super::{newton_polytope, Embedding, Polytope};
use crate::crofton::{density_at_real, normalization_constant};
use crate::error::invalid;
use crate::numerics::{factorial, integrate, Domain, Estimate, QuadratureSpec, RandomStream};
use crate::prelude::*;
use crate::sections::{SectionSpace, SpaceKind, SpectrumPoint};
use crate::zeros::{estimate_average_zeros, AverageZeroEstimate};
use crate::{Error, Result};

/// Minkowski sum `K + L`, as the hull of all pairwise vertex sums.
pub fn minkowski_sum(a: &Polytope, b: &Polytope) -> Result<Polytope> {
    if a.n != b.n || a.embedding != b.embedding {
        return Err(invalid("Minkowski sum of polytopes in different spaces"));
    }
    let mut pts = Vec::with_capacity(a.vertices.len() * b.vertices.len());
    for u in &a.vertices {
        for v in &b.vertices {
            pts.push(u.iter().zip(v).map(|(x, y)| x + y).collect());
        }
    }
    Polytope::hull_of(a.n, a.embedding, &pts)
}

/// Classical mixed volume of `n` polytopes in `ℝⁿ`, normalized so that
/// `V(K,…,K) = vol(K)`:
/// `V = (1/n!) Σ_{∅≠S} (−1)^{n−|S|} vol(Σ_{i∈S} K_i)`.
pub fn mixed_volume(polytopes: &[&Polytope]) -> Result<f64> {
    let n = polytopes.len();
    if n == 0 {
        return Err(invalid("mixed volume of an empty tuple"));
    }
    if n > 4 {
        return Err(Error::Unsupported(format!("mixed volumes of {n} polytopes")));
    }
    for p in polytopes {
        if p.embedding != Embedding::Real {
            return Err(Error::Unsupported("mixed volume of polytopes with complex coordinates".into()));
        }
        if p.vertices[0].len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.vertices[0].len() });
        }
    }
    let mut total = 0.0;
    for mask in 1usize..(1 << n) {
        let mut members = (0..n).filter(|i| mask >> i & 1 == 1);
        let mut sum = polytopes[members.next().unwrap()].clone();
        for i in members {
            sum = minkowski_sum(&sum, polytopes[i])?;
        }
        let sign = if (n - mask.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * sum.volume();
    }
    Ok(total / factorial(n))
}

/// Volume of the real unit ball in `ℝᵈ`.
pub(crate) fn real_unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => real_unit_ball_volume(d - 2) * 2.0 * core::f64::consts::PI / d as f64,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoVolumeOptions {
    /// Increasing smoothing parameters, at least three.
    pub t_grid: Vec<f64>,
    pub quadrature: QuadratureSpec,
}

impl Default for PseudoVolumeOptions {
    fn default() -> Self {
        PseudoVolumeOptions { t_grid: vec![8.0, 16.0, 32.0], quadrature: QuadratureSpec::quasi_monte_carlo(1 << 18, 0) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoVolumeEstimate {
    /// Extrapolated value.
    pub value: f64,
    /// Spread between the two Richardson extrapolants.
    pub extrapolation_error: f64,
    /// Quadrature error propagated through the extrapolation.
    pub std_error: f64,
    /// `(t, V_t)` for each grid point.
    pub per_t: Vec<(f64, Estimate)>,
    /// Set when successive differences change sign or grow beyond noise.
    pub non_monotone: bool,
}

/// Mixed pseudo-volume `V(K₁,…,Kₙ) = ∫_B dd^c h₁∧…∧dd^c hₙ` over the unit
/// ball, computed by replacing each support function by its log-sum-exp
/// smoothing `h_{i,t}`, integrating the smooth mixed-discriminant density for
/// each `t` and extrapolating linearly in `1/t`.
///
/// The smoothing of `conv(Λ)` is the potential of the exponential-sum space
/// with spectrum `tΛ` divided by `2t`, so each `V_t` is a rescaled Crofton
/// integral. The constant is fixed so that real polytopes return their
/// classical mixed volume.
///
/// When every polytope is real the density does not depend on `Im z`, and the
/// ball integral reduces to the real slice weighted by the volume of the
/// imaginary cross-section.
pub fn mixed_pseudo_volume(polytopes: &[&Polytope], options: &PseudoVolumeOptions) -> Result<PseudoVolumeEstimate> {
    let n = polytopes.len();
    if n == 0 {
        return Err(invalid("pseudo-volume of an empty tuple"));
    }
    for p in polytopes {
        if p.n != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.n });
        }
    }
    let grid = &options.t_grid;
    if grid.len() < 3 {
        return Err(invalid(format!("t grid needs at least 3 values, got {}", grid.len())));
    }
    if grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("t grid must be positive and strictly increasing"));
    }
    options.quadrature.validate()?;
    let real = polytopes.iter().all(|p| p.embedding == Embedding::Real);
    // V_t = 2ⁿ / (vol(Bⁿ) tⁿ κₙ) ∫_B κₙ D(H_{tΛ₁},…,H_{tΛₙ})
    let constant = 2f64.powi(n as i32) / (real_unit_ball_volume(n) * normalization_constant(n));
    let per_t = grid
        .iter()
        .map(|&t| {
            let spaces = polytopes
                .iter()
                .map(|p| SectionSpace::exponential_sum(scaled_spectrum(p, t)))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&SectionSpace> = spaces.iter().collect();
            let integral = if real { real_slice_integral(&refs, &options.quadrature)? } else {
                let ball = Domain::centered_ball(n, 1.0)?;
                integrate(|x| density_at_real(&refs, x), &ball, &options.quadrature)?
            };
            Ok((t, integral.scale(constant / t.powi(n as i32))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(extrapolate(per_t))
}

fn scaled_spectrum(p: &Polytope, t: f64) -> Vec<SpectrumPoint> {
    p.spectrum()
        .into_iter()
        .map(|s| SpectrumPoint::new(s.coords().iter().map(|c| c * t).collect()).expect("finite spectrum"))
        .collect()
}

fn real_slice_integral(spaces: &[&SectionSpace], spec: &QuadratureSpec) -> Result<Estimate> {
    let n = spaces.len();
    // boxes carry complex coordinates, so odd n gets an ignored unit interval
    let mut intervals = vec![(-1.0, 1.0); n];
    if n % 2 == 1 {
        intervals.push((0.0, 1.0));
    }
    let cube = Domain::boxed(intervals)?;
    integrate(
        |x| {
            let x = &x[..n];
            let r2: f64 = x.iter().map(|v| v * v).sum();
            if r2 > 1.0 {
                return Ok(0.0);
            }
            let interleaved: Vec<f64> = x.iter().flat_map(|&v| [v, 0.0]).collect();
            let section = real_unit_ball_volume(n) * (1.0 - r2).sqrt().powi(n as i32);
            Ok(density_at_real(spaces, &interleaved)? * section)
        },
        &cube,
        spec,
    )
}

fn richardson(a: (f64, f64), b: (f64, f64)) -> f64 {
    (b.0 * b.1 - a.0 * a.1) / (b.0 - a.0)
}

fn extrapolate(per_t: Vec<(f64, Estimate)>) -> PseudoVolumeEstimate {
    let m = per_t.len();
    let point = |i: usize| (per_t[i].0, per_t[i].1.value);
    let value = richardson(point(m - 2), point(m - 1));
    let previous = richardson(point(m - 3), point(m - 2));
    let (t1, t2) = (per_t[m - 2].0, per_t[m - 1].0);
    let (s1, s2) = (per_t[m - 2].1.std_error, per_t[m - 1].1.std_error);
    let std_error = ((t2 * s2).powi(2) + (t1 * s1).powi(2)).sqrt() / (t2 - t1);
    let mut non_monotone = false;
    for i in 2..m {
        let d1 = per_t[i - 1].1.value - per_t[i - 2].1.value;
        let d2 = per_t[i].1.value - per_t[i - 1].1.value;
        let noise = 3.0 * (per_t[i].1.std_error + per_t[i - 1].1.std_error + per_t[i - 2].1.std_error);
        if (d1 * d2 < 0.0 && d1.abs().min(d2.abs()) > noise) || d2.abs() > d1.abs() + noise {
            non_monotone = true;
        }
    }
    PseudoVolumeEstimate { value, extrapolation_error: (value - previous).abs(), std_error, per_t, non_monotone }
}

/// One row of the asymptotic zero-density table.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticRow {
    pub t: f64,
    /// Zero-count estimate over `tB`.
    pub zeros: AverageZeroEstimate,
    /// `𝔐̂_{tB}/tⁿ`.
    pub ratio: f64,
    pub ratio_std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticTable {
    pub rows: Vec<AsymptoticRow>,
    pub pseudo_volume: PseudoVolumeEstimate,
    /// Predicted limit of `𝔐_{tB}/tⁿ`.
    pub prediction: f64,
}

/// Limit of `𝔐_{tB}/tⁿ` for a given pseudo-volume: the pseudo-volume is
/// normalized to the classical mixed volume, and the zero density sees the
/// imaginary cross-section of the ball, hence the factor `vol(Bⁿ)/2ⁿ`.
pub fn asymptotic_prediction(n: usize, pseudo_volume: f64) -> f64 {
    normalization_constant(n) * real_unit_ball_volume(n) / 2f64.powi(n as i32) * pseudo_volume
}

/// Average zero counts over the balls `tB` divided by `tⁿ`, together with the
/// prediction from the mixed pseudo-volume of the Newton polytopes.
pub fn asymptotic_zero_density(
    spaces: &[&SectionSpace],
    t_list: &[f64],
    sample_count: usize,
    stream: &RandomStream,
    options: &PseudoVolumeOptions,
) -> Result<AsymptoticTable> {
    let n = spaces.len();
    if !(1..=2).contains(&n) {
        return Err(Error::Unsupported(format!("asymptotics in {n} variables")));
    }
    if t_list.is_empty() || t_list.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(invalid("t list must be nonempty and positive"));
    }
    let polytopes = spaces
        .iter()
        .map(|s| match s.kind() {
            SpaceKind::ExponentialSum { support } => newton_polytope(support),
            _ => Err(Error::Unsupported("asymptotics need exponential-sum spaces".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Polytope> = polytopes.iter().collect();
    let pseudo_volume = mixed_pseudo_volume(&refs, options)?;
    let rows = t_list
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let domain = Domain::centered_ball(n, t)?;
            let zeros = estimate_average_zeros(spaces, &domain, sample_count, &stream.split(i as u64))?;
            let scale = t.powi(n as i32);
            Ok(AsymptoticRow { t, zeros, ratio: zeros.mean / scale, ratio_std_error: zeros.std_error / scale })
        })
        .collect::<Result<Vec<_>>>()?;
    let prediction = asymptotic_prediction(n, pseudo_volume.value);
    Ok(AsymptoticTable { rows, pseudo_volume, prediction })
}
