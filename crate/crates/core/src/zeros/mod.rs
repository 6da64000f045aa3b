//! Monte Carlo side of the Crofton identity: counting common zeros of
//! random sections in a domain and averaging the counts.
//!
//! One variable uses the argument principle and works for every kind of
//! section space. Two variables need exponential sums with integer spectra,
//! which become Laurent polynomials in `w = e^z`.

mod argument;
mod laurent;
mod poly;

pub use argument::{count_zeros_argument_principle, BOUNDARY_MARGIN};
pub use laurent::{count_lifts, count_zeros_laurent_2d, torus_common_roots, MAX_SUPPORT};

use crate::error::invalid;
use crate::numerics::{par_map, Domain, RandomStream};
use crate::prelude::*;
use crate::sections::{Section, SectionSpace};
use crate::{Error, Result};

/// Redraws allowed for one sample before it is given up.
pub const MAX_ATTEMPTS: u32 = 10;
/// Rejections above this fraction of the requested samples invalidate the
/// estimate.
pub const REJECTION_BUDGET: f64 = 0.01;

/// Common zeros of `n` sections in `U` (with multiplicity, which almost
/// surely equals the number of distinct zeros).
pub fn count_common_zeros(sections: &[Section<'_>], domain: &Domain) -> Result<u64> {
    match sections {
        [s] => count_zeros_argument_principle(s, domain),
        [s1, s2] => count_zeros_laurent_2d(s1, s2, domain),
        _ => Err(Error::Unsupported(format!("zero counting in {} variables", sections.len()))),
    }
}

/// Outcome of one Monte Carlo draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroCountSample {
    pub index: u64,
    /// `None` when every attempt was rejected.
    pub count: Option<u64>,
    pub rejections: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageZeroEstimate {
    pub mean: f64,
    pub std_error: f64,
    /// Accepted samples.
    pub sample_count: u64,
    pub rejected_count: u64,
    /// False when rejections reached the budget.
    pub valid: bool,
}

/// Draws `sample_count` tuples of Fubini–Study random sections and counts
/// their common zeros in `U`. Sample `i`, attempt `k` uses the stream
/// `stream.split(i).split(k)`, so the result does not depend on threading.
pub fn sample_zero_counts(
    spaces: &[&SectionSpace],
    domain: &Domain,
    sample_count: usize,
    stream: &RandomStream,
) -> Result<Vec<ZeroCountSample>> {
    let n = spaces.len();
    if !(1..=2).contains(&n) {
        return Err(Error::Unsupported(format!("zero counting in {n} variables")));
    }
    for s in spaces {
        if s.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.n() });
        }
    }
    if domain.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: domain.dim() });
    }
    if sample_count == 0 {
        return Err(invalid("sample count must be positive"));
    }
    let results = par_map(sample_count, |i| -> Result<ZeroCountSample> {
        let sample_stream = stream.split(i as u64);
        let mut rejections = 0;
        for attempt in 0..MAX_ATTEMPTS {
            let mut s = sample_stream.split(attempt as u64);
            let sections: Vec<Section<'_>> = spaces.iter().map(|v| v.sample_section(&mut s)).collect();
            match count_common_zeros(&sections, domain) {
                Ok(count) => return Ok(ZeroCountSample { index: i as u64, count: Some(count), rejections }),
                Err(Error::Rejected(_)) => rejections += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(ZeroCountSample { index: i as u64, count: None, rejections })
    });
    results.into_iter().collect()
}

/// Monte Carlo estimate of the average number of common zeros in `U`.
pub fn estimate_average_zeros(
    spaces: &[&SectionSpace],
    domain: &Domain,
    sample_count: usize,
    stream: &RandomStream,
) -> Result<AverageZeroEstimate> {
    Ok(summarize(&sample_zero_counts(spaces, domain, sample_count, stream)?))
}

pub fn summarize(samples: &[ZeroCountSample]) -> AverageZeroEstimate {
    let counts: Vec<f64> = samples.iter().filter_map(|s| s.count.map(|c| c as f64)).collect();
    let rejected: u64 = samples.iter().map(|s| s.rejections as u64).sum();
    let k = counts.len() as f64;
    let mean = if k > 0.0 { counts.iter().sum::<f64>() / k } else { f64::NAN };
    let var = if k > 1.0 { counts.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / (k - 1.0) } else { 0.0 };
    AverageZeroEstimate {
        mean,
        std_error: if k > 0.0 { (var / k).sqrt() } else { f64::NAN },
        sample_count: counts.len() as u64,
        rejected_count: rejected,
        valid: k > 0.0 && (rejected as f64) < REJECTION_BUDGET * samples.len() as f64,
    }
}
