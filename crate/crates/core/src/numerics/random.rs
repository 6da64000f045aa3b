use crate::prelude::*;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// A seeded, splittable random stream.
///
/// All randomness in the crate flows through this type. Parallel work never
/// shares a stream: each unit of work takes `split(index)`, so the samples it
/// sees depend only on `(seed, index)` and never on scheduling.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    counter: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self::with_counter(seed, 0)
    }

    fn with_counter(seed: u64, counter: u64) -> Self {
        RandomStream { seed, counter, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Index this stream was split at (0 for a root stream).
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Independent child stream number `index`.
    pub fn split(&self, index: u64) -> RandomStream {
        let child = splitmix64(self.seed ^ splitmix64(index.wrapping_add(0x632b_e59b_d9b4_e019)));
        Self::with_counter(child, index)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Standard complex Gaussian: independent real and imaginary parts with
    /// variance 1/2 each, so that `E|c|² = 1`.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(s * self.standard_normal(), s * self.standard_normal())
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// `m` i.i.d. standard complex Gaussians.
pub fn sample_complex_gaussian(stream: &mut RandomStream, m: usize) -> Vec<Complex64> {
    (0..m).map(|_| stream.complex_gaussian()).collect()
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_vector() {
        let a = sample_complex_gaussian(&mut RandomStream::new(11), 5);
        let b = sample_complex_gaussian(&mut RandomStream::new(11), 5);
        assert_eq!(a, b);
        assert_eq!(sample_complex_gaussian(&mut RandomStream::new(1), 3).len(), 3);
    }

    #[test]
    fn splits_are_distinct_and_reproducible() {
        let root = RandomStream::new(5);
        let mut a = root.split(1);
        let mut b = root.split(2);
        let mut a2 = RandomStream::new(5).split(1);
        let x = a.uniform();
        assert_ne!(x, b.uniform());
        assert_eq!(x, a2.uniform());
        assert_eq!(a.counter(), 1);
    }

    #[test]
    fn gaussian_moments_within_clt_bounds() {
        // For 1e5 samples: sd(mean) ≈ 1/√(2·1e5)·√2 ≈ 0.0032 per component
        // and sd(E|c|²) ≈ 1/√1e5 ≈ 0.0032, so 0.02 is above 3σ for both.
        let mut s = RandomStream::new(2024);
        let xs = sample_complex_gaussian(&mut s, 100_000);
        let n = xs.len() as f64;
        let mean: Complex64 = xs.iter().sum::<Complex64>() / n;
        let second = xs.iter().map(|c| c.norm_sqr()).sum::<f64>() / n;
        assert!(mean.norm() < 0.02, "mean {mean}");
        assert!((second - 1.0).abs() < 0.02, "E|c|^2 {second}");
    }
}
