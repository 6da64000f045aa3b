//! Complex linear algebra, domains, quadrature and the seeded randomness
//! contract shared by every other module.

mod domain;
mod hermitian;
mod point;
mod quadrature;
mod random;

pub use domain::Domain;
pub use hermitian::{determinant, mixed_discriminant, HermitianMatrix};
pub use point::ComplexPoint;
pub(crate) use point::complex_from_real;
pub(crate) use quadrature::par_map;
pub use quadrature::{gauss_legendre, halton, integrate, Estimate, QuadratureMethod, QuadratureSpec};
pub use random::{sample_complex_gaussian, RandomStream};

/// `n!` as a float.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
