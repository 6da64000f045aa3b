//! Numerical laboratory for random holomorphic sections on `ℂⁿ`.
//!
//! The crate computes both sides of the Crofton-type identity for random
//! sections of finite-dimensional Hermitian spaces:
//!
//! * the **average number of common zeros** of Fubini–Study random sections,
//!   estimated by Monte Carlo zero counting ([`zeros`]), and
//! * `n!` times the **Hermitian mixed volume** of the pulled-back metrics,
//!   obtained by quadrature of a mixed-discriminant density ([`crofton`]).
//!
//! For exponential sums it also provides the polytope side of the theory:
//! Newton polytopes, log-sum-exp smoothing of support functions, classical
//! mixed volumes and the mixed pseudo-volume reached as a `t → ∞` limit
//! ([`polytope`]).
//!
//! The crate is `no_std` (with `alloc`). The default `std` feature only adds
//! thread parallelism; results are bit-identical with and without it.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod crofton;
mod error;
pub mod numerics;
pub mod polytope;
pub mod sections;
pub mod zeros;

pub use error::{Error, Rejection, Result};
pub use num_complex::Complex64;

pub(crate) mod prelude {
    pub use alloc::{format, string::String, vec, vec::Vec};
    #[cfg(not(feature = "std"))]
    pub use num_traits::Float;
}
