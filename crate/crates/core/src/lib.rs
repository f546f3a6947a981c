//! Numerics for divergent perturbative series and for renormalization as
//! extension of distributions.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation; file formats, configuration and the command line live in
//! the `divren` companion crate.
//!
//! * [`series`]: toy-model coefficients, partial sums, optimal truncation,
//!   factorial growth fit.
//! * [`toy`]: high-precision values of `Z(λ) = ∫ exp(−x² − λx⁴) dx`.
//! * [`borel`]: Borel transform, Padé continuation and the Laplace integral.
//! * [`saddle`]: saddle points of `u² + u⁴` and the nonperturbative scale.
//! * [`distribution`]: test functions, distributions, scaling degree.
//! * [`extension`]: extension across the origin, counterterms, RG flow.
#![no_std]
// `num_traits::Float` supplies float math without std; once std is in the
// graph (tests, the CLI crate) inherent methods win and the imports go idle.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod borel;
pub mod distribution;
pub mod error;
pub mod extension;
pub mod jet;
pub mod linalg;
pub mod quadrature;
pub mod saddle;
pub mod series;
pub mod special;
pub mod toy;

pub use error::{Error, Result};
pub use quadrature::{QuadratureConfig, Scheme};
